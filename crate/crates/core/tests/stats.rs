use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use phonoskel::docs::{read_phono, write_phono, SampleIndex};
use phonoskel::model::{Attribute, PhonoSample};
use phonoskel::stats::{attribute_correlation, cramers_v, dataset_stats, StatsError};
use proptest::prelude::*;

fn fixture() -> Vec<PhonoSample> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/stats10/phono");
    let index =
        SampleIndex::from_json(&std::fs::read_to_string(root.join("index.json")).unwrap()).unwrap();
    index
        .samples
        .iter()
        .map(|e| read_phono(&std::fs::read_to_string(root.join(&e.file)).unwrap()).unwrap())
        .collect()
}

#[test]
fn fixture_report_matches_golden() {
    let golden = include_str!("fixtures/stats10/report.golden.json");
    let report = dataset_stats(&fixture()).unwrap();
    assert_eq!(report.to_json(), golden);
}

#[test]
fn fixture_documents_round_trip() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/stats10/phono/samples");
    for entry in std::fs::read_dir(root).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert_eq!(write_phono(&read_phono(&text).unwrap()), text);
    }
}

#[test]
fn report_ignores_sample_order() {
    let mut samples = fixture();
    let forward = dataset_stats(&samples).unwrap().to_json();
    samples.reverse();
    assert_eq!(dataset_stats(&samples).unwrap().to_json(), forward);
}

#[test]
fn empty_dataset_is_an_error() {
    assert_eq!(dataset_stats(&[]), Err(StatsError::EmptyDataset));
}

#[test]
fn fixture_correlation_symmetric_unit_diagonal() {
    let m = attribute_correlation(&fixture(), 5).unwrap();
    for (i, row) in m.values.iter().enumerate() {
        assert_eq!(row[i], 1.0);
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, m.values[j][i]);
            assert!((0.0..=1.0).contains(v));
        }
    }
    assert!(m
        .get(Attribute::DhHandshape, Attribute::MouthOpening)
        .is_some());
}

#[test]
fn correlation_ignores_sample_order() {
    let mut samples = fixture();
    let forward = attribute_correlation(&samples, 5).unwrap();
    samples.rotate_left(3);
    assert_eq!(attribute_correlation(&samples, 5).unwrap(), forward);
}

/// Straightforward contingency-table evaluation used as an oracle.
fn naive_v(a: &[u8], b: &[u8]) -> f64 {
    let n = a.len() as f64;
    let ra: BTreeSet<u8> = a.iter().copied().collect();
    let cb: BTreeSet<u8> = b.iter().copied().collect();
    let (r, k) = (ra.len() as f64, cb.len() as f64);
    if r < 2.0 || k < 2.0 {
        return 0.0;
    }
    let mut obs: BTreeMap<(u8, u8), f64> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *obs.entry((*x, *y)).or_default() += 1.0;
    }
    let mut chi2 = 0.0;
    for x in &ra {
        let rx = a.iter().filter(|v| *v == x).count() as f64;
        for y in &cb {
            let cy = b.iter().filter(|v| *v == y).count() as f64;
            let e = rx * cy / n;
            let o = obs.get(&(*x, *y)).copied().unwrap_or(0.0);
            chi2 += (o - e) * (o - e) / e;
        }
    }
    let phi2 = (chi2 / n - (k - 1.0) * (r - 1.0) / (n - 1.0)).max(0.0);
    let rc = r - (r - 1.0).powi(2) / (n - 1.0);
    let kc = k - (k - 1.0).powi(2) / (n - 1.0);
    let d = (kc - 1.0).min(rc - 1.0);
    if d <= 0.0 {
        0.0
    } else {
        (phi2 / d).sqrt().min(1.0)
    }
}

proptest! {
    #[test]
    fn cramers_v_matches_oracle(pairs in prop::collection::vec((0u8..4, 0u8..5), 2..200)) {
        let (a, b): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
        let v = cramers_v(&a, &b);
        prop_assert!((0.0..=1.0).contains(&v));
        // squared, since sqrt amplifies rounding when the corrected phi² is 0
        let w = naive_v(&a, &b);
        prop_assert!((v * v - w * w).abs() < 1e-12, "{v} vs {w}");
        prop_assert!((v - cramers_v(&b, &a)).abs() < 1e-12);
    }
}
