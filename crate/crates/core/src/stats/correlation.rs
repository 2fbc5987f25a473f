use std::collections::BTreeMap;
use std::fmt::Write;

use super::StatsError;
use crate::docs::fixed6;
use crate::model::{Attribute, PhonoSample};

pub const DEFAULT_BINS: usize = 5;

/// Bias-corrected Cramér's V between two paired categorical columns.
///
/// A column with a single category has no variance and yields 0.
pub fn cramers_v<T: Ord>(a: &[T], b: &[T]) -> f64 {
    assert_eq!(a.len(), b.len(), "columns must be paired");
    let n = a.len();
    if n < 2 {
        return 0.0;
    }
    let mut table: BTreeMap<(&T, &T), usize> = BTreeMap::new();
    let mut rows: BTreeMap<&T, usize> = BTreeMap::new();
    let mut cols: BTreeMap<&T, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let (r, k) = (rows.len() as f64, cols.len() as f64);
    if rows.len() < 2 || cols.len() < 2 {
        return 0.0;
    }
    let n_f = n as f64;
    // chi² = n (Σ O² / (row · col) − 1)
    // summed in sorted order so swapping the columns gives the same bits
    let mut terms: Vec<f64> = table
        .iter()
        .map(|((x, y), &o)| {
            let o = o as f64;
            o * o / (rows[x] as f64 * cols[y] as f64)
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    let ratio_sum: f64 = terms.iter().sum();
    let phi2 = (n_f * (ratio_sum - 1.0)) / n_f;
    let phi2_corr = (phi2 - (k - 1.0) * (r - 1.0) / (n_f - 1.0)).max(0.0);
    let r_corr = (r - 1.0) - (r - 1.0).powi(2) / (n_f - 1.0);
    let k_corr = (k - 1.0) - (k - 1.0).powi(2) / (n_f - 1.0);
    let denom = r_corr.min(k_corr);
    if denom <= 0.0 {
        return 0.0;
    }
    (phi2_corr / denom).sqrt().clamp(0.0, 1.0)
}

/// Assigns each value to one of `bins` equal-frequency bins. Equal values
/// always share a bin, so heavy ties produce fewer occupied bins.
pub fn equal_frequency_bins(values: &[f64], bins: usize) -> Vec<usize> {
    if values.is_empty() || bins == 0 {
        return vec![0; values.len()];
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let cuts: Vec<f64> = (1..bins)
        .map(|j| sorted[(j * n / bins).min(n - 1)])
        .collect();
    values
        .iter()
        .map(|v| cuts.partition_point(|c| c.total_cmp(v).is_le()))
        .collect()
}

/// Symmetric matrix of association strengths between the attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub attributes: Vec<Attribute>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: Attribute, b: Attribute) -> Option<f64> {
        let i = self.attributes.iter().position(|&x| x == a)?;
        let j = self.attributes.iter().position(|&x| x == b)?;
        Some(self.values[i][j])
    }

    /// Square table with a header row and a leading attribute column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("attribute");
        for a in &self.attributes {
            out.push(',');
            out.push_str(a.name());
        }
        out.push('\n');
        for (a, row) in self.attributes.iter().zip(&self.values) {
            out.push_str(a.name());
            for v in row {
                out.push(',');
                out.push_str(&fixed6(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Long `row,column,value` form for plotting tools.
    pub fn to_long_csv(&self) -> String {
        let mut out = String::from("row,column,value\n");
        for (a, row) in self.attributes.iter().zip(&self.values) {
            for (b, v) in self.attributes.iter().zip(row) {
                let _ = writeln!(out, "{},{},{}", a.name(), b.name(), fixed6(*v));
            }
        }
        out
    }
}

/// Cramér's V between every pair of attributes over all frames, with mouth
/// opening discretized into `bins` equal-frequency bins.
pub fn attribute_correlation(
    samples: &[PhonoSample],
    bins: usize,
) -> Result<CorrelationMatrix, StatsError> {
    let frames: Vec<_> = samples.iter().flat_map(|s| &s.frames).collect();
    if frames.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "{} frames, need at least 2",
            frames.len()
        )));
    }
    if bins < 2 {
        return Err(StatsError::InsufficientData(format!(
            "{bins} bins, need at least 2"
        )));
    }
    let mouth: Vec<f64> = frames.iter().map(|f| f.mouth_opening.value).collect();
    let mouth_bins: Vec<String> = equal_frequency_bins(&mouth, bins)
        .into_iter()
        .map(|b| format!("bin{b}"))
        .collect();
    let columns: Vec<Vec<String>> = Attribute::ALL
        .iter()
        .map(|&attr| match attr {
            Attribute::MouthOpening => mouth_bins.clone(),
            _ => frames
                .iter()
                .map(|f| f.categorical(attr).expect("categorical attribute"))
                .collect(),
        })
        .collect();

    let m = columns.len();
    let mut values = vec![vec![0.0; m]; m];
    for i in 0..m {
        values[i][i] = 1.0;
        for j in i + 1..m {
            let v = cramers_v(&columns[i], &columns[j]);
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(CorrelationMatrix {
        attributes: Attribute::ALL.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_columns() {
        let a: Vec<u32> = (0..1000).map(|i| (i * 7919) % 5).collect();
        assert_eq!(cramers_v(&a, &a), 1.0);
        let b = ["x", "y", "x", "y", "z"];
        assert_eq!(cramers_v(&b, &b), 1.0);
    }

    #[test]
    fn constant_column() {
        let a = vec![1; 50];
        let b: Vec<i32> = (0..50).map(|i| i % 3).collect();
        assert_eq!(cramers_v(&a, &b), 0.0);
        assert_eq!(cramers_v(&b, &a), 0.0);
    }

    #[test]
    fn hand_computed_table() {
        // 2x2 table [[3, 1], [1, 3]], n = 8: chi² = 2, phi² = 0.25,
        // corrected phi² = 0.25 − 1/7, corrected df = 1 − 1/7.
        let a = [0, 0, 0, 0, 1, 1, 1, 1];
        let b = [0, 0, 0, 1, 0, 1, 1, 1];
        let expected = ((0.25f64 - 1.0 / 7.0) / (1.0 - 1.0 / 7.0)).sqrt();
        assert!((cramers_v(&a, &b) - expected).abs() < 1e-12);
    }

    #[test]
    fn bins_equal_frequency_and_ties() {
        let v: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(
            equal_frequency_bins(&v, 5),
            vec![0, 0, 1, 1, 2, 2, 3, 3, 4, 4]
        );
        let tied = [1.0, 1.0, 1.0, 1.0, 2.0];
        let b = equal_frequency_bins(&tied, 2);
        assert!(b[..4].iter().all(|&x| x == b[0]));
    }
}
