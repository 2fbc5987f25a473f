use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::StatsError;
use crate::docs::fixed6;
use crate::model::{Attribute, PhonoSample, NONE_LABEL};

/// Mean, minimum and maximum of a count over a grouping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
}

impl Summary {
    fn of(values: &[usize]) -> Summary {
        debug_assert!(!values.is_empty());
        Summary {
            mean: values.iter().sum::<usize>() as f64 / values.len() as f64,
            min: values.iter().copied().min().unwrap_or(0),
            max: values.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Overall {
    pub samples: usize,
    pub labels: usize,
    pub frames: usize,
    /// Distinct values per categorical attribute, `"none"` excluded.
    pub distinct: Vec<(Attribute, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub overall: Overall,
    /// Over samples: `frames` and `distinct_<attribute>`.
    pub per_sample: Vec<(String, Summary)>,
    /// Over labels: `samples` and `distinct_<attribute>`.
    pub per_label: Vec<(String, Summary)>,
}

type ValueSets = [BTreeSet<String>; 6];

fn value_sets(sample: &PhonoSample) -> ValueSets {
    let mut sets: ValueSets = Default::default();
    for frame in &sample.frames {
        for (set, attr) in sets.iter_mut().zip(Attribute::CATEGORICAL) {
            let value = frame.categorical(attr).expect("categorical attribute");
            if value != NONE_LABEL {
                set.insert(value);
            }
        }
    }
    sets
}

fn distinct_key(attr: Attribute) -> String {
    format!("distinct_{}", attr.name())
}

/// Overall counts plus per-sample and per-label summaries.
pub fn dataset_stats(samples: &[PhonoSample]) -> Result<StatsReport, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyDataset);
    }
    let sample_sets: Vec<ValueSets> = samples.iter().map(value_sets).collect();

    let mut overall_sets: ValueSets = Default::default();
    let mut by_label: BTreeMap<&str, (usize, ValueSets)> = BTreeMap::new();
    for (sample, sets) in samples.iter().zip(&sample_sets) {
        let entry = by_label.entry(sample.meta.label.as_str()).or_default();
        entry.0 += 1;
        for i in 0..sets.len() {
            overall_sets[i].extend(sets[i].iter().cloned());
            entry.1[i].extend(sets[i].iter().cloned());
        }
    }

    let overall = Overall {
        samples: samples.len(),
        labels: by_label.len(),
        frames: samples.iter().map(|s| s.frames.len()).sum(),
        distinct: Attribute::CATEGORICAL
            .into_iter()
            .zip(&overall_sets)
            .map(|(a, s)| (a, s.len()))
            .collect(),
    };

    let frames: Vec<usize> = samples.iter().map(|s| s.frames.len()).collect();
    let mut per_sample = vec![("frames".to_owned(), Summary::of(&frames))];
    let label_counts: Vec<usize> = by_label.values().map(|(n, _)| *n).collect();
    let mut per_label = vec![("samples".to_owned(), Summary::of(&label_counts))];
    for (i, attr) in Attribute::CATEGORICAL.into_iter().enumerate() {
        let counts: Vec<usize> = sample_sets.iter().map(|s| s[i].len()).collect();
        per_sample.push((distinct_key(attr), Summary::of(&counts)));
        let counts: Vec<usize> = by_label.values().map(|(_, s)| s[i].len()).collect();
        per_label.push((distinct_key(attr), Summary::of(&counts)));
    }

    Ok(StatsReport {
        overall,
        per_sample,
        per_label,
    })
}

fn push_summaries(out: &mut String, section: &str, rows: &[(String, Summary)], last: bool) {
    let _ = writeln!(out, "  \"{section}\": {{");
    for (i, (name, s)) in rows.iter().enumerate() {
        let sep = if i + 1 == rows.len() { "" } else { "," };
        let _ = writeln!(
            out,
            "    \"{name}\": {{\"mean\": {}, \"min\": {}, \"max\": {}}}{sep}",
            fixed6(s.mean),
            s.min,
            s.max
        );
    }
    out.push_str(if last { "  }\n" } else { "  },\n" });
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        let o = &self.overall;
        let mut out = String::from("{\n  \"overall\": {\n");
        let _ = writeln!(out, "    \"samples\": {},", o.samples);
        let _ = writeln!(out, "    \"labels\": {},", o.labels);
        let _ = writeln!(out, "    \"frames\": {},", o.frames);
        out.push_str("    \"distinct\": {\n");
        for (i, (attr, n)) in o.distinct.iter().enumerate() {
            let sep = if i + 1 == o.distinct.len() { "" } else { "," };
            let _ = writeln!(out, "      \"{}\": {n}{sep}", attr.name());
        }
        out.push_str("    }\n  },\n");
        push_summaries(&mut out, "per_sample", &self.per_sample, false);
        push_summaries(&mut out, "per_label", &self.per_label, true);
        out.push_str("}\n");
        out
    }

    /// `section,quantity,mean,min,max`; overall counts repeat the count in
    /// every column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,quantity,mean,min,max\n");
        let o = &self.overall;
        let overall = [
            ("samples".to_owned(), o.samples),
            ("labels".to_owned(), o.labels),
            ("frames".to_owned(), o.frames),
        ]
        .into_iter()
        .chain(o.distinct.iter().map(|(a, n)| (distinct_key(*a), *n)));
        for (name, n) in overall {
            let _ = writeln!(out, "overall,{name},{},{n},{n}", fixed6(n as f64));
        }
        for (section, rows) in [
            ("per_sample", &self.per_sample),
            ("per_label", &self.per_label),
        ] {
            for (name, s) in rows {
                let _ = writeln!(
                    out,
                    "{section},{name},{},{},{}",
                    fixed6(s.mean),
                    s.min,
                    s.max
                );
            }
        }
        out
    }

    pub fn summary(&self, section: &str, quantity: &str) -> Option<Summary> {
        let rows = match section {
            "per_sample" => &self.per_sample,
            "per_label" => &self.per_label,
            _ => return None,
        };
        rows.iter().find(|(n, _)| n == quantity).map(|(_, s)| *s)
    }
}
