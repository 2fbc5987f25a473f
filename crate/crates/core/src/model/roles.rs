//! Keypoint role table: `(group, index) → name`, plus the position each role
//! is read from in the estimator's flat keypoint arrays.

use std::path::Path;

use thiserror::Error;

use super::skeleton::{Group, KeypointRole};

const DEFAULT_TABLE: &str = include_str!("../../assets/roles.csv");

#[derive(Debug, Error)]
pub enum RoleTableError {
    #[error("role table line {line}: {message}")]
    Invalid { line: u64, message: String },
    #[error("role table: group `{group}` has {found} roles, expected {expected}")]
    Incomplete {
        group: Group,
        found: usize,
        expected: usize,
    },
    #[error("role table: {0}")]
    Csv(#[from] csv::Error),
    #[error("reading role table {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoleTable {
    names: [Vec<String>; 4],
    source_index: [Vec<usize>; 4],
}

impl Default for RoleTable {
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("bundled role table is valid")
    }
}

impl RoleTable {
    pub fn load(path: &Path) -> Result<Self, RoleTableError> {
        let text = std::fs::read_to_string(path).map_err(|source| RoleTableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `group,index,name[,source_index]` rows with a header line.
    /// Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self, RoleTableError> {
        let mut names: [Vec<Option<String>>; 4] = Group::ALL.map(|g| vec![None; g.size()]);
        let mut sources: [Vec<usize>; 4] = Group::ALL.map(|g| (0..g.size()).collect());

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        for record in reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let invalid = |message: String| RoleTableError::Invalid { line, message };
            if record.len() < 3 || record.len() > 4 {
                return Err(invalid(format!(
                    "expected 3 or 4 columns, found {}",
                    record.len()
                )));
            }
            let group = Group::from_key(&record[0])
                .ok_or_else(|| invalid(format!("unknown group `{}`", &record[0])))?;
            let index: usize = record[1]
                .parse()
                .map_err(|_| invalid(format!("bad index `{}`", &record[1])))?;
            if index >= group.size() {
                return Err(invalid(format!("index {index} out of range for {group}")));
            }
            let slot = &mut names[group as usize][index];
            if slot.is_some() {
                return Err(invalid(format!("duplicate role {group}[{index}]")));
            }
            if record[2].is_empty() {
                return Err(invalid("empty name".into()));
            }
            *slot = Some(record[2].to_owned());
            if let Some(src) = record.get(3).filter(|s| !s.is_empty()) {
                sources[group as usize][index] = src
                    .parse()
                    .map_err(|_| invalid(format!("bad source_index `{src}`")))?;
            }
        }

        let mut out: [Vec<String>; 4] = Default::default();
        for g in Group::ALL {
            let filled: Vec<String> = names[g as usize].iter().flatten().cloned().collect();
            if filled.len() != g.size() {
                return Err(RoleTableError::Incomplete {
                    group: g,
                    found: filled.len(),
                    expected: g.size(),
                });
            }
            out[g as usize] = filled;
        }
        Ok(Self {
            names: out,
            source_index: sources,
        })
    }

    pub fn name(&self, role: KeypointRole) -> &str {
        &self.names[role.group as usize][role.index]
    }

    pub fn names(&self, group: Group) -> &[String] {
        &self.names[group as usize]
    }

    /// Position in the estimator's array that feeds each role of `group`.
    pub fn source_indices(&self, group: Group) -> &[usize] {
        &self.source_index[group as usize]
    }

    /// Number of keypoints the estimator must report for `group`.
    pub fn source_len(&self, group: Group) -> usize {
        self.source_indices(group).iter().max().map_or(0, |m| m + 1)
    }
}
