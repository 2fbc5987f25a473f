use serde::{Deserialize, Serialize};

use super::DocError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub label: String,
    pub frames: usize,
    /// Path relative to the index file.
    pub file: String,
}

/// Lists the samples of one dataset directory, in build order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleIndex {
    pub samples: Vec<IndexEntry>,
}

impl SampleIndex {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("index serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }
}
