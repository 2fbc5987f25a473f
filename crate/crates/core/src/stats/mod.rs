//! Dataset statistics and attribute correlations over phonological samples.

mod correlation;
mod report;

use thiserror::Error;

pub use correlation::{
    attribute_correlation, cramers_v, equal_frequency_bins, CorrelationMatrix, DEFAULT_BINS,
};
pub use report::{dataset_stats, Overall, StatsReport, Summary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
