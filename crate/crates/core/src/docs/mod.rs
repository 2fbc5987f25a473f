//! Dataset documents: 3D skeleton samples, phonological samples and the
//! per-dataset index. Numbers are written with six fixed decimals so that
//! output is byte-stable.

mod dataset3d;
mod index;
mod phono_doc;

use std::fmt::Write;

use thiserror::Error;

pub use dataset3d::{read_sample3d, write_sample3d, Document3D};
pub use index::{IndexEntry, SampleIndex};
pub use phono_doc::{read_phono, write_phono};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
}

/// Fixed six-decimal rendering; never produces `-0.000000`.
pub fn fixed6(value: f64) -> String {
    let s = format!("{value:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

fn push_fixed6(out: &mut String, value: f64) {
    let start = out.len();
    write!(out, "{value:.6}").expect("writing to a String");
    if &out[start..] == "-0.000000" {
        out.replace_range(start..start + 1, "");
    }
}

fn push_json_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serializes"));
}
