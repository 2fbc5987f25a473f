//! Parsing of per-view pose documents and the annotation catalog, sign
//! segmentation and frame-rate reduction.

mod annotations;
mod pose_doc;
mod segment;

use std::fmt;

use thiserror::Error;

use crate::model::{Group, Groups, Keypoint2D};

pub use annotations::{
    load_annotations, parse_annotations, write_annotations, AnnotationCatalog, AnnotationRecord,
    HandshapeCatalog, SkippedRow, ANNOTATION_COLUMNS,
};
pub use pose_doc::{load_view, parse_view_frames, write_frame_document, write_video_document};
pub use segment::{downsample_frames, segment_and_pair, stride};

/// Camera perspective a 2D frame was captured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum View {
    Frontal,
    Side,
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Frontal => "frontal",
            View::Side => "side",
        })
    }
}

/// Estimator output for one source-video frame of one view.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewFrame2D {
    pub view: View,
    /// Source-video frame number.
    pub frame_index: usize,
    pub keypoints: Groups<Keypoint2D>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed pose document: {0}")]
    MalformedDocument(String),
    #[error("{group} group has {found} keypoints, expected {expected}")]
    WrongCardinality {
        group: Group,
        found: usize,
        expected: usize,
    },
    #[error("malformed annotation catalog: {0}")]
    MalformedCatalog(String),
    #[error("frame rate {source_fps} -> {target_fps} does not give a positive integer stride")]
    NonIntegerStride { source_fps: u32, target_fps: u32 },
    #[error(
        "{view} view covers frames {available:?}, segment needs {needed_start}..={needed_end}"
    )]
    ViewOutOfRange {
        view: View,
        needed_start: usize,
        needed_end: usize,
        available: Option<(usize, usize)>,
    },
    #[error("views disagree after slicing: {frontal} frontal vs {side} side frames")]
    LengthMismatch { frontal: usize, side: usize },
    #[error("no {view} pose document for video `{key}`")]
    MissingView { view: View, key: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl IngestError {
    /// Short machine-readable category, used in skip reports.
    pub fn kind(&self) -> &'static str {
        match self {
            IngestError::MalformedDocument(_) => "MalformedDocument",
            IngestError::WrongCardinality { .. } => "WrongCardinality",
            IngestError::MalformedCatalog(_) => "MalformedCatalog",
            IngestError::NonIntegerStride { .. } => "NonIntegerStride",
            IngestError::ViewOutOfRange { .. } => "ViewOutOfRange",
            IngestError::LengthMismatch { .. } => "LengthMismatch",
            IngestError::MissingView { .. } => "MissingView",
            IngestError::Io { .. } => "Io",
        }
    }
}
