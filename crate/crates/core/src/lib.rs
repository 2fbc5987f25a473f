//! Converts dual-view (frontal + side) 2D pose keypoint sequences and sign
//! annotations into normalized 3D skeleton samples and per-frame phonological
//! attribute samples, plus dataset statistics.
//!
//! The stages, in pipeline order:
//!
//! * [`ingest`]: pose documents, annotation catalog, segmentation, downsampling
//! * [`fuse`]: frontal/side fusion into 3D, shoulder-width normalization
//! * [`phono`]: handshape, palm orientation, movement, mouth opening
//! * [`stats`]: dataset statistics and attribute correlations
//! * [`synth`]: synthetic inputs with known attributes, for testing
//!
//! [`pipeline`] chains the stages per sample and [`docs`] reads and writes
//! the dataset documents.

pub mod docs;
pub mod fuse;
pub mod ingest;
pub mod model;
pub mod phono;
pub mod pipeline;
pub mod stats;
pub mod synth;
