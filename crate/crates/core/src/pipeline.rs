//! Per-sample chaining of the stages: segment, fuse, normalize, extract.

use thiserror::Error;

use crate::fuse::{fuse_frame, normalize_sample, FuseError, FusionConfig, WidthSource};
use crate::ingest::{segment_and_pair, AnnotationRecord, IngestError, ViewFrame2D};
use crate::model::{PhonoSample, Sample3D, SampleMeta};
use crate::phono::{extract_phono, PhonoConfig, PhonoError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub source_fps: u32,
    pub target_fps: u32,
    pub fusion: FusionConfig,
    pub phono: PhonoConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            source_fps: 60,
            target_fps: 3,
            fusion: FusionConfig::default(),
            phono: PhonoConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Fuse(#[from] FuseError),
    #[error(transparent)]
    Phono(#[from] PhonoError),
}

impl PipelineError {
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Ingest(e) => e.kind(),
            PipelineError::Fuse(e) => e.kind(),
            PipelineError::Phono(e) => e.kind(),
        }
    }
}

/// A normalized sample with the width each frame was divided by.
#[derive(Debug, Clone, PartialEq)]
pub struct Built3D {
    pub sample: Sample3D,
    pub widths: Vec<WidthSource>,
}

/// Segments one sign out of both view sequences and turns it into a
/// normalized 3D sample. Frames are renumbered 0.. in downsampled order.
pub fn build_sample3d(
    frontal: &[ViewFrame2D],
    side: &[ViewFrame2D],
    meta: &SampleMeta,
    cfg: &PipelineConfig,
) -> Result<Built3D, PipelineError> {
    cfg.fusion.validate()?;
    let pairs = segment_and_pair(frontal, side, meta, cfg.source_fps, cfg.target_fps)?;
    let fused: Vec<_> = pairs
        .iter()
        .enumerate()
        .map(|(t, (f, s))| {
            let mut frame = fuse_frame(f, s, &cfg.fusion);
            frame.frame_index = t;
            frame
        })
        .collect();
    let normalized = normalize_sample(&fused, &cfg.fusion)?;
    Ok(Built3D {
        sample: Sample3D {
            meta: meta.clone(),
            frames: normalized.frames,
        },
        widths: normalized.widths,
    })
}

pub fn build_phono(
    sample: &Sample3D,
    rec: &AnnotationRecord,
    cfg: &PipelineConfig,
) -> Result<PhonoSample, PipelineError> {
    Ok(extract_phono(sample, rec, &cfg.phono)?)
}

/// Both stages for one annotated sign.
pub fn run_sample(
    frontal: &[ViewFrame2D],
    side: &[ViewFrame2D],
    rec: &AnnotationRecord,
    cfg: &PipelineConfig,
) -> Result<(Built3D, PhonoSample), PipelineError> {
    let built = build_sample3d(frontal, side, &rec.meta, cfg)?;
    let phono = build_phono(&built.sample, rec, cfg)?;
    Ok((built, phono))
}
