use super::{IngestError, View, ViewFrame2D};
use crate::model::SampleMeta;

/// Number of source frames between kept frames.
pub fn stride(source_fps: u32, target_fps: u32) -> Result<usize, IngestError> {
    if target_fps == 0 || source_fps < target_fps || !source_fps.is_multiple_of(target_fps) {
        return Err(IngestError::NonIntegerStride {
            source_fps,
            target_fps,
        });
    }
    Ok((source_fps / target_fps) as usize)
}

/// Keeps list positions `0, stride, 2·stride, …`.
pub fn downsample_frames<T: Clone>(
    frames: &[T],
    source_fps: u32,
    target_fps: u32,
) -> Result<Vec<T>, IngestError> {
    let step = stride(source_fps, target_fps)?;
    Ok(frames.iter().step_by(step).cloned().collect())
}

fn slice<'a>(
    frames: &'a [ViewFrame2D],
    view: View,
    meta: &SampleMeta,
) -> Result<&'a [ViewFrame2D], IngestError> {
    let covered = match (frames.first(), frames.last()) {
        (Some(first), Some(last)) => {
            first.frame_index <= meta.frame_start && last.frame_index >= meta.frame_end
        }
        _ => false,
    };
    if !covered {
        return Err(IngestError::ViewOutOfRange {
            view,
            needed_start: meta.frame_start,
            needed_end: meta.frame_end,
            available: frames
                .first()
                .zip(frames.last())
                .map(|(a, b)| (a.frame_index, b.frame_index)),
        });
    }
    let lo = frames.partition_point(|f| f.frame_index < meta.frame_start);
    let hi = frames.partition_point(|f| f.frame_index <= meta.frame_end);
    Ok(&frames[lo..hi])
}

/// Cuts the sign `[frame_start, frame_end]` out of both views, downsamples each
/// from its first frame and pairs the results position by position.
pub fn segment_and_pair(
    frontal: &[ViewFrame2D],
    side: &[ViewFrame2D],
    meta: &SampleMeta,
    source_fps: u32,
    target_fps: u32,
) -> Result<Vec<(ViewFrame2D, ViewFrame2D)>, IngestError> {
    let step = stride(source_fps, target_fps)?;
    let front = downsample_frames(slice(frontal, View::Frontal, meta)?, source_fps, target_fps)?;
    let side = downsample_frames(slice(side, View::Side, meta)?, source_fps, target_fps)?;
    let expected = (meta.frame_end - meta.frame_start) / step + 1;
    let aligned = front.len() == expected
        && side.len() == expected
        && front.iter().zip(&side).enumerate().all(|(i, (f, s))| {
            f.frame_index == meta.frame_start + i * step && s.frame_index == f.frame_index
        });
    if !aligned {
        return Err(IngestError::LengthMismatch {
            frontal: front.len(),
            side: side.len(),
        });
    }
    Ok(front.into_iter().zip(side).collect())
}
