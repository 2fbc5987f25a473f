//! 3D skeletons from paired frontal/side frames, normalized by shoulder width.
//!
//! x and y come from the frontal view, z from the side view's x axis. The
//! side view's y repeats the frontal y and is only used as a quality metric.

use thiserror::Error;

use crate::ingest::ViewFrame2D;
use crate::model::{euclidean_distance, Keypoint3D, SkeletonFrame, LEFT_SHOULDER, RIGHT_SHOULDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideCameraSide {
    SignerLeft,
    SignerRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    /// Side-view pixel to frontal-view pixel scale.
    pub z_scale: f64,
    pub side_camera_side: SideCameraSide,
    /// Joints seen below this score in either view are dropped.
    pub min_view_score: f64,
    pub epsilon_width: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            z_scale: 1.0,
            side_camera_side: SideCameraSide::SignerRight,
            min_view_score: 0.0,
            epsilon_width: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuseError {
    #[error("shoulder keypoint missing")]
    MissingShoulder,
    #[error("shoulder width {width} not above {eps}")]
    DegenerateWidth { width: f64, eps: f64 },
    #[error("no frame of the sample has a usable shoulder width")]
    UnnormalizableSample,
    #[error("invalid fusion config: {0}")]
    InvalidConfig(&'static str),
}

impl FuseError {
    pub fn kind(&self) -> &'static str {
        match self {
            FuseError::MissingShoulder => "MissingShoulder",
            FuseError::DegenerateWidth { .. } => "DegenerateWidth",
            FuseError::UnnormalizableSample => "UnnormalizableSample",
            FuseError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<(), FuseError> {
        if !(self.z_scale > 0.0 && self.z_scale.is_finite()) {
            return Err(FuseError::InvalidConfig("z_scale must be positive"));
        }
        if self.epsilon_width.is_nan() || self.epsilon_width <= 0.0 {
            return Err(FuseError::InvalidConfig("epsilon_width must be positive"));
        }
        if !(0.0..=1.0).contains(&self.min_view_score) {
            return Err(FuseError::InvalidConfig("min_view_score must be in [0, 1]"));
        }
        Ok(())
    }
}

/// Combines one frontal and one side frame into an unnormalized 3D frame in
/// frontal pixel units. `frame_index` is copied from the frontal frame.
pub fn fuse_frame(front: &ViewFrame2D, side: &ViewFrame2D, cfg: &FusionConfig) -> SkeletonFrame {
    let depth_sign = match cfg.side_camera_side {
        SideCameraSide::SignerRight => 1.0,
        SideCameraSide::SignerLeft => -1.0,
    };
    let keypoints = front.keypoints.map(|role, f| {
        let s = side.keypoints.get(role);
        let score = f.score.min(s.score);
        if score == 0.0 || f.score < cfg.min_view_score || s.score < cfg.min_view_score {
            Keypoint3D::MISSING
        } else {
            Keypoint3D::new(f.x, f.y, depth_sign * s.x * cfg.z_scale, score)
        }
    });
    SkeletonFrame {
        frame_index: front.frame_index,
        keypoints,
    }
}

/// Largest `|y_front − y_side|` over joints seen in both views.
pub fn vertical_discrepancy(front: &ViewFrame2D, side: &ViewFrame2D) -> f64 {
    front
        .keypoints
        .iter()
        .map(|(role, f)| (f, side.keypoints.get(role)))
        .filter(|(f, s)| f.score > 0.0 && s.score > 0.0)
        .map(|(f, s)| (f.y - s.y).abs())
        .fold(0.0, f64::max)
}

/// Distance between the two shoulders in the frame's current units.
pub fn shoulder_width(frame: &SkeletonFrame) -> Result<f64, FuseError> {
    let (l, r) = (frame.get(LEFT_SHOULDER), frame.get(RIGHT_SHOULDER));
    if l.is_missing() || r.is_missing() {
        return Err(FuseError::MissingShoulder);
    }
    Ok(euclidean_distance(l.position(), r.position()))
}

/// Divides every present keypoint by `width`.
pub fn normalize_frame(
    frame: &SkeletonFrame,
    width: f64,
    eps: f64,
) -> Result<SkeletonFrame, FuseError> {
    if width.is_nan() || width <= eps {
        return Err(FuseError::DegenerateWidth { width, eps });
    }
    let keypoints = frame.keypoints.map(|_, k| {
        if k.is_missing() {
            Keypoint3D::MISSING
        } else {
            Keypoint3D::new(k.x / width, k.y / width, k.z / width, k.score)
        }
    });
    Ok(SkeletonFrame {
        frame_index: frame.frame_index,
        keypoints,
    })
}

/// Where a frame's normalization width came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WidthSource {
    /// The frame's own shoulder width.
    Frame(f64),
    /// Median of the sample's valid widths.
    Median(f64),
}

impl WidthSource {
    pub fn width(self) -> f64 {
        match self {
            WidthSource::Frame(w) | WidthSource::Median(w) => w,
        }
    }

    pub fn is_fallback(self) -> bool {
        matches!(self, WidthSource::Median(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFrames {
    pub frames: Vec<SkeletonFrame>,
    pub widths: Vec<WidthSource>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Normalizes each frame by its own shoulder width; frames without a usable
/// width fall back to the median of the valid ones.
pub fn normalize_sample(
    frames: &[SkeletonFrame],
    cfg: &FusionConfig,
) -> Result<NormalizedFrames, FuseError> {
    let measured: Vec<Option<f64>> = frames
        .iter()
        .map(|f| shoulder_width(f).ok().filter(|&w| w > cfg.epsilon_width))
        .collect();
    let mut valid: Vec<f64> = measured.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Err(FuseError::UnnormalizableSample);
    }
    let fallback = median(&mut valid);

    let mut out = NormalizedFrames {
        frames: Vec::with_capacity(frames.len()),
        widths: Vec::with_capacity(frames.len()),
    };
    for (frame, width) in frames.iter().zip(measured) {
        let source = width.map_or(WidthSource::Median(fallback), WidthSource::Frame);
        out.frames
            .push(normalize_frame(frame, source.width(), cfg.epsilon_width)?);
        out.widths.push(source);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::View;
    use crate::model::{Group, Groups, Keypoint2D, KeypointRole};

    fn view_frame(view: View, role: KeypointRole, kp: Keypoint2D) -> ViewFrame2D {
        let mut keypoints = Groups::filled(Keypoint2D::MISSING);
        *keypoints.get_mut(role) = kp;
        ViewFrame2D {
            view,
            frame_index: 0,
            keypoints,
        }
    }

    const NOSE: KeypointRole = KeypointRole::new(Group::Body, 0);

    #[test]
    fn fuse_examples() {
        let front = view_frame(View::Frontal, NOSE, Keypoint2D::new(100.0, 200.0, 0.9));
        let side = view_frame(View::Side, NOSE, Keypoint2D::new(50.0, 201.0, 0.7));
        let cfg = FusionConfig::default();
        assert_eq!(
            *fuse_frame(&front, &side, &cfg).get(NOSE),
            Keypoint3D::new(100.0, 200.0, 50.0, 0.7)
        );

        let half = FusionConfig {
            z_scale: 0.5,
            ..cfg
        };
        assert_eq!(fuse_frame(&front, &side, &half).get(NOSE).z, 25.0);

        let left = FusionConfig {
            side_camera_side: SideCameraSide::SignerLeft,
            ..cfg
        };
        assert_eq!(fuse_frame(&front, &side, &left).get(NOSE).z, -50.0);

        let side_missing = view_frame(View::Side, NOSE, Keypoint2D::MISSING);
        assert_eq!(
            *fuse_frame(&front, &side_missing, &cfg).get(NOSE),
            Keypoint3D::MISSING
        );

        let strict = FusionConfig {
            min_view_score: 0.8,
            ..cfg
        };
        assert_eq!(
            *fuse_frame(&front, &side, &strict).get(NOSE),
            Keypoint3D::MISSING
        );

        assert_eq!(vertical_discrepancy(&front, &side), 1.0);
    }

    fn shoulders(l: Keypoint3D, r: Keypoint3D) -> SkeletonFrame {
        let mut keypoints = Groups::filled(Keypoint3D::MISSING);
        *keypoints.get_mut(LEFT_SHOULDER) = l;
        *keypoints.get_mut(RIGHT_SHOULDER) = r;
        SkeletonFrame {
            frame_index: 0,
            keypoints,
        }
    }

    #[test]
    fn shoulder_width_examples() {
        let f = shoulders(
            Keypoint3D::new(0.3, 0.0, 0.0, 1.0),
            Keypoint3D::new(-0.3, 0.0, 0.0, 1.0),
        );
        assert!((shoulder_width(&f).unwrap() - 0.6).abs() < 1e-15);
        let same = Keypoint3D::new(1.0, 2.0, 3.0, 0.5);
        assert_eq!(shoulder_width(&shoulders(same, same)).unwrap(), 0.0);
        let f = shoulders(Keypoint3D::new(0.3, 0.0, 0.0, 0.0), same);
        assert_eq!(shoulder_width(&f), Err(FuseError::MissingShoulder));
    }

    #[test]
    fn normalize_frame_examples() {
        let mut f = shoulders(Keypoint3D::MISSING, Keypoint3D::MISSING);
        *f.keypoints.get_mut(NOSE) = Keypoint3D::new(0.6, 1.2, 0.3, 0.8);
        let n = normalize_frame(&f, 0.6, 1e-6).unwrap();
        let k = n.get(NOSE);
        assert!(
            (k.x - 1.0).abs() < 1e-15 && (k.y - 2.0).abs() < 1e-15 && (k.z - 0.5).abs() < 1e-15
        );
        assert_eq!(k.score, 0.8);
        assert_eq!(*n.get(LEFT_SHOULDER), Keypoint3D::MISSING);
        assert_eq!(normalize_frame(&f, 1.0, 1e-6).unwrap(), f);
        assert!(matches!(
            normalize_frame(&f, 1e-9, 1e-6),
            Err(FuseError::DegenerateWidth { .. })
        ));
    }

    #[test]
    fn normalize_sample_fallback() {
        let good = shoulders(
            Keypoint3D::new(1.0, 0.0, 0.0, 1.0),
            Keypoint3D::new(-1.0, 0.0, 0.0, 1.0),
        );
        let bad = shoulders(Keypoint3D::MISSING, Keypoint3D::new(-1.0, 4.0, 0.0, 1.0));
        let cfg = FusionConfig::default();

        let out = normalize_sample(&[good.clone(), good.clone(), good.clone()], &cfg).unwrap();
        for f in &out.frames {
            assert!((shoulder_width(f).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(f.get(LEFT_SHOULDER).x, 0.5);
        }

        let out = normalize_sample(&[good.clone(), bad.clone(), good.clone()], &cfg).unwrap();
        assert_eq!(out.widths[1], WidthSource::Median(2.0));
        assert_eq!(out.frames[1].get(RIGHT_SHOULDER).y, 2.0);

        assert_eq!(
            normalize_sample(&[bad.clone(), bad], &cfg),
            Err(FuseError::UnnormalizableSample)
        );
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
