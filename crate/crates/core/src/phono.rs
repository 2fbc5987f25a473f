//! Per-frame phonological attributes: handshape, palm orientation, hand
//! movement and mouth opening.

use thiserror::Error;

use crate::ingest::AnnotationRecord;
use crate::model::{
    cross_product, euclidean_distance, AttributeValue, Depth, Direction, DirectionSet, Group, Hand,
    Handshape, Horizontal, Keypoint3D, KeypointRole, PhonoFrame, PhonoSample, Sample3D,
    SkeletonFrame, Vector3, Vertical, NONE_LABEL,
};

/// Smallest cross-product or mouth-width magnitude treated as non-degenerate.
pub const DEGENERACY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhonoError {
    #[error("palm keypoints are collinear")]
    DegeneratePlane,
    #[error("mouth corners coincide")]
    DegenerateMouth,
    #[error("annotation does not match sample: {0}")]
    InvalidAnnotation(String),
    #[error("invalid phonology config: {0}")]
    InvalidConfig(String),
}

impl PhonoError {
    pub fn kind(&self) -> &'static str {
        match self {
            PhonoError::DegeneratePlane => "DegeneratePlane",
            PhonoError::DegenerateMouth => "DegenerateMouth",
            PhonoError::InvalidAnnotation(_) => "InvalidAnnotation",
            PhonoError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

/// Hand keypoint indices: wrist, little-finger base, index-finger base,
/// middle-finger base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandRoles {
    pub wrist: usize,
    pub little_base: usize,
    pub index_base: usize,
    pub middle_base: usize,
}

impl Default for HandRoles {
    fn default() -> Self {
        Self {
            wrist: 0,
            little_base: 17,
            index_base: 5,
            middle_base: 9,
        }
    }
}

/// Face keypoint indices of the upper/lower lip midpoints and mouth corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LipRoles {
    pub labiale_superius: usize,
    pub labiale_inferius: usize,
    pub cheilion_right: usize,
    pub cheilion_left: usize,
}

impl Default for LipRoles {
    fn default() -> Self {
        Self {
            labiale_superius: 51,
            labiale_inferius: 57,
            cheilion_right: 54,
            cheilion_left: 48,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhonoConfig {
    pub threshold_k: f64,
    pub hand: HandRoles,
    pub lips: LipRoles,
}

impl Default for PhonoConfig {
    fn default() -> Self {
        Self {
            threshold_k: 0.30,
            hand: HandRoles::default(),
            lips: LipRoles::default(),
        }
    }
}

impl PhonoConfig {
    pub fn validate(&self) -> Result<(), PhonoError> {
        if !(self.threshold_k > 0.0 && self.threshold_k.is_finite()) {
            return Err(PhonoError::InvalidConfig(format!(
                "threshold_k {} must be positive",
                self.threshold_k
            )));
        }
        let h = self.hand;
        let l = self.lips;
        let hand_ok = [h.wrist, h.little_base, h.index_base, h.middle_base]
            .iter()
            .all(|&i| i < Group::LeftHand.size());
        let lips_ok = [
            l.labiale_superius,
            l.labiale_inferius,
            l.cheilion_right,
            l.cheilion_left,
        ]
        .iter()
        .all(|&i| i < Group::Face.size());
        if !(hand_ok && lips_ok) {
            return Err(PhonoError::InvalidConfig(
                "landmark index out of group bounds".into(),
            ));
        }
        Ok(())
    }
}

/// Normal of the palm plane through wrist `w`, little-finger base `l` and
/// index-finger base `i`. Left palm: WI × WL; right palm: WL × WI.
pub fn palm_normal(w: Vector3, l: Vector3, i: Vector3, side: Hand) -> Result<Vector3, PhonoError> {
    let (wl, wi) = (l - w, i - w);
    let n = match side {
        Hand::Left => cross_product(wi, wl),
        Hand::Right => cross_product(wl, wi),
    };
    if n.norm() < DEGENERACY_EPS {
        return Err(PhonoError::DegeneratePlane);
    }
    Ok(n)
}

/// Up to one label per axis, each requiring its component to pass `±k` strictly.
pub fn classify_direction(v: Vector3, k: f64) -> DirectionSet {
    DirectionSet {
        horizontal: if v.x < -k {
            Some(Horizontal::Right)
        } else if v.x > k {
            Some(Horizontal::Left)
        } else {
            None
        },
        vertical: if v.y < -k {
            Some(Vertical::Up)
        } else if v.y > k {
            Some(Vertical::Down)
        } else {
            None
        },
        depth: if v.z < -k {
            Some(Depth::Body)
        } else if v.z > k {
            Some(Depth::Front)
        } else {
            None
        },
    }
}

/// Displacement of the middle-finger base between consecutive frames.
pub fn motion_vector(current: Vector3, previous: Vector3) -> Vector3 {
    current - previous
}

/// First `ceil(n/2)` frames get the initial handshape, the rest the final one.
pub fn assign_handshapes<S: Clone>(n_frames: usize, initial: S, final_: S) -> Vec<S> {
    let first_half = n_frames.div_ceil(2);
    (0..n_frames)
        .map(|i| {
            if i < first_half {
                initial.clone()
            } else {
                final_.clone()
            }
        })
        .collect()
}

/// Vermilion height over mouth width.
pub fn mouth_opening(
    ls: Vector3,
    li: Vector3,
    ch_r: Vector3,
    ch_l: Vector3,
) -> Result<f64, PhonoError> {
    let width = euclidean_distance(ch_r, ch_l);
    if width <= DEGENERACY_EPS {
        return Err(PhonoError::DegenerateMouth);
    }
    Ok(euclidean_distance(ls, li) / width)
}

/// Mean of the involved keypoint scores; zero if any of them is zero.
pub fn attribute_score(involved: &[f64]) -> f64 {
    if involved.is_empty() || involved.contains(&0.0) {
        return 0.0;
    }
    involved.iter().sum::<f64>() / involved.len() as f64
}

fn missing_direction() -> Direction {
    AttributeValue::new(DirectionSet::EMPTY, 0.0)
}

fn orientation(frame: &SkeletonFrame, hand: Hand, roles: &HandRoles, k: f64) -> Direction {
    let group = hand.group();
    let kp = |i| *frame.get(KeypointRole::new(group, i));
    let points: [Keypoint3D; 3] = [kp(roles.wrist), kp(roles.little_base), kp(roles.index_base)];
    if points.iter().any(Keypoint3D::is_missing) {
        return missing_direction();
    }
    let [w, l, i] = points.map(|p| p.position());
    match palm_normal(w, l, i, hand) {
        Ok(n) => AttributeValue::new(
            classify_direction(n, k),
            attribute_score(&points.map(|p| p.score)),
        ),
        Err(_) => missing_direction(),
    }
}

fn movement(
    current: &SkeletonFrame,
    previous: Option<&SkeletonFrame>,
    hand: Hand,
    roles: &HandRoles,
    k: f64,
) -> Direction {
    let Some(previous) = previous else {
        return missing_direction();
    };
    let role = KeypointRole::new(hand.group(), roles.middle_base);
    let (now, before) = (current.get(role), previous.get(role));
    if now.is_missing() || before.is_missing() {
        return missing_direction();
    }
    AttributeValue::new(
        classify_direction(motion_vector(now.position(), before.position()), k),
        attribute_score(&[now.score, before.score]),
    )
}

fn mouth(frame: &SkeletonFrame, lips: &LipRoles) -> AttributeValue<f64> {
    let kp = |i| *frame.get(KeypointRole::new(Group::Face, i));
    let points = [
        kp(lips.labiale_superius),
        kp(lips.labiale_inferius),
        kp(lips.cheilion_right),
        kp(lips.cheilion_left),
    ];
    if points.iter().any(Keypoint3D::is_missing) {
        return AttributeValue::new(0.0, 0.0);
    }
    let [ls, li, ch_r, ch_l] = points.map(|p| p.position());
    match mouth_opening(ls, li, ch_r, ch_l) {
        Ok(ratio) => AttributeValue::new(ratio, attribute_score(&points.map(|p| p.score))),
        Err(_) => AttributeValue::new(0.0, 0.0),
    }
}

fn handshapes(n: usize, codes: Option<(&str, &str)>) -> Vec<Handshape> {
    match codes {
        Some((initial, final_)) => assign_handshapes(n, initial, final_)
            .into_iter()
            .map(|c| AttributeValue::new(c.to_owned(), 1.0))
            .collect(),
        None => vec![AttributeValue::new(NONE_LABEL.to_owned(), 0.0); n],
    }
}

/// Computes every attribute for every frame of a normalized sample.
///
/// Degenerate or missing geometry yields `"none"`/0.0 with score 0 for that
/// attribute only.
pub fn extract_phono(
    sample: &Sample3D,
    rec: &AnnotationRecord,
    cfg: &PhonoConfig,
) -> Result<PhonoSample, PhonoError> {
    cfg.validate()?;
    if sample.meta != rec.meta {
        return Err(PhonoError::InvalidAnnotation(format!(
            "sample {} annotated as {}",
            sample.meta.sample_id(),
            rec.meta.sample_id()
        )));
    }
    let n = sample.frames.len();
    let span = rec.meta.frame_end - rec.meta.frame_start + 1;
    if n == 0 || n > span {
        return Err(PhonoError::InvalidAnnotation(format!(
            "{n} frames for a segment of {span} source frames"
        )));
    }

    let dh = rec.dominant();
    let ndh = dh.other();
    let dh_shapes = handshapes(n, Some((&rec.initial_handshape, &rec.final_handshape)));
    let ndh_shapes = handshapes(
        n,
        rec.ndh_handshapes
            .as_ref()
            .map(|(a, b)| (a.as_str(), b.as_str())),
    );
    let k = cfg.threshold_k;

    let frames = sample
        .frames
        .iter()
        .enumerate()
        .zip(dh_shapes.into_iter().zip(ndh_shapes))
        .map(|((t, frame), (dh_handshape, ndh_handshape))| {
            let previous = t.checked_sub(1).map(|p| &sample.frames[p]);
            PhonoFrame {
                frame_index: t,
                dh_handshape,
                ndh_handshape,
                dh_orientation: orientation(frame, dh, &cfg.hand, k),
                ndh_orientation: orientation(frame, ndh, &cfg.hand, k),
                dh_movement: movement(frame, previous, dh, &cfg.hand, k),
                ndh_movement: movement(frame, previous, ndh, &cfg.hand, k),
                mouth_opening: mouth(frame, &cfg.lips),
            }
        })
        .collect();

    Ok(PhonoSample {
        meta: sample.meta.clone(),
        dominant_hand: dh,
        frames,
    })
}
