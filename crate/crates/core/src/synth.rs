//! Synthetic dual-view pose sequences with known phonological attributes.
//!
//! A [`MotionScript`] fixes palm normals, hand displacements and mouth ratios
//! per sampled frame. [`generate_sample`] builds 3D keypoints realizing them,
//! projects the keypoints into a frontal and a side view and returns the
//! attributes the pipeline must recover.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fuse::{FusionConfig, SideCameraSide};
use crate::ingest::{stride, AnnotationRecord, HandshapeCatalog, View, ViewFrame2D};
use crate::model::{
    AttributeValue, DirectionSet, Group, Groups, Hand, Keypoint2D, KeypointRole, PhonoFrame,
    PhonoSample, SampleMeta, Vector3, NONE_LABEL,
};
use crate::phono::{classify_direction, PhonoConfig};

pub const DEFAULT_MARGIN: f64 = 0.05;

const ORIGIN_PX: (f64, f64, f64) = (960.0, 540.0, 960.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("infeasible script: {0}")]
    InfeasibleScript(String),
}

/// Motion of one hand: a palm normal per frame and a displacement of the
/// middle-finger base between consecutive frames.
#[derive(Debug, Clone, PartialEq)]
pub struct HandScript {
    pub normals: Vec<Vector3>,
    /// One entry per frame after the first, in shoulder-width units.
    pub displacements: Vec<Vector3>,
}

impl HandScript {
    pub fn stationary(normal: Vector3, n_frames: usize) -> Self {
        Self {
            normals: vec![normal; n_frames],
            displacements: vec![Vector3::ZERO; n_frames.saturating_sub(1)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionScript {
    pub meta: SampleMeta,
    /// Frames after downsampling.
    pub n_frames: usize,
    pub shoulder_width_px: f64,
    pub source_fps: u32,
    pub target_fps: u32,
    pub dominant_hand: Hand,
    pub dh: HandScript,
    pub ndh: HandScript,
    pub mouth_ratios: Vec<f64>,
    pub handshapes: (String, String),
    pub ndh_handshapes: Option<(String, String)>,
    /// Seeds keypoint scores and jitter.
    pub seed: u64,
    /// Uniform noise added to every 3D coordinate, in shoulder-width units.
    pub jitter_amplitude: f64,
    /// Smallest allowed distance of a classified component from the threshold.
    pub margin: f64,
    pub fusion: FusionConfig,
    pub phono: PhonoConfig,
}

impl MotionScript {
    /// A script with stationary hands, palms facing the frontal camera and a
    /// closed mouth, with the sign starting at source frame 0.
    pub fn simple(n_frames: usize) -> Self {
        let step = 20;
        Self {
            meta: SampleMeta {
                label: "SIGN".into(),
                session: "synth".into(),
                scene: "1".into(),
                consultant: "synth".into(),
                frame_start: 0,
                frame_end: n_frames.saturating_sub(1) * step,
            },
            n_frames,
            shoulder_width_px: 200.0,
            source_fps: 60,
            target_fps: 3,
            dominant_hand: Hand::Right,
            dh: HandScript::stationary(Vector3::new(0.0, 0.0, 1.0), n_frames),
            ndh: HandScript::stationary(Vector3::new(0.0, 0.0, 1.0), n_frames),
            mouth_ratios: vec![0.0; n_frames],
            handshapes: ("A".into(), "B".into()),
            ndh_handshapes: None,
            seed: 0,
            jitter_amplitude: 0.0,
            margin: DEFAULT_MARGIN,
            fusion: FusionConfig::default(),
            phono: PhonoConfig::default(),
        }
    }

    fn check(&self) -> Result<usize, SynthError> {
        let bad = |m: String| Err(SynthError::InfeasibleScript(m));
        let n = self.n_frames;
        if n == 0 {
            return bad("no frames".into());
        }
        let step = stride(self.source_fps, self.target_fps)
            .map_err(|e| SynthError::InfeasibleScript(e.to_string()))?;
        let m = &self.meta;
        if m.frame_end < m.frame_start || (m.frame_end - m.frame_start) / step + 1 != n {
            return bad(format!(
                "segment {}-{} does not hold {n} frames at stride {step}",
                m.frame_start, m.frame_end
            ));
        }
        if !(self.shoulder_width_px.is_finite() && self.shoulder_width_px > 0.0) {
            return bad("shoulder width must be positive".into());
        }
        if !(self.jitter_amplitude.is_finite() && self.jitter_amplitude >= 0.0) {
            return bad("jitter amplitude must be non-negative".into());
        }
        self.fusion
            .validate()
            .map_err(|e| SynthError::InfeasibleScript(e.to_string()))?;
        self.phono
            .validate()
            .map_err(|e| SynthError::InfeasibleScript(e.to_string()))?;
        let h = &self.phono.hand;
        let roles = [h.wrist, h.little_base, h.index_base, h.middle_base];
        if (1..4).any(|i| roles[..i].contains(&roles[i])) {
            return bad("hand roles must be distinct".into());
        }
        let l = &self.phono.lips;
        let lips = [
            l.labiale_superius,
            l.labiale_inferius,
            l.cheilion_right,
            l.cheilion_left,
        ];
        if (1..4).any(|i| lips[..i].contains(&lips[i])) {
            return bad("lip roles must be distinct".into());
        }
        if self.mouth_ratios.len() != n
            || self
                .mouth_ratios
                .iter()
                .any(|r| !(r.is_finite() && *r >= 0.0))
        {
            return bad("need one finite non-negative mouth ratio per frame".into());
        }
        let codes = [&self.handshapes.0, &self.handshapes.1];
        let ndh_codes = self.ndh_handshapes.iter().flat_map(|(a, b)| [a, b]);
        if codes
            .into_iter()
            .chain(ndh_codes)
            .any(|c| c.is_empty() || c == NONE_LABEL)
        {
            return bad("handshape codes must be non-empty".into());
        }
        for (name, hand) in [("dh", &self.dh), ("ndh", &self.ndh)] {
            if hand.normals.len() != n || hand.displacements.len() != n - 1 {
                return bad(format!(
                    "{name}: need {n} normals and {} displacements",
                    n - 1
                ));
            }
            for v in &hand.normals {
                if !v.is_finite() || v.norm() < 1e-9 {
                    return bad(format!("{name}: palm normal {v:?} has no direction"));
                }
                self.check_margin(name, v.normalized())?;
            }
            for d in &hand.displacements {
                if !d.is_finite() {
                    return bad(format!("{name}: displacement {d:?} not finite"));
                }
                self.check_margin(name, *d)?;
            }
        }
        Ok(step)
    }

    fn check_margin(&self, name: &str, v: Vector3) -> Result<(), SynthError> {
        let k = self.phono.threshold_k;
        for c in [v.x, v.y, v.z] {
            if (c.abs() - k).abs() < self.margin {
                return Err(SynthError::InfeasibleScript(format!(
                    "{name}: component {c} within {} of threshold {k}",
                    self.margin
                )));
            }
        }
        Ok(())
    }
}

/// One generated sign: source-rate frames of both views covering source
/// frames `0..=frame_end`, its annotation and the attributes to recover.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSample {
    pub frontal: Vec<ViewFrame2D>,
    pub side: Vec<ViewFrame2D>,
    pub annotation: AnnotationRecord,
    pub expected: PhonoSample,
}

/// Posed keypoints of one downsampled frame, in both views.
#[derive(Debug, Clone)]
struct Pose {
    front: Groups<Keypoint2D>,
    side: Groups<Keypoint2D>,
}

const BODY: [(f64, f64, f64); 25] = [
    (0.0, -0.6, 0.1),
    (0.0, 0.0, 0.0),
    (-0.5, 0.0, 0.0),
    (-0.6, 0.7, 0.1),
    (-0.5, 1.3, 0.3),
    (0.5, 0.0, 0.0),
    (0.6, 0.7, 0.1),
    (0.5, 1.3, 0.3),
    (0.0, 1.6, 0.0),
    (-0.2, 1.6, 0.0),
    (-0.2, 2.4, 0.05),
    (-0.2, 3.2, 0.0),
    (0.2, 1.6, 0.0),
    (0.2, 2.4, 0.05),
    (0.2, 3.2, 0.0),
    (-0.08, -0.7, 0.15),
    (0.08, -0.7, 0.15),
    (-0.18, -0.65, 0.0),
    (0.18, -0.65, 0.0),
    (0.25, 3.3, 0.1),
    (0.3, 3.3, 0.1),
    (0.2, 3.3, -0.05),
    (-0.25, 3.3, 0.1),
    (-0.3, 3.3, 0.1),
    (-0.2, 3.3, -0.05),
];

const HEAD: Vector3 = Vector3 {
    x: 0.0,
    y: -0.7,
    z: 0.1,
};
const MOUTH: Vector3 = Vector3 {
    x: 0.0,
    y: -0.5,
    z: 0.2,
};
const MOUTH_HALF_WIDTH: f64 = 0.1;

/// Two unit vectors `u`, `v` with `u × v = n` for unit `n`.
fn palm_basis(n: Vector3) -> (Vector3, Vector3) {
    let axis = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::new(1.0, 0.0, 0.0)
    } else if n.y.abs() <= n.z.abs() {
        Vector3::new(0.0, 1.0, 0.0)
    } else {
        Vector3::new(0.0, 0.0, 1.0)
    };
    let u = (axis - n * axis.dot(n)).normalized();
    (u, n.cross(u))
}

fn hand_anchor(hand: Hand) -> Vector3 {
    match hand {
        Hand::Right => Vector3::new(-0.3, 0.6, 0.5),
        Hand::Left => Vector3::new(0.3, 0.6, 0.5),
    }
}

fn score(rng: &mut ChaCha8Rng) -> f64 {
    f64::from(rng.random_range(500u32..=1000)) / 1000.0
}

fn mean(scores: &[f64]) -> f64 {
    scores.iter().sum::<f64>() / scores.len() as f64
}

struct Renderer<'a> {
    script: &'a MotionScript,
    rng: ChaCha8Rng,
}

impl Renderer<'_> {
    /// 3D positions of every joint of frame `t`, in shoulder-width units.
    fn skeleton(&self, t: usize, middles: &[[Vector3; 2]]) -> Groups<Vector3> {
        let s = self.script;
        let mut joints = Groups::filled(Vector3::ZERO);
        for (p, &(x, y, z)) in joints.group_mut(Group::Body).iter_mut().zip(&BODY) {
            *p = Vector3::new(x, y, z);
        }
        for (j, p) in joints.group_mut(Group::Face).iter_mut().enumerate() {
            let a = j as f64 * std::f64::consts::TAU / Group::Face.size() as f64;
            *p = HEAD + Vector3::new(0.25 * a.cos(), 0.3 * a.sin(), 0.0);
        }
        let l = &s.phono.lips;
        let half_gap = s.mouth_ratios[t] * MOUTH_HALF_WIDTH;
        let face = joints.group_mut(Group::Face);
        face[l.cheilion_right] = MOUTH - Vector3::new(MOUTH_HALF_WIDTH, 0.0, 0.0);
        face[l.cheilion_left] = MOUTH + Vector3::new(MOUTH_HALF_WIDTH, 0.0, 0.0);
        face[l.labiale_superius] = MOUTH - Vector3::new(0.0, half_gap, 0.0);
        face[l.labiale_inferius] = MOUTH + Vector3::new(0.0, half_gap, 0.0);

        let h = &s.phono.hand;
        for (slot, (hand, script)) in [(s.dominant_hand, &s.dh), (s.dominant_hand.other(), &s.ndh)]
            .into_iter()
            .enumerate()
        {
            let (u, v) = palm_basis(script.normals[t].normalized());
            let (wl, wi) = match hand {
                Hand::Right => (u, v),
                Hand::Left => (v, u),
            };
            let m = middles[t][slot];
            let w = m - (u + v) * 0.5;
            let points = joints.group_mut(hand.group());
            for (j, p) in points.iter_mut().enumerate() {
                *p = w + (u + v) * (0.1 + 0.04 * j as f64);
            }
            points[h.wrist] = w;
            points[h.little_base] = w + wl;
            points[h.index_base] = w + wi;
            points[h.middle_base] = m;
        }
        joints
    }

    fn project(&mut self, joints: &Groups<Vector3>) -> Pose {
        let s = self.script;
        let (ox, oy, oz) = ORIGIN_PX;
        let wpx = s.shoulder_width_px;
        let zs = s.fusion.z_scale;
        let a = s.jitter_amplitude;
        let mut front = Groups::filled(Keypoint2D::MISSING);
        let mut side = Groups::filled(Keypoint2D::MISSING);
        for (role, p) in joints.iter() {
            let mut p = *p;
            if a > 0.0 {
                p = p + Vector3::new(
                    self.rng.random_range(-a..=a),
                    self.rng.random_range(-a..=a),
                    self.rng.random_range(-a..=a),
                );
            }
            let (x, y) = (ox + p.x * wpx, oy + p.y * wpx);
            let side_x = match s.fusion.side_camera_side {
                SideCameraSide::SignerRight => (oz + p.z * wpx) / zs,
                SideCameraSide::SignerLeft => (oz - p.z * wpx) / zs,
            };
            *front.get_mut(role) = Keypoint2D::new(x, y, score(&mut self.rng));
            *side.get_mut(role) = Keypoint2D::new(side_x, y, score(&mut self.rng));
        }
        Pose { front, side }
    }
}

fn fused_score(pose: &Pose, role: KeypointRole) -> f64 {
    pose.front.get(role).score.min(pose.side.get(role).score)
}

fn expected_frames(script: &MotionScript, poses: &[Pose]) -> Vec<PhonoFrame> {
    let n = script.n_frames;
    let k = script.phono.threshold_k;
    let h = &script.phono.hand;
    let l = &script.phono.lips;
    let dh = script.dominant_hand;
    let none = || AttributeValue::new(DirectionSet::EMPTY, 0.0);
    let handshape = |pair: Option<&(String, String)>, t: usize| match pair {
        Some((initial, final_)) => {
            AttributeValue::new(if 2 * t < n { initial } else { final_ }.clone(), 1.0)
        }
        None => AttributeValue::new(NONE_LABEL.to_owned(), 0.0),
    };
    let orientation = |hand: Hand, hs: &HandScript, t: usize| {
        let s = |i| fused_score(&poses[t], KeypointRole::new(hand.group(), i));
        AttributeValue::new(
            classify_direction(hs.normals[t].normalized(), k),
            mean(&[s(h.wrist), s(h.little_base), s(h.index_base)]),
        )
    };
    let movement = |hand: Hand, hs: &HandScript, t: usize| {
        if t == 0 {
            return none();
        }
        let role = KeypointRole::new(hand.group(), h.middle_base);
        AttributeValue::new(
            classify_direction(hs.displacements[t - 1], k),
            mean(&[
                fused_score(&poses[t], role),
                fused_score(&poses[t - 1], role),
            ]),
        )
    };
    (0..n)
        .map(|t| {
            let lip = |i| fused_score(&poses[t], KeypointRole::new(Group::Face, i));
            PhonoFrame {
                frame_index: t,
                dh_handshape: handshape(Some(&script.handshapes), t),
                ndh_handshape: handshape(script.ndh_handshapes.as_ref(), t),
                dh_orientation: orientation(dh, &script.dh, t),
                ndh_orientation: orientation(dh.other(), &script.ndh, t),
                dh_movement: movement(dh, &script.dh, t),
                ndh_movement: movement(dh.other(), &script.ndh, t),
                mouth_opening: AttributeValue::new(
                    script.mouth_ratios[t],
                    mean(&[
                        lip(l.labiale_superius),
                        lip(l.labiale_inferius),
                        lip(l.cheilion_right),
                        lip(l.cheilion_left),
                    ]),
                ),
            }
        })
        .collect()
}

/// Posed downsampled frames plus the expected attributes.
fn render(
    script: &MotionScript,
) -> Result<(usize, Vec<Pose>, AnnotationRecord, PhonoSample), SynthError> {
    let step = script.check()?;
    let n = script.n_frames;
    let mut middles = Vec::with_capacity(n);
    let mut current = [
        hand_anchor(script.dominant_hand),
        hand_anchor(script.dominant_hand.other()),
    ];
    middles.push(current);
    for t in 1..n {
        current[0] = current[0] + script.dh.displacements[t - 1];
        current[1] = current[1] + script.ndh.displacements[t - 1];
        middles.push(current);
    }
    let mut renderer = Renderer {
        script,
        rng: ChaCha8Rng::seed_from_u64(script.seed),
    };
    let poses: Vec<Pose> = (0..n)
        .map(|t| {
            let joints = renderer.skeleton(t, &middles);
            renderer.project(&joints)
        })
        .collect();
    let annotation = AnnotationRecord {
        meta: script.meta.clone(),
        initial_handshape: script.handshapes.0.clone(),
        final_handshape: script.handshapes.1.clone(),
        ndh_handshapes: script.ndh_handshapes.clone(),
        dominant_hand: Some(script.dominant_hand),
    };
    let expected = PhonoSample {
        meta: script.meta.clone(),
        dominant_hand: script.dominant_hand,
        frames: expected_frames(script, &poses),
    };
    Ok((step, poses, annotation, expected))
}

fn view_frame(view: View, frame_index: usize, pose: &Pose) -> ViewFrame2D {
    let keypoints = match view {
        View::Frontal => pose.front.clone(),
        View::Side => pose.side.clone(),
    };
    ViewFrame2D {
        view,
        frame_index,
        keypoints,
    }
}

/// Index of the pose shown at `frame`: held before, between and after the
/// sampled frames of the sign.
fn pose_at(frame: usize, start: usize, step: usize, n: usize) -> usize {
    (frame.saturating_sub(start) / step).min(n - 1)
}

pub fn generate_sample(script: &MotionScript) -> Result<SynthSample, SynthError> {
    let (step, poses, annotation, expected) = render(script)?;
    let start = script.meta.frame_start;
    let (mut frontal, mut side) = (Vec::new(), Vec::new());
    for frame in 0..=script.meta.frame_end {
        let pose = &poses[pose_at(frame, start, step, poses.len())];
        frontal.push(view_frame(View::Frontal, frame, pose));
        side.push(view_frame(View::Side, frame, pose));
    }
    Ok(SynthSample {
        frontal,
        side,
        annotation,
        expected,
    })
}

/// Knobs for [`random_script`] and [`generate_corpus`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScriptParams {
    pub min_frames: usize,
    pub max_frames: usize,
    pub source_fps: u32,
    pub target_fps: u32,
    pub margin: f64,
    pub fusion: FusionConfig,
    pub phono: PhonoConfig,
}

impl Default for ScriptParams {
    fn default() -> Self {
        Self {
            min_frames: 1,
            max_frames: 12,
            source_fps: 60,
            target_fps: 3,
            margin: DEFAULT_MARGIN,
            fusion: FusionConfig::default(),
            phono: PhonoConfig::default(),
        }
    }
}

fn margin_ok(c: f64, k: f64, margin: f64) -> bool {
    (c.abs() - k).abs() >= margin
}

fn random_normal(rng: &mut ChaCha8Rng, k: f64, margin: f64) -> Vector3 {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let r = v.norm();
        if !(0.1..=1.0).contains(&r) {
            continue;
        }
        let n = v.normalized();
        if [n.x, n.y, n.z].iter().all(|&c| margin_ok(c, k, margin)) {
            return n;
        }
    }
}

fn random_displacement(rng: &mut ChaCha8Rng, k: f64, margin: f64) -> Vector3 {
    let mut component = || loop {
        let c = if rng.random_bool(0.3) {
            0.0
        } else {
            rng.random_range(-0.8..=0.8)
        };
        if margin_ok(c, k, margin) {
            return c;
        }
    };
    Vector3::new(component(), component(), component())
}

fn random_handshapes(rng: &mut ChaCha8Rng, codes: &[String]) -> (String, String) {
    let initial = codes[rng.random_range(0..codes.len())].clone();
    let final_ = if rng.random_bool(0.5) {
        initial.clone()
    } else {
        codes[rng.random_range(0..codes.len())].clone()
    };
    (initial, final_)
}

/// A random feasible script for a sign starting at `frame_start`. Labels are
/// drawn from a small vocabulary so that labels repeat across samples.
pub fn random_script(
    params: &ScriptParams,
    rng: &mut ChaCha8Rng,
    session: &str,
    frame_start: usize,
) -> Result<MotionScript, SynthError> {
    let step = stride(params.source_fps, params.target_fps)
        .map_err(|e| SynthError::InfeasibleScript(e.to_string()))?;
    if params.min_frames == 0 || params.min_frames > params.max_frames {
        return Err(SynthError::InfeasibleScript("frame range is empty".into()));
    }
    let k = params.phono.threshold_k;
    if k <= params.margin && k + params.margin >= 1.0 {
        return Err(SynthError::InfeasibleScript(
            "no component can clear the margin".into(),
        ));
    }
    let n = rng.random_range(params.min_frames..=params.max_frames);
    let codes = HandshapeCatalog::default();
    let hand = |rng: &mut ChaCha8Rng| HandScript {
        normals: (0..n)
            .map(|_| random_normal(rng, k, params.margin))
            .collect(),
        displacements: (1..n)
            .map(|_| random_displacement(rng, k, params.margin))
            .collect(),
    };
    let dh = hand(rng);
    let ndh = hand(rng);
    let label = format!("SIGN{:02}", rng.random_range(0..40u32));
    Ok(MotionScript {
        meta: SampleMeta {
            label,
            session: session.to_owned(),
            scene: "1".into(),
            consultant: "synth".into(),
            frame_start,
            frame_end: frame_start + (n - 1) * step,
        },
        n_frames: n,
        shoulder_width_px: f64::from(rng.random_range(80u32..=400)),
        source_fps: params.source_fps,
        target_fps: params.target_fps,
        dominant_hand: if rng.random_bool(0.8) {
            Hand::Right
        } else {
            Hand::Left
        },
        dh,
        ndh,
        mouth_ratios: (0..n)
            .map(|_| f64::from(rng.random_range(0u32..=800)) / 1000.0)
            .collect(),
        handshapes: random_handshapes(rng, codes.codes()),
        ndh_handshapes: rng
            .random_bool(0.5)
            .then(|| random_handshapes(rng, codes.codes())),
        seed: rng.random(),
        jitter_amplitude: 0.0,
        margin: params.margin,
        fusion: params.fusion,
        phono: params.phono,
    })
}

/// Both views of one synthetic recording session.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthVideo {
    pub session: String,
    pub scene: String,
    pub frontal: Vec<ViewFrame2D>,
    pub side: Vec<ViewFrame2D>,
}

impl SynthVideo {
    /// Same key as [`SampleMeta::video_key`] of the signs it holds.
    pub fn key(&self) -> String {
        format!("{}_scene{}", self.session, self.scene)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub videos: Vec<SynthVideo>,
    pub annotations: Vec<AnnotationRecord>,
    pub expected: Vec<PhonoSample>,
}

pub const SIGNS_PER_VIDEO: usize = 3;

/// `n_samples` random signs packed a few per video with short gaps.
pub fn generate_corpus(
    params: &ScriptParams,
    seed: u64,
    n_samples: usize,
) -> Result<SynthCorpus, SynthError> {
    let step = stride(params.source_fps, params.target_fps)
        .map_err(|e| SynthError::InfeasibleScript(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = SynthCorpus {
        videos: Vec::new(),
        annotations: Vec::with_capacity(n_samples),
        expected: Vec::with_capacity(n_samples),
    };
    let n_videos = n_samples.div_ceil(SIGNS_PER_VIDEO);
    for v in 0..n_videos {
        let session = format!("synth{v:05}");
        let signs = SIGNS_PER_VIDEO.min(n_samples - v * SIGNS_PER_VIDEO);
        let mut video = SynthVideo {
            session: session.clone(),
            scene: "1".into(),
            frontal: Vec::new(),
            side: Vec::new(),
        };
        let mut cursor = 0;
        for _ in 0..signs {
            let start = cursor + rng.random_range(0..=2 * step);
            let script = random_script(params, &mut rng, &session, start)?;
            let (_, poses, annotation, expected) = render(&script)?;
            let last = video.frontal.len();
            for frame in last..=script.meta.frame_end {
                let pose = &poses[pose_at(frame, start, step, poses.len())];
                video.frontal.push(view_frame(View::Frontal, frame, pose));
                video.side.push(view_frame(View::Side, frame, pose));
            }
            cursor = script.meta.frame_end + 1;
            corpus.annotations.push(annotation);
            corpus.expected.push(expected);
        }
        corpus.videos.push(video);
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{run_sample, PipelineConfig};

    fn config(script: &MotionScript) -> PipelineConfig {
        PipelineConfig {
            source_fps: script.source_fps,
            target_fps: script.target_fps,
            fusion: script.fusion,
            phono: script.phono,
        }
    }

    fn recover(script: &MotionScript) -> (PhonoSample, PhonoSample) {
        let s = generate_sample(script).unwrap();
        let (_, phono) = run_sample(&s.frontal, &s.side, &s.annotation, &config(script)).unwrap();
        (phono, s.expected)
    }

    fn strings(sample: &PhonoSample, attr: crate::model::Attribute) -> Vec<String> {
        sample
            .frames
            .iter()
            .map(|f| f.categorical(attr).unwrap())
            .collect()
    }

    #[test]
    fn front_palm_moving_left() {
        use crate::model::Attribute::*;
        let mut script = MotionScript::simple(3);
        script.dh.displacements = vec![Vector3::new(0.4, 0.0, 0.0); 2];
        let (got, expected) = recover(&script);
        assert_eq!(strings(&got, DhOrientation), ["front"; 3]);
        assert_eq!(strings(&got, DhMovement), ["none", "left", "left"]);
        assert_eq!(strings(&expected, DhMovement), ["none", "left", "left"]);
    }

    #[test]
    fn stationary_palm_up() {
        use crate::model::Attribute::*;
        let mut script = MotionScript::simple(4);
        script.dh = HandScript::stationary(Vector3::new(0.0, -1.0, 0.0), 4);
        let (got, _) = recover(&script);
        assert_eq!(strings(&got, DhOrientation), ["up"; 4]);
        assert_eq!(strings(&got, DhMovement), ["none"; 4]);
    }

    #[test]
    fn mouth_ratio_half() {
        let mut script = MotionScript::simple(2);
        script.mouth_ratios = vec![0.5, 0.5];
        let (got, _) = recover(&script);
        for f in &got.frames {
            assert!((f.mouth_opening.value - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_scripts() {
        let mut zero = MotionScript::simple(2);
        zero.dh.normals[0] = Vector3::ZERO;
        assert!(matches!(
            generate_sample(&zero),
            Err(SynthError::InfeasibleScript(_))
        ));
        let mut near = MotionScript::simple(2);
        near.ndh.displacements[0] = Vector3::new(0.32, 0.0, 0.0);
        assert!(generate_sample(&near).is_err());
        let mut short = MotionScript::simple(3);
        short.meta.frame_end = 10;
        assert!(generate_sample(&short).is_err());
    }

    #[test]
    fn palm_basis_realizes_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = random_normal(&mut rng, 0.3, 0.05);
            let (u, v) = palm_basis(n);
            assert!((u.cross(v) - n).norm() < 1e-12);
            assert!((u.norm() - 1.0).abs() < 1e-12 && (v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn corpus_is_seeded() {
        let p = ScriptParams::default();
        let a = generate_corpus(&p, 11, 7).unwrap();
        assert_eq!(a, generate_corpus(&p, 11, 7).unwrap());
        assert_ne!(a, generate_corpus(&p, 12, 7).unwrap());
        assert_eq!(a.videos.len(), 3);
        assert_eq!(a.annotations.len(), 7);
    }
}
