use std::fmt;

use super::vector::Vector3;

/// Keypoint group of the upstream pose estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Body,
    Face,
    LeftHand,
    RightHand,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Body, Group::Face, Group::LeftHand, Group::RightHand];

    /// Fixed cardinality: BODY_25, 70-point face, 21-point hands.
    pub const fn size(self) -> usize {
        match self {
            Group::Body => 25,
            Group::Face => 70,
            Group::LeftHand | Group::RightHand => 21,
        }
    }

    pub const fn key(self) -> &'static str {
        match self {
            Group::Body => "body",
            Group::Face => "face",
            Group::LeftHand => "left_hand",
            Group::RightHand => "right_hand",
        }
    }

    pub fn from_key(key: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.key() == key)
    }

    const fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// One of the signer's hands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn group(self) -> Group {
        match self {
            Hand::Left => Group::LeftHand,
            Hand::Right => Group::RightHand,
        }
    }

    pub fn other(self) -> Hand {
        match self {
            Hand::Left => Hand::Right,
            Hand::Right => Hand::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hand::Left => "left",
            Hand::Right => "right",
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position of a keypoint within a frame. Its name lives in the [`RoleTable`](super::RoleTable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeypointRole {
    pub group: Group,
    pub index: usize,
}

impl KeypointRole {
    pub const fn new(group: Group, index: usize) -> Self {
        Self { group, index }
    }
}

pub const RIGHT_SHOULDER: KeypointRole = KeypointRole::new(Group::Body, 2);
pub const LEFT_SHOULDER: KeypointRole = KeypointRole::new(Group::Body, 5);

/// 2D estimator output for a single joint, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Keypoint2D {
    pub x: f64,
    pub y: f64,
    pub score: f64,
}

impl Keypoint2D {
    pub const MISSING: Keypoint2D = Keypoint2D {
        x: 0.0,
        y: 0.0,
        score: 0.0,
    };

    pub fn new(x: f64, y: f64, score: f64) -> Self {
        Self { x, y, score }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Keypoint3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub score: f64,
}

impl Keypoint3D {
    /// Unestimated joint: origin with zero score.
    pub const MISSING: Keypoint3D = Keypoint3D {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        score: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64, score: f64) -> Self {
        Self { x, y, z, score }
    }

    pub fn position(&self) -> Vector3 {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_missing(&self) -> bool {
        self.score == 0.0
    }
}

/// Per-group keypoint storage with the fixed group cardinalities.
#[derive(Debug, Clone, PartialEq)]
pub struct Groups<T> {
    slots: [Vec<T>; 4],
}

impl<T: Clone> Groups<T> {
    /// Every group filled with `fill`.
    pub fn filled(fill: T) -> Self {
        Self {
            slots: Group::ALL.map(|g| vec![fill.clone(); g.size()]),
        }
    }
}

impl<T> Groups<T> {
    /// Builds from per-group vectors in [`Group::ALL`] order. Returns the first
    /// group whose length is wrong as `Err((group, found))`.
    pub fn from_vecs(slots: [Vec<T>; 4]) -> Result<Self, (Group, usize)> {
        for g in Group::ALL {
            if slots[g.slot()].len() != g.size() {
                return Err((g, slots[g.slot()].len()));
            }
        }
        Ok(Self { slots })
    }

    pub fn group(&self, group: Group) -> &[T] {
        &self.slots[group.slot()]
    }

    pub fn group_mut(&mut self, group: Group) -> &mut [T] {
        &mut self.slots[group.slot()]
    }

    pub fn get(&self, role: KeypointRole) -> &T {
        &self.slots[role.group.slot()][role.index]
    }

    pub fn get_mut(&mut self, role: KeypointRole) -> &mut T {
        &mut self.slots[role.group.slot()][role.index]
    }

    pub fn iter(&self) -> impl Iterator<Item = (KeypointRole, &T)> {
        Group::ALL.into_iter().flat_map(move |g| {
            self.group(g)
                .iter()
                .enumerate()
                .map(move |(i, k)| (KeypointRole::new(g, i), k))
        })
    }

    pub fn map<U>(&self, mut f: impl FnMut(KeypointRole, &T) -> U) -> Groups<U> {
        let slots = Group::ALL.map(|g| {
            self.group(g)
                .iter()
                .enumerate()
                .map(|(i, k)| f(KeypointRole::new(g, i), k))
                .collect()
        });
        Groups { slots }
    }
}

/// One time step of a 3D skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonFrame {
    /// Position in the downsampled sequence.
    pub frame_index: usize,
    pub keypoints: Groups<Keypoint3D>,
}

impl SkeletonFrame {
    pub fn get(&self, role: KeypointRole) -> &Keypoint3D {
        self.keypoints.get(role)
    }
}

/// Identifies one sign occurrence in the source corpus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SampleMeta {
    pub label: String,
    pub session: String,
    pub scene: String,
    pub consultant: String,
    pub frame_start: usize,
    pub frame_end: usize,
}

impl SampleMeta {
    /// Stable file-system friendly identifier.
    pub fn sample_id(&self) -> String {
        let raw = format!(
            "{}_{}_{}_{}-{}",
            self.session, self.scene, self.label, self.frame_start, self.frame_end
        );
        raw.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                    c
                } else {
                    '_'
                }
            })
            .collect()
    }

    /// Key of the source videos this sign was cut from.
    pub fn video_key(&self) -> String {
        format!("{}_scene{}", self.session, self.scene)
    }
}

/// A sign with its normalized 3D skeleton sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample3D {
    pub meta: SampleMeta,
    pub frames: Vec<SkeletonFrame>,
}
