use super::direction::DirectionSet;
use super::skeleton::{Hand, SampleMeta};

/// An attribute value with the confidence derived from the keypoints behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeValue<V> {
    pub value: V,
    pub score: f64,
}

impl<V> AttributeValue<V> {
    pub fn new(value: V, score: f64) -> Self {
        Self { value, score }
    }
}

/// Handshape code as annotated, or `"none"` when the annotation has none.
pub type Handshape = AttributeValue<String>;
pub type Direction = AttributeValue<DirectionSet>;

#[derive(Debug, Clone, PartialEq)]
pub struct PhonoFrame {
    pub frame_index: usize,
    pub dh_handshape: Handshape,
    pub ndh_handshape: Handshape,
    pub dh_orientation: Direction,
    pub ndh_orientation: Direction,
    pub dh_movement: Direction,
    pub ndh_movement: Direction,
    pub mouth_opening: AttributeValue<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhonoSample {
    pub meta: SampleMeta,
    pub dominant_hand: Hand,
    pub frames: Vec<PhonoFrame>,
}

/// The per-frame attributes, in document order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    DhHandshape,
    NdhHandshape,
    DhOrientation,
    NdhOrientation,
    DhMovement,
    NdhMovement,
    MouthOpening,
}

impl Attribute {
    pub const ALL: [Attribute; 7] = [
        Attribute::DhHandshape,
        Attribute::NdhHandshape,
        Attribute::DhOrientation,
        Attribute::NdhOrientation,
        Attribute::DhMovement,
        Attribute::NdhMovement,
        Attribute::MouthOpening,
    ];

    pub const CATEGORICAL: [Attribute; 6] = [
        Attribute::DhHandshape,
        Attribute::NdhHandshape,
        Attribute::DhOrientation,
        Attribute::NdhOrientation,
        Attribute::DhMovement,
        Attribute::NdhMovement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::DhHandshape => "dh_handshape",
            Attribute::NdhHandshape => "ndh_handshape",
            Attribute::DhOrientation => "dh_orientation",
            Attribute::NdhOrientation => "ndh_orientation",
            Attribute::DhMovement => "dh_movement",
            Attribute::NdhMovement => "ndh_movement",
            Attribute::MouthOpening => "mouth_opening",
        }
    }

    pub fn from_name(name: &str) -> Option<Attribute> {
        Attribute::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl PhonoFrame {
    /// String value of a categorical attribute; `None` for mouth opening.
    pub fn categorical(&self, attr: Attribute) -> Option<String> {
        Some(match attr {
            Attribute::DhHandshape => self.dh_handshape.value.clone(),
            Attribute::NdhHandshape => self.ndh_handshape.value.clone(),
            Attribute::DhOrientation => self.dh_orientation.value.to_string(),
            Attribute::NdhOrientation => self.ndh_orientation.value.to_string(),
            Attribute::DhMovement => self.dh_movement.value.to_string(),
            Attribute::NdhMovement => self.ndh_movement.value.to_string(),
            Attribute::MouthOpening => return None,
        })
    }

    pub fn score(&self, attr: Attribute) -> f64 {
        match attr {
            Attribute::DhHandshape => self.dh_handshape.score,
            Attribute::NdhHandshape => self.ndh_handshape.score,
            Attribute::DhOrientation => self.dh_orientation.score,
            Attribute::NdhOrientation => self.ndh_orientation.score,
            Attribute::DhMovement => self.dh_movement.score,
            Attribute::NdhMovement => self.ndh_movement.score,
            Attribute::MouthOpening => self.mouth_opening.score,
        }
    }
}
