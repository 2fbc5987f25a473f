use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Horizontal {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertical {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Body,
    Front,
}

/// Up to one label per axis, from the signer's perspective.
///
/// The one-label-per-axis invariant is structural: each axis is an `Option`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DirectionSet {
    pub horizontal: Option<Horizontal>,
    pub vertical: Option<Vertical>,
    pub depth: Option<Depth>,
}

/// Serialized form of the empty set.
pub const NONE_LABEL: &str = "none";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDirectionError {
    #[error("unknown direction label `{0}`")]
    UnknownLabel(String),
    #[error("direction `{0}` has two labels on one axis")]
    ConflictingAxis(String),
    #[error("direction `{0}` is not in canonical x, y, z order")]
    NotCanonical(String),
}

impl DirectionSet {
    pub const EMPTY: DirectionSet = DirectionSet {
        horizontal: None,
        vertical: None,
        depth: None,
    };

    pub fn is_empty(&self) -> bool {
        self.horizontal.is_none() && self.vertical.is_none() && self.depth.is_none()
    }

    pub fn len(&self) -> usize {
        self.horizontal.is_some() as usize
            + self.vertical.is_some() as usize
            + self.depth.is_some() as usize
    }

    /// Labels in canonical x, y, z order.
    pub fn labels(&self) -> impl Iterator<Item = &'static str> {
        let h = self.horizontal.map(|h| match h {
            Horizontal::Right => "right",
            Horizontal::Left => "left",
        });
        let v = self.vertical.map(|v| match v {
            Vertical::Up => "up",
            Vertical::Down => "down",
        });
        let d = self.depth.map(|d| match d {
            Depth::Body => "body",
            Depth::Front => "front",
        });
        [h, v, d].into_iter().flatten()
    }

    /// Parses labels joined by `_` in any order. `"none"` is the empty set.
    pub fn parse_any_order(s: &str) -> Result<Self, ParseDirectionError> {
        let mut set = DirectionSet::EMPTY;
        if s == NONE_LABEL {
            return Ok(set);
        }
        let conflict = || ParseDirectionError::ConflictingAxis(s.to_owned());
        for label in s.split('_') {
            match label {
                "right" | "left" => {
                    if set.horizontal.is_some() {
                        return Err(conflict());
                    }
                    set.horizontal = Some(if label == "right" {
                        Horizontal::Right
                    } else {
                        Horizontal::Left
                    });
                }
                "up" | "down" => {
                    if set.vertical.is_some() {
                        return Err(conflict());
                    }
                    set.vertical = Some(if label == "up" {
                        Vertical::Up
                    } else {
                        Vertical::Down
                    });
                }
                "body" | "front" => {
                    if set.depth.is_some() {
                        return Err(conflict());
                    }
                    set.depth = Some(if label == "body" {
                        Depth::Body
                    } else {
                        Depth::Front
                    });
                }
                other => return Err(ParseDirectionError::UnknownLabel(other.to_owned())),
            }
        }
        Ok(set)
    }
}

/// x label, then y label, then z label, joined with `_`; `"none"` when empty.
pub fn canonical_direction_string(d: &DirectionSet) -> String {
    if d.is_empty() {
        return NONE_LABEL.to_owned();
    }
    d.labels().collect::<Vec<_>>().join("_")
}

impl fmt::Display for DirectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_direction_string(self))
    }
}

/// Strict parse: accepts only the canonical form.
impl FromStr for DirectionSet {
    type Err = ParseDirectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let set = DirectionSet::parse_any_order(s)?;
        if canonical_direction_string(&set) != s {
            return Err(ParseDirectionError::NotCanonical(s.to_owned()));
        }
        Ok(set)
    }
}
