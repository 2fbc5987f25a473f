//! Domain types and vector math shared by every pipeline stage.

mod attributes;
mod direction;
mod roles;
mod skeleton;
mod vector;

pub use attributes::{Attribute, AttributeValue, Direction, Handshape, PhonoFrame, PhonoSample};
pub use direction::{
    canonical_direction_string, Depth, DirectionSet, Horizontal, ParseDirectionError, Vertical,
    NONE_LABEL,
};
pub use roles::{RoleTable, RoleTableError};
pub use skeleton::{
    Group, Groups, Hand, Keypoint2D, Keypoint3D, KeypointRole, Sample3D, SampleMeta, SkeletonFrame,
    LEFT_SHOULDER, RIGHT_SHOULDER,
};
pub use vector::{cross_product, euclidean_distance, Vector3};
