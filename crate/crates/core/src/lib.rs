//! Core algorithms for turning bimanual hand demonstrations into refined,
//! size-parameterized non-prehensile manipulation primitives.
//!
//! The crate is `no_std` and only needs `alloc`. All operations are pure
//! functions of their inputs; file formats, scenario generation and the
//! command line live in the companion `binomap` crate.
//!
//! # Stages
//!
//! 1. [`retarget`]: 21-joint hand frames to coarse gripper poses.
//! 2. [`smooth`]: coplanar spline smoothing of positions and anchor-based
//!    SLERP of orientations, then [`adjust`]: iterative contact-distance
//!    adjustment driven by a [`adjust::Verifier`].
//! 3. [`param`]: one-shot resizing of a verified primitive for a new object
//!    instance of the same category.
//!
//! [`oracle`] provides the bundled deterministic verifiers.
//!
//! # Conventions
//!
//! - Units are meters and radians.
//! - `z` is the vertical (gravity-aligned) axis of the working frame; slices
//!   and planar relocation are taken with respect to it.

#![no_std]
// NaN-rejecting `!(x > 0.0)` guards and index loops over fixed-size
// matrices are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adjust;
mod error;
pub mod geometry;
mod math;
pub mod oracle;
pub mod param;
pub mod retarget;
pub mod smooth;
mod trajectory;

pub use error::{CloudRole, Error, Result};
pub use geometry::{
    fit_plane, min_distance, project_to_plane, quat_to_rotation, rotation_to_quat, slerp,
    ConvexHull, Nearest, OrganizedGrid, Plane, PlaneFit, Point3, PointCloud, Rotation,
    UnitQuaternion,
};
pub use trajectory::{Arm, BimanualTrajectory, Pose};
