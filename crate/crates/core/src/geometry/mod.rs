//! 3D primitives and the geometric operations shared by every stage.

mod cloud;
mod eigen;
mod hull;
mod plane;
pub(crate) mod point;
mod quaternion;
mod rotation;

pub(crate) use cloud::{farthest_point, thin};
pub use cloud::{min_distance, Nearest, OrganizedGrid, PointCloud};
pub(crate) use eigen::{scatter, symmetric_eigen3};
pub use hull::{ConvexHull, HullFacet};
pub(crate) use plane::COLLINEAR_RATIO;
pub use plane::{fit_plane, project_to_plane, Plane, PlaneFit};
pub use point::Point3;
pub use quaternion::{slerp, UnitQuaternion, SLERP_DEGENERATE_DOT};
pub use rotation::{quat_to_rotation, rotation_to_quat, Rotation, ROTATION_TOLERANCE};
