//! Motion-smoothness post-optimization.
//!
//! Positions of each arm are projected onto their least-squares plane and
//! smoothed there with a clamped cubic B-spline; orientations are re-sampled
//! by SLERP between anchor frames whose positions the spline moved least.

mod spline;

use alloc::vec::Vec;

pub use spline::{fit_clamped_cubic, BSpline};

use crate::geometry::{
    project_to_plane, scatter, slerp, symmetric_eigen3, Plane, Point3, Rotation,
    COLLINEAR_RATIO,
};
use crate::math;
use crate::trajectory::{Arm, BimanualTrajectory, Pose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothConfig {
    /// Intermediate anchor frames kept for orientation interpolation.
    pub top_n: usize,
    /// B-spline control point count; `None` selects `max(4, ⌈N/3⌉)`.
    pub spline_control_points: Option<usize>,
    /// Weight of the second-difference penalty on control points.
    pub spline_smoothing_weight: f64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        SmoothConfig {
            top_n: 3,
            spline_control_points: None,
            spline_smoothing_weight: 0.0,
        }
    }
}

impl SmoothConfig {
    pub fn control_points_for(&self, len: usize) -> usize {
        self.spline_control_points
            .unwrap_or_else(|| (math::ceil(len as f64 / 3.0) as usize).max(4))
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        if len < 4 {
            return Err(Error::DegenerateInput("smoothing needs at least 4 points"));
        }
        let m = self.control_points_for(len);
        if m < 4 {
            return Err(Error::InvalidConfig("spline needs at least 4 control points"));
        }
        if m > len {
            return Err(Error::InvalidConfig(
                "spline control points exceed trajectory length",
            ));
        }
        if !(self.spline_smoothing_weight >= 0.0) {
            return Err(Error::InvalidConfig("spline smoothing weight must be >= 0"));
        }
        Ok(())
    }
}

/// Strictly increasing frame indices that include the first and last frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSet(Vec<usize>);

impl AnchorSet {
    pub fn new(indices: Vec<usize>, len: usize) -> Result<Self> {
        if len == 0 || indices.first() != Some(&0) || indices.last() != Some(&(len - 1)) {
            return Err(Error::InvalidConfig("anchors must include first and last frame"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("anchors must be strictly increasing"));
        }
        Ok(AnchorSet(indices))
    }

    pub fn all(len: usize) -> Self {
        AnchorSet((0..len).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Output of [`smooth_positions`].
#[derive(Debug, Clone, PartialEq)]
pub struct PositionSmoothing {
    pub smoothed: Vec<Point3>,
    pub plane: Plane,
    /// `‖raw_i − smoothed_i‖`.
    pub deviations: Vec<f64>,
    /// Spline parameter of every frame, nondecreasing in `[0, 1]`.
    pub parameters: Vec<f64>,
    /// The fitted in-plane curve.
    pub curve: PlanarCurve,
}

/// A 2D spline living in an orthonormal chart of a 3D plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    pub origin: Point3,
    pub u_axis: Point3,
    pub v_axis: Point3,
    pub spline: BSpline<2>,
}

impl PlanarCurve {
    pub fn eval(&self, t: f64) -> Point3 {
        let [a, b] = self.spline.eval(t);
        self.origin + self.u_axis * a + self.v_axis * b
    }
}

/// Plane through the points; for collinear input, a canonical plane that
/// contains the line.
fn support_plane(points: &[Point3]) -> Result<Plane> {
    let (centroid, s) = scatter(points);
    let (values, vectors) = symmetric_eigen3(s);
    if !(values[2] > 0.0) {
        return Err(Error::DegenerateInput("all points coincide"));
    }
    let normal = if values[1] <= COLLINEAR_RATIO * values[2] {
        vectors[2].any_orthonormal()
    } else {
        vectors[0]
    };
    Ok(Plane::through_point(normal, centroid)
        .expect("unit normal")
        .canonicalized())
}

/// Normalized cumulative chord length.
fn chord_parameters(points: &[[f64; 2]]) -> Result<Vec<f64>> {
    let mut t = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    t.push(0.0);
    for w in points.windows(2) {
        let (dx, dy) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
        acc += math::sqrt(dx * dx + dy * dy);
        t.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::DegenerateInput("trajectory has zero length"));
    }
    for v in t.iter_mut() {
        *v /= acc;
    }
    Ok(t)
}

/// Chord-length parameters regularized against frame index: the sequence is
/// fitted with the same spline budget over uniform frame time, then forced
/// nondecreasing. This keeps the speed profile of the demonstration while
/// removing the along-track jitter that raw chord lengths inherit from noise.
fn regularized_parameters(chord: &[f64], n_ctrl: usize, smoothing: f64) -> Result<Vec<f64>> {
    let n = chord.len();
    let uniform: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let values: Vec<[f64; 1]> = chord.iter().map(|t| [*t]).collect();
    let fit = fit_clamped_cubic(&uniform, &values, n_ctrl, smoothing)?;
    let mut out = Vec::with_capacity(n);
    let mut running = 0.0f64;
    for (i, u) in uniform.iter().enumerate() {
        let v = if i == 0 {
            0.0
        } else if i == n - 1 {
            1.0
        } else {
            fit.eval(*u)[0].clamp(0.0, 1.0)
        };
        running = running.max(v);
        out.push(running);
    }
    Ok(out)
}

/// Coplanar projection followed by in-plane cubic B-spline smoothing.
///
/// The spline interpolates the first and last projected points; every
/// output point lies on the returned plane.
pub fn smooth_positions(points: &[Point3], cfg: &SmoothConfig) -> Result<PositionSmoothing> {
    cfg.validate(points.len())?;
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite position"));
    }
    let plane = support_plane(points)?;
    let origin = project_to_plane(
        crate::geometry::point::centroid(points.iter().copied()).expect("nonempty"),
        &plane,
    );
    let u_axis = plane.normal.any_orthonormal();
    let v_axis = plane.normal.cross(u_axis);

    let chart: Vec<[f64; 2]> = points
        .iter()
        .map(|p| {
            let d = project_to_plane(*p, &plane) - origin;
            [d.dot(u_axis), d.dot(v_axis)]
        })
        .collect();

    let n_ctrl = cfg.control_points_for(points.len());
    let chord = chord_parameters(&chart)?;
    let parameters = regularized_parameters(&chord, n_ctrl, cfg.spline_smoothing_weight)?;
    let spline = fit_clamped_cubic(&parameters, &chart, n_ctrl, cfg.spline_smoothing_weight)?;
    let curve = PlanarCurve {
        origin,
        u_axis,
        v_axis,
        spline,
    };

    let smoothed: Vec<Point3> = parameters.iter().map(|t| curve.eval(*t)).collect();
    let deviations = points
        .iter()
        .zip(&smoothed)
        .map(|(r, s)| r.distance(*s))
        .collect();
    Ok(PositionSmoothing {
        smoothed,
        plane,
        deviations,
        parameters,
        curve,
    })
}

/// First and last frame plus the `top_n` intermediate frames with the
/// smallest deviation (lower index first on ties), ascending.
pub fn select_anchors(deviations: &[f64], top_n: usize) -> AnchorSet {
    let n = deviations.len();
    if n <= 2 {
        return AnchorSet((0..n).collect());
    }
    let mut inner: Vec<usize> = (1..n - 1).collect();
    inner.sort_by(|&a, &b| deviations[a].total_cmp(&deviations[b]).then(a.cmp(&b)));
    inner.truncate(top_n);
    let mut idx = Vec::with_capacity(inner.len() + 2);
    idx.push(0);
    idx.extend(inner);
    idx.push(n - 1);
    idx.sort_unstable();
    AnchorSet(idx)
}

/// Keeps anchor rotations and SLERPs the frames between consecutive anchors
/// `i < j` at `α = r / (j − i)` for frame `i + r`.
pub fn smooth_rotations(rotations: &[Rotation], anchors: &AnchorSet) -> Result<Vec<Rotation>> {
    let idx = anchors.indices();
    if idx.last().map(|l| l + 1) != Some(rotations.len()) || idx[0] != 0 {
        return Err(Error::InvalidConfig("anchor set does not match trajectory length"));
    }
    let mut out = rotations.to_vec();
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        if j - i < 2 {
            continue;
        }
        let qi = crate::geometry::rotation_to_quat(&rotations[i])?;
        let qj = crate::geometry::rotation_to_quat(&rotations[j])?;
        let qj = if qi.dot(qj) < 0.0 { -qj } else { qj };
        let steps = (j - i) as f64;
        for r in 1..j - i {
            out[i + r] = slerp(qi, qj, r as f64 / steps).to_rotation();
        }
    }
    Ok(out)
}

/// Per-arm diagnostics of [`smooth_trajectory`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSmoothing {
    pub plane: Plane,
    pub deviations: Vec<f64>,
    pub anchors: AnchorSet,
    pub parameters: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedTrajectory {
    pub trajectory: BimanualTrajectory,
    pub left: ArmSmoothing,
    pub right: ArmSmoothing,
}

impl SmoothedTrajectory {
    pub fn arm(&self, arm: Arm) -> &ArmSmoothing {
        match arm {
            Arm::Left => &self.left,
            Arm::Right => &self.right,
        }
    }
}

/// An arm that never moves (a held pivot, a parked support hand) keeps its
/// position; only its orientation is smoothed.
fn is_stationary(positions: &[Point3]) -> bool {
    positions.iter().all(|p| *p == positions[0])
}

fn smooth_arm(poses: &[Pose], cfg: &SmoothConfig) -> Result<(Vec<Pose>, ArmSmoothing)> {
    let positions: Vec<Point3> = poses.iter().map(|p| p.position).collect();
    let rotations: Vec<Rotation> = poses.iter().map(|p| p.orientation).collect();
    cfg.validate(positions.len())?;
    let (smoothed, plane, deviations, parameters) = if is_stationary(&positions) {
        let n = positions.len();
        (
            positions.clone(),
            Plane::through_point(Point3::Z, positions[0]).expect("unit normal"),
            alloc::vec![0.0; n],
            (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
        )
    } else {
        let pos = smooth_positions(&positions, cfg)?;
        (pos.smoothed, pos.plane, pos.deviations, pos.parameters)
    };
    let anchors = select_anchors(&deviations, cfg.top_n);
    let rot = smooth_rotations(&rotations, &anchors)?;
    let out = smoothed
        .iter()
        .zip(rot)
        .map(|(p, r)| Pose::new(*p, r))
        .collect();
    Ok((
        out,
        ArmSmoothing {
            plane,
            deviations,
            anchors,
            parameters,
        },
    ))
}

/// Smooths both arms independently; lengths and timesteps are preserved.
pub fn smooth_trajectory(
    traj: &BimanualTrajectory,
    left_cfg: &SmoothConfig,
    right_cfg: &SmoothConfig,
) -> Result<SmoothedTrajectory> {
    let (left, left_diag) = smooth_arm(traj.left(), left_cfg)?;
    let (right, right_diag) = smooth_arm(traj.right(), right_cfg)?;
    Ok(SmoothedTrajectory {
        trajectory: BimanualTrajectory::new(traj.timesteps().to_vec(), left, right)?,
        left: left_diag,
        right: right_diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UnitQuaternion;
    use alloc::vec;

    #[test]
    fn anchors_worked_example() {
        let a = select_anchors(&[5.0, 1.0, 3.0, 2.0, 9.0], 2);
        assert_eq!(a.indices(), &[0, 1, 3, 4]);
        assert_eq!(select_anchors(&[5.0, 1.0, 3.0, 2.0, 9.0], 0).indices(), &[0, 4]);
        assert_eq!(
            select_anchors(&[5.0, 1.0, 3.0, 2.0, 9.0], 7).indices(),
            &[0, 1, 2, 3, 4]
        );
        assert_eq!(select_anchors(&[1.0, 1.0, 1.0, 1.0], 1).indices(), &[0, 1, 3]);
        assert_eq!(select_anchors(&[0.5], 3).indices(), &[0]);
    }

    #[test]
    fn anchor_set_validation() {
        assert!(AnchorSet::new(vec![0, 2, 4], 5).is_ok());
        assert!(AnchorSet::new(vec![1, 4], 5).is_err());
        assert!(AnchorSet::new(vec![0, 3], 5).is_err());
        assert!(AnchorSet::new(vec![0, 2, 2, 4], 5).is_err());
    }

    #[test]
    fn rotations_between_two_anchors() {
        let r4 = Rotation::from_axis_angle(Point3::new(1.0, -2.0, 0.5), 2.0 * core::f64::consts::FRAC_PI_3);
        let rots = vec![Rotation::IDENTITY, r4, r4, r4, r4];
        let out = smooth_rotations(&rots, &AnchorSet::new(vec![0, 4], 5).unwrap()).unwrap();
        assert_eq!(out[0], Rotation::IDENTITY);
        assert_eq!(out[4], r4);
        for (k, deg) in [(1usize, 30.0f64), (2, 60.0), (3, 90.0)] {
            let angle = Rotation::IDENTITY.angle_to(&out[k]);
            assert!((angle - deg.to_radians()).abs() < 1e-12, "frame {k}: {angle}");
        }
    }

    #[test]
    fn all_anchors_is_identity() {
        let rots: Vec<Rotation> = (0..6)
            .map(|i| UnitQuaternion::from_axis_angle(Point3::new(0.3, 1.0, i as f64), 0.2 * i as f64).to_rotation())
            .collect();
        let out = smooth_rotations(&rots, &AnchorSet::all(6)).unwrap();
        assert_eq!(out, rots);
    }

    #[test]
    fn too_few_points() {
        let pts = [Point3::ZERO, Point3::X, Point3::Y];
        assert!(matches!(
            smooth_positions(&pts, &SmoothConfig::default()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn straight_line_is_reproduced() {
        let dir = Point3::new(0.3, -0.1, 0.2);
        let pts: Vec<Point3> = (0..10).map(|i| Point3::new(0.1, 0.2, 0.3) + dir * i as f64).collect();
        let out = smooth_positions(&pts, &SmoothConfig::default()).unwrap();
        for (a, b) in pts.iter().zip(&out.smoothed) {
            assert!(a.distance(*b) < 1e-9);
        }
    }

    #[test]
    fn coincident_points_rejected() {
        let pts = [Point3::X; 6];
        assert!(smooth_positions(&pts, &SmoothConfig::default()).is_err());
    }

    #[test]
    fn default_control_points() {
        let cfg = SmoothConfig::default();
        assert_eq!(cfg.control_points_for(4), 4);
        assert_eq!(cfg.control_points_for(30), 10);
        assert_eq!(cfg.control_points_for(31), 11);
        let too_many = SmoothConfig {
            spline_control_points: Some(12),
            ..cfg
        };
        assert!(too_many.validate(10).is_err());
    }
}
