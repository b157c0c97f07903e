//! Category-level resizing of a verified primitive.
//!
//! The object's extent along the inter-arm axis is measured on a horizontal
//! slice at the contact height for both the base and the new instance; the
//! difference widens or narrows the arm span in a single scaling step.

use alloc::string::String;
use alloc::vec::Vec;

use crate::adjust::{anchor_point, relocate, scale_primary, SkillPattern};
use crate::geometry::{thin, Point3, PointCloud};
use crate::math;
use crate::trajectory::{Arm, BimanualTrajectory};
use crate::{CloudRole, Error, Result};

/// Slices larger than this are thinned by a uniform stride before the pair scan.
pub const MAX_SLICE_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceConfig {
    /// Slice height in meters; `None` uses the primary arm's initial `z`.
    pub slice_height: Option<f64>,
    pub half_thickness: f64,
    /// Maximum angle between a point pair and the inter-arm axis, radians.
    pub direction_tolerance: f64,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig {
            slice_height: None,
            half_thickness: 0.005,
            direction_tolerance: 5.0f64.to_radians(),
        }
    }
}

impl SliceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_thickness > 0.0) {
            return Err(Error::InvalidConfig("half_thickness must be positive"));
        }
        if !(self.direction_tolerance > 0.0 && self.direction_tolerance < core::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidConfig("direction_tolerance must be in (0, pi/2)"));
        }
        if self.slice_height.is_some_and(|h| !h.is_finite()) {
            return Err(Error::InvalidConfig("slice_height must be finite"));
        }
        Ok(())
    }

    pub fn at_height(self, height: f64) -> Self {
        SliceConfig {
            slice_height: Some(height),
            ..self
        }
    }
}

/// A refined, verified primitive together with the object it was tuned on.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveRecord {
    pub trajectory: BimanualTrajectory,
    pub base_cloud: PointCloud,
    pub pattern: SkillPattern,
    /// Verified target distance of the accepted attempt.
    pub d: f64,
    /// Scaling factor of the accepted attempt.
    pub s: f64,
    pub skill: String,
}

impl PrimitiveRecord {
    pub fn validate(&self) -> Result<()> {
        if self.base_cloud.is_empty() {
            return Err(Error::DegenerateInput("record has an empty base cloud"));
        }
        if !(self.d >= 0.0) {
            return Err(Error::InvalidConfig("record distance must be >= 0"));
        }
        if !(self.s > 0.0) || !self.s.is_finite() {
            return Err(Error::InvalidConfig("record scaling factor must be positive"));
        }
        Ok(())
    }
}

/// Points of the cloud within the horizontal slab around `height`.
pub fn horizontal_slice(cloud: &PointCloud, height: f64, half_thickness: f64) -> Vec<Point3> {
    cloud
        .valid_points()
        .map(|(_, p)| p)
        .filter(|p| (p.z - height).abs() <= half_thickness)
        .collect()
}

/// Longest point-pair distance in `points` whose direction lies within
/// `tolerance` of `±axis`; `None` if no pair qualifies.
pub fn max_aligned_span(points: &[Point3], axis: Point3, tolerance: f64) -> Option<f64> {
    let cos_tol = math::cos(tolerance);
    let mut best: Option<f64> = None;
    for (i, u) in points.iter().enumerate() {
        for v in &points[i + 1..] {
            let d = *v - *u;
            let len = d.norm();
            if len > 0.0 && d.dot(axis).abs() >= len * cos_tol && best.is_none_or(|b| len > b) {
                best = Some(len);
            }
        }
    }
    best
}

fn slice_span(cloud: &PointCloud, role: CloudRole, axis: Point3, cfg: &SliceConfig, height: f64) -> Result<f64> {
    let slice = horizontal_slice(cloud, height, cfg.half_thickness);
    if slice.is_empty() {
        return Err(Error::EmptySlice { cloud: role, height });
    }
    max_aligned_span(&thin(slice, MAX_SLICE_POINTS), axis, cfg.direction_tolerance).ok_or(Error::NoAlignedPair { cloud: role })
}

/// Difference of the aligned slice extents, new minus base.
pub fn size_delta(base: &PointCloud, new: &PointCloud, axis: Point3, cfg: &SliceConfig) -> Result<f64> {
    cfg.validate()?;
    let height = cfg
        .slice_height
        .ok_or(Error::InvalidConfig("slice height is not set"))?;
    let axis = axis
        .try_normalize()
        .ok_or(Error::DegenerateInput("inter-arm axis has zero length"))?;
    let span_base = slice_span(base, CloudRole::Base, axis, cfg, height)?;
    let span_new = slice_span(new, CloudRole::New, axis, cfg, height)?;
    Ok(span_new - span_base)
}

/// Horizontal direction between the two arms' initial positions.
pub fn inter_arm_axis(traj: &BimanualTrajectory) -> Result<Point3> {
    let d = traj.initial(Arm::Left).position - traj.initial(Arm::Right).position;
    Point3::new(d.x, d.y, 0.0)
        .try_normalize()
        .ok_or(Error::DegenerateInput("arms are vertically aligned at the start"))
}

/// One step of [`adapt_primitive`], in order of execution.
#[derive(Debug, Clone, PartialEq)]
pub enum AdaptStep {
    SizeDelta { delta: f64, axis: Point3, height: f64 },
    Scale { anchor: Point3, new_start: Point3, s: f64 },
    Relocate { shift: Point3 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adaptation {
    pub trajectory: BimanualTrajectory,
    pub delta: f64,
    pub s: f64,
    pub steps: Vec<AdaptStep>,
}

impl Adaptation {
    pub fn scale_calls(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, AdaptStep::Scale { .. }))
            .count()
    }
}

/// Resizes and moves a recorded primitive for a new object instance.
pub fn adapt_primitive(rec: &PrimitiveRecord, new: &PointCloud, cfg: &SliceConfig) -> Result<Adaptation> {
    rec.validate()?;
    if new.is_empty() {
        return Err(Error::DegenerateInput("new object cloud is empty"));
    }
    let traj = &rec.trajectory;
    let primary = rec.pattern.primary_arm();
    let start = traj.initial(primary).position;
    let height = cfg.slice_height.unwrap_or(start.z);
    let axis = inter_arm_axis(traj)?;
    let delta = size_delta(&rec.base_cloud, new, axis, &cfg.at_height(height))?;
    let mut steps = Vec::with_capacity(3);
    steps.push(AdaptStep::SizeDelta { delta, axis, height });

    let anchor = anchor_point(traj, &rec.pattern, &rec.base_cloud)?;
    let outward = (start - anchor).try_normalize().ok_or(Error::DegenerateGeometry)?;
    let new_start = start + outward * delta;
    let (scaled, s) = scale_primary(traj, &rec.pattern, anchor, new_start)?;
    steps.push(AdaptStep::Scale { anchor, new_start, s });

    let trajectory = relocate(&scaled, &rec.base_cloud, new)?;
    let shift = crate::adjust::planar_shift(
        rec.base_cloud.centroid().expect("nonempty"),
        new.centroid().expect("nonempty"),
    );
    steps.push(AdaptStep::Relocate { shift });
    Ok(Adaptation {
        trajectory,
        delta,
        s,
        steps,
    })
}
