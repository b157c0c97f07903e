//! Iterative contact adjustment.
//!
//! The primary arm's initial contact is pulled toward the object by a
//! geometrically shrinking target distance `d_k = d1·γ^(k−1)`; the whole
//! primary trajectory follows by a similarity about the pattern's anchor and
//! each candidate is submitted to a [`Verifier`] until one succeeds.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::geometry::{farthest_point, min_distance, Point3, PointCloud};
use crate::math;
use crate::trajectory::{Arm, BimanualTrajectory, Pose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkillKind {
    Poking,
    Pivoting,
    Pushing,
    Wrapping,
}

impl SkillKind {
    pub const ALL: [SkillKind; 4] = [
        SkillKind::Poking,
        SkillKind::Pivoting,
        SkillKind::Pushing,
        SkillKind::Wrapping,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SkillKind::Poking => "poking",
            SkillKind::Pivoting => "pivoting",
            SkillKind::Pushing => "pushing",
            SkillKind::Wrapping => "wrapping",
        }
    }

    /// Both arms move rigidly together and must keep their distance.
    pub fn is_synchronized(self) -> bool {
        matches!(self, SkillKind::Pushing | SkillKind::Wrapping)
    }
}

impl fmt::Display for SkillKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SkillKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SkillKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidConfig(
                "skill must be poking, pivoting, pushing or wrapping",
            ))
    }
}

/// What the primary arm is scaled about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// The support arm's initial position.
    FixedArm,
    /// The object point farthest from the primary arm's initial position.
    ObjectFarthestPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkillPattern {
    kind: SkillKind,
    primary_arm: Arm,
}

impl SkillPattern {
    pub fn new(kind: SkillKind, primary_arm: Arm) -> Self {
        SkillPattern { kind, primary_arm }
    }

    /// Right arm primary, left arm as support or pivot.
    pub fn default_for(kind: SkillKind) -> Self {
        SkillPattern::new(kind, Arm::Right)
    }

    pub fn kind(&self) -> SkillKind {
        self.kind
    }

    pub fn primary_arm(&self) -> Arm {
        self.primary_arm
    }

    pub fn support_arm(&self) -> Arm {
        self.primary_arm.other()
    }

    pub fn reference(&self) -> Reference {
        match self.kind {
            SkillKind::Poking => Reference::ObjectFarthestPoint,
            _ => Reference::FixedArm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustConfig {
    /// First target contact distance, meters.
    pub d1: f64,
    pub gamma: f64,
    pub k_max: usize,
}

impl Default for AdjustConfig {
    fn default() -> Self {
        AdjustConfig {
            d1: 0.005,
            gamma: 0.85,
            k_max: 10,
        }
    }
}

impl AdjustConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d1 > 0.0) || !self.d1.is_finite() {
            return Err(Error::InvalidConfig("d1 must be positive"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidConfig("gamma must be in (0, 1)"));
        }
        if self.k_max < 1 {
            return Err(Error::InvalidConfig("k_max must be at least 1"));
        }
        Ok(())
    }

    /// `d_k = d1·γ^(k−1)` for `k ≥ 1`.
    pub fn target_distance(&self, k: usize) -> f64 {
        self.d1 * math::powi(self.gamma, k as i32 - 1)
    }

    pub fn schedule(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (1..=self.k_max).map(|k| (k, self.target_distance(k)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Success,
    ContactLoss,
    OverCompression,
    OtherFailure,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "Success",
            Outcome::ContactLoss => "ContactLoss",
            Outcome::OverCompression => "OverCompression",
            Outcome::OtherFailure => "OtherFailure",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Outcome::Success,
            Outcome::ContactLoss,
            Outcome::OverCompression,
            Outcome::OtherFailure,
        ]
        .into_iter()
        .find(|o| o.as_str() == s)
        .ok_or(Error::InvalidConfig("unknown verification outcome"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifierResult {
    pub outcome: Outcome,
    pub detail: String,
}

impl VerifierResult {
    pub fn new(outcome: Outcome, detail: impl Into<String>) -> Self {
        VerifierResult {
            outcome,
            detail: detail.into(),
        }
    }

    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// Judges one candidate trajectory. Implementations must be deterministic.
pub trait Verifier {
    fn verify(
        &self,
        traj: &BimanualTrajectory,
        pattern: &SkillPattern,
        object: &PointCloud,
    ) -> VerifierResult;
}

impl<F> Verifier for F
where
    F: Fn(&BimanualTrajectory, &SkillPattern, &PointCloud) -> VerifierResult,
{
    fn verify(
        &self,
        traj: &BimanualTrajectory,
        pattern: &SkillPattern,
        object: &PointCloud,
    ) -> VerifierResult {
        self(traj, pattern, object)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttemptRecord {
    pub k: usize,
    pub d_k: f64,
    pub s_k: f64,
    /// Contact distance of the scaled primary start.
    pub achieved: f64,
    pub result: VerifierResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjustReport {
    /// The successful candidate, or the last one tried.
    pub trajectory: BimanualTrajectory,
    pub k_used: usize,
    pub log: Vec<AttemptRecord>,
    pub converged: bool,
}

impl AdjustReport {
    pub fn final_attempt(&self) -> &AttemptRecord {
        self.log.last().expect("at least one attempt")
    }
}

/// The fixed point the primary arm is scaled about.
pub fn anchor_point(
    traj: &BimanualTrajectory,
    pattern: &SkillPattern,
    object: &PointCloud,
) -> Result<Point3> {
    if object.is_empty() {
        return Err(Error::DegenerateInput("object cloud is empty"));
    }
    match pattern.reference() {
        Reference::FixedArm => Ok(traj.initial(pattern.support_arm()).position),
        Reference::ObjectFarthestPoint => {
            farthest_point(traj.initial(pattern.primary_arm()).position, object).map(|(_, p)| p)
        }
    }
}

const RETARGET_TOLERANCE: f64 = 1e-6;
const MAX_BRACKET_STEPS: usize = 60;

/// Moves `p_start` along the line through its nearest object point until its
/// minimum distance to the object equals `d_target`.
///
/// Approaching is exact: distance to a point set is 1-Lipschitz and the
/// nearest point stays nearest along the segment toward it. Receding is
/// solved by bracketing and bisection.
pub fn retarget_contact(p_start: Point3, object: &PointCloud, d_target: f64) -> Result<Point3> {
    if !(d_target >= 0.0) || !d_target.is_finite() {
        return Err(Error::InvalidConfig("target distance must be finite and >= 0"));
    }
    let nearest = min_distance(p_start, object)?;
    let d0 = nearest.distance;
    if (d0 - d_target).abs() <= RETARGET_TOLERANCE * 1e-3 {
        return Ok(p_start);
    }
    let Some(dir) = (p_start - nearest.point).try_normalize() else {
        // Start lies on the cloud: there is no ray to follow.
        return Err(Error::Unreachable {
            target: d_target,
            achieved: d0,
        });
    };
    if d_target < d0 {
        return Ok(nearest.point + dir * d_target);
    }

    let dist_at = |lambda: f64| min_distance(p_start + dir * lambda, object).map(|n| n.distance);
    let (mut lo, mut hi) = (0.0, d_target - d0);
    let mut d_hi = dist_at(hi)?;
    let mut steps = 0;
    while d_hi < d_target {
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(Error::Unreachable {
                target: d_target,
                achieved: d_hi,
            });
        }
        lo = hi;
        hi *= 2.0;
        d_hi = dist_at(hi)?;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = dist_at(mid)?;
        if (d - d_target).abs() <= RETARGET_TOLERANCE * 1e-3 {
            return Ok(p_start + dir * mid);
        }
        if d < d_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let p = p_start + dir * hi;
    let achieved = dist_at(hi)?;
    if (achieved - d_target).abs() <= RETARGET_TOLERANCE {
        Ok(p)
    } else {
        Err(Error::Unreachable {
            target: d_target,
            achieved,
        })
    }
}

const DEGENERATE_SPAN: f64 = 1e-9;

/// Scales the primary arm about `anchor` so that its start distance to the
/// anchor becomes `‖new_start − anchor‖`; returns the trajectory and `s`.
///
/// With an arm reference the anchor follows the support arm's displacement
/// from its initial position, so motion shared by both arms is not scaled.
/// The support arm and all orientations are left untouched.
pub fn scale_primary(
    traj: &BimanualTrajectory,
    pattern: &SkillPattern,
    anchor: Point3,
    new_start: Point3,
) -> Result<(BimanualTrajectory, f64)> {
    let primary = pattern.primary_arm();
    let old_start = traj.initial(primary).position;
    let span = old_start.distance(anchor);
    if !(span > DEGENERATE_SPAN) {
        return Err(Error::DegenerateGeometry);
    }
    let s = new_start.distance(anchor) / span;
    let support = traj.arm(pattern.support_arm());
    let support_start = support[0].position;
    let scaled: Vec<Pose> = traj
        .arm(primary)
        .iter()
        .zip(support)
        .map(|(p, sup)| {
            let a = match pattern.reference() {
                Reference::FixedArm => anchor + (sup.position - support_start),
                Reference::ObjectFarthestPoint => anchor,
            };
            Pose::new(a + (p.position - a) * s, p.orientation)
        })
        .collect();
    Ok((traj.with_arm(primary, scaled)?, s))
}

/// Largest spread of the per-frame inter-arm distance.
pub fn inter_arm_variation(traj: &BimanualTrajectory) -> f64 {
    let d = traj.inter_arm_distances();
    let (lo, hi) = d
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    hi - lo
}

pub const SYNC_TOLERANCE: f64 = 1e-6;

/// Rejects synchronized skills whose arms do not keep a constant distance.
pub fn check_synchronized(traj: &BimanualTrajectory, pattern: &SkillPattern) -> Result<()> {
    if !pattern.kind().is_synchronized() {
        return Ok(());
    }
    let variation = inter_arm_variation(traj);
    if variation > SYNC_TOLERANCE {
        return Err(Error::Unsynchronized { variation });
    }
    Ok(())
}

/// Re-derives the primary arm of a synchronized skill from the support arm:
/// the initial offset and relative orientation are carried through every
/// frame. Other skills are returned unchanged.
pub fn synchronize_arms(traj: &BimanualTrajectory, pattern: &SkillPattern) -> Result<BimanualTrajectory> {
    if !pattern.kind().is_synchronized() {
        return Ok(traj.clone());
    }
    let support = traj.arm(pattern.support_arm());
    let primary0 = traj.initial(pattern.primary_arm());
    let support0 = support[0];
    let inv0 = support0.orientation.transpose();
    let offset = inv0.apply(primary0.position - support0.position);
    let relative = inv0 * primary0.orientation;
    let poses = support
        .iter()
        .map(|s| {
            Pose::new(
                s.position + s.orientation.apply(offset),
                s.orientation * relative,
            )
        })
        .collect();
    traj.with_arm(pattern.primary_arm(), poses)
}

/// Runs the decreasing-distance schedule until the verifier accepts.
///
/// Every attempt starts from `traj`; attempts differ only in the target
/// distance. On exhaustion the report with all attempts is returned inside
/// [`Error::AllAttemptsFailed`].
pub fn iterate_adjust<V: Verifier + ?Sized>(
    traj: &BimanualTrajectory,
    pattern: &SkillPattern,
    object: &PointCloud,
    cfg: &AdjustConfig,
    verifier: &V,
) -> Result<AdjustReport> {
    cfg.validate()?;
    check_synchronized(traj, pattern)?;
    let anchor = anchor_point(traj, pattern, object)?;
    let start = traj.initial(pattern.primary_arm()).position;
    let mut log = Vec::with_capacity(cfg.k_max);
    let mut last = None;
    for (k, d_k) in cfg.schedule() {
        let target = retarget_contact(start, object, d_k)?;
        let (candidate, s_k) = scale_primary(traj, pattern, anchor, target)?;
        let achieved = min_distance(candidate.initial(pattern.primary_arm()).position, object)?.distance;
        let result = verifier.verify(&candidate, pattern, object);
        let success = result.is_success();
        log.push(AttemptRecord {
            k,
            d_k,
            s_k,
            achieved,
            result,
        });
        if success {
            return Ok(AdjustReport {
                trajectory: candidate,
                k_used: k,
                log,
                converged: true,
            });
        }
        last = Some(candidate);
    }
    Err(Error::AllAttemptsFailed(Box::new(AdjustReport {
        trajectory: last.expect("k_max >= 1"),
        k_used: cfg.k_max,
        log,
        converged: false,
    })))
}

/// Translates both arms by the horizontal centroid displacement between the
/// base and the new object cloud.
pub fn relocate(traj: &BimanualTrajectory, base: &PointCloud, new: &PointCloud) -> Result<BimanualTrajectory> {
    let (Some(cb), Some(cn)) = (base.centroid(), new.centroid()) else {
        return Err(Error::DegenerateInput("object cloud is empty"));
    };
    Ok(traj.translated(planar_shift(cb, cn)))
}

pub(crate) fn planar_shift(from: Point3, to: Point3) -> Point3 {
    let d = to - from;
    Point3::new(d.x, d.y, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rotation;
    use alloc::vec;

    fn traj(left: &[Point3], right: &[Point3]) -> BimanualTrajectory {
        let pose = |p: &Point3| Pose::new(*p, Rotation::IDENTITY);
        BimanualTrajectory::from_arms(left.iter().map(pose).collect(), right.iter().map(pose).collect())
            .unwrap()
    }

    #[test]
    fn pattern_references() {
        assert_eq!(
            SkillPattern::default_for(SkillKind::Poking).reference(),
            Reference::ObjectFarthestPoint
        );
        for k in [SkillKind::Pivoting, SkillKind::Pushing, SkillKind::Wrapping] {
            assert_eq!(SkillPattern::default_for(k).reference(), Reference::FixedArm);
        }
        assert_eq!("Wrapping".parse::<SkillKind>().unwrap(), SkillKind::Wrapping);
        assert!("grasping".parse::<SkillKind>().is_err());
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = AdjustConfig::default();
        assert_eq!((cfg.d1, cfg.gamma, cfg.k_max), (0.005, 0.85, 10));
        assert!(AdjustConfig { d1: 0.0, ..cfg }.validate().is_err());
        assert!(AdjustConfig { gamma: 1.0, ..cfg }.validate().is_err());
        assert!(AdjustConfig { k_max: 0, ..cfg }.validate().is_err());
    }

    #[test]
    fn anchor_for_pivot_and_poke() {
        let t = traj(&[Point3::new(0.3, 0.1, 0.2)], &[Point3::ZERO]);
        let cloud = PointCloud::new(vec![Point3::X, Point3::new(2.0, 0.0, 0.0)]);
        let pivot = SkillPattern::default_for(SkillKind::Pivoting);
        assert_eq!(anchor_point(&t, &pivot, &cloud).unwrap(), Point3::new(0.3, 0.1, 0.2));
        let poke = SkillPattern::default_for(SkillKind::Poking);
        assert_eq!(anchor_point(&t, &poke, &cloud).unwrap(), Point3::new(2.0, 0.0, 0.0));
        assert!(anchor_point(&t, &poke, &PointCloud::new(vec![])).is_err());
    }

    #[test]
    fn retarget_single_point() {
        let cloud = PointCloud::new(vec![Point3::ZERO]);
        let p = Point3::new(0.006, 0.008, 0.0);
        let r = retarget_contact(p, &cloud, 0.005).unwrap();
        assert!((r - Point3::new(0.003, 0.004, 0.0)).norm() < 1e-15);
        assert_eq!(retarget_contact(p, &cloud, 0.010).unwrap(), p);
        let away = retarget_contact(p, &cloud, 0.02).unwrap();
        assert!((away.norm() - 0.02).abs() < 1e-6);
    }

    #[test]
    fn retarget_on_surface_is_unreachable() {
        let cloud = PointCloud::new(vec![Point3::ZERO]);
        assert!(matches!(
            retarget_contact(Point3::ZERO, &cloud, 0.01),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn scale_worked_example() {
        let t = traj(&[Point3::ZERO, Point3::ZERO], &[Point3::new(2.0, 0.0, 0.0), Point3::new(2.0, 2.0, 0.0)]);
        let pattern = SkillPattern::default_for(SkillKind::Pivoting);
        let (out, s) = scale_primary(&t, &pattern, Point3::ZERO, Point3::X).unwrap();
        assert_eq!(s, 0.5);
        assert_eq!(out.positions(Arm::Right), vec![Point3::X, Point3::new(1.0, 1.0, 0.0)]);
        assert_eq!(out.left(), t.left());
        assert!(matches!(
            scale_primary(&t, &pattern, Point3::new(2.0, 0.0, 0.0), Point3::X),
            Err(Error::DegenerateGeometry)
        ));
    }

    #[test]
    fn window_like_verifier_converges_at_four() {
        let t = traj(&[Point3::ZERO; 3], &[Point3::new(0.1, 0.0, 0.0), Point3::new(0.1, 0.0, 0.05), Point3::new(0.05, 0.0, 0.1)]);
        let cloud = PointCloud::new(vec![Point3::new(0.09, 0.0, 0.0)]);
        let pattern = SkillPattern::default_for(SkillKind::Pivoting);
        let window = |tr: &BimanualTrajectory, p: &SkillPattern, o: &PointCloud| {
            let d = min_distance(tr.initial(p.primary_arm()).position, o).unwrap().distance;
            if (0.0030..=0.0034).contains(&d) {
                VerifierResult::new(Outcome::Success, "")
            } else {
                VerifierResult::new(Outcome::ContactLoss, "")
            }
        };
        let report = iterate_adjust(&t, &pattern, &cloud, &AdjustConfig::default(), &window).unwrap();
        assert_eq!(report.k_used, 4);
        assert_eq!(report.log.len(), 4);
        assert!(report.converged);
    }

    #[test]
    fn exhaustion_carries_full_log() {
        let t = traj(&[Point3::ZERO; 2], &[Point3::new(0.1, 0.0, 0.0); 2]);
        let cloud = PointCloud::new(vec![Point3::new(0.09, 0.0, 0.0)]);
        let reject = |_: &BimanualTrajectory, _: &SkillPattern, _: &PointCloud| {
            VerifierResult::new(Outcome::OtherFailure, "no")
        };
        let err = iterate_adjust(
            &t,
            &SkillPattern::default_for(SkillKind::Pivoting),
            &cloud,
            &AdjustConfig::default(),
            &reject,
        )
        .unwrap_err();
        let Error::AllAttemptsFailed(report) = err else {
            panic!("expected exhaustion");
        };
        assert_eq!(report.log.len(), 10);
        assert!(!report.converged);
    }

    #[test]
    fn relocate_discards_vertical() {
        let t = traj(&[Point3::ZERO], &[Point3::X]);
        let base = PointCloud::new(vec![Point3::ZERO, Point3::Z]);
        let new = base.translated(Point3::new(0.1, 0.1, 0.3));
        let out = relocate(&t, &base, &new).unwrap();
        assert!((out.left()[0].position - Point3::new(0.1, 0.1, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn synchronize_keeps_distance() {
        let left = [Point3::ZERO, Point3::new(0.0, 0.0, 0.1), Point3::new(0.1, 0.0, 0.1)];
        let right = [Point3::new(0.2, 0.0, 0.0), Point3::new(0.21, 0.0, 0.1), Point3::new(0.3, 0.01, 0.1)];
        let t = traj(&left, &right);
        let pattern = SkillPattern::default_for(SkillKind::Wrapping);
        assert!(check_synchronized(&t, &pattern).is_err());
        let synced = synchronize_arms(&t, &pattern).unwrap();
        assert!(check_synchronized(&synced, &pattern).is_ok());
        assert_eq!(synced.left(), t.left());
    }
}
