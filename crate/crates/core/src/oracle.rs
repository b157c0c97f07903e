//! Deterministic stand-ins for physical verification of a candidate
//! trajectory.

use alloc::format;

use crate::adjust::{Outcome, SkillPattern, Verifier, VerifierResult};
use crate::geometry::{min_distance, thin, ConvexHull, PointCloud};
use crate::trajectory::{Arm, BimanualTrajectory};
use crate::{Error, Result};

/// Accepts when the primary arm's initial contact distance lies in `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOracle {
    pub lo: f64,
    /// May be `f64::INFINITY`.
    pub hi: f64,
}

impl WindowOracle {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let w = WindowOracle { lo, hi };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo >= 0.0 && self.lo.is_finite() && self.hi >= self.lo) {
            return Err(Error::InvalidConfig("window must satisfy 0 <= lo <= hi"));
        }
        Ok(())
    }

    pub fn classify(&self, d0: f64) -> Outcome {
        if d0 < self.lo {
            Outcome::OverCompression
        } else if d0 > self.hi {
            Outcome::ContactLoss
        } else {
            Outcome::Success
        }
    }
}

pub fn verify_window(
    traj: &BimanualTrajectory,
    primary: Arm,
    object: &PointCloud,
    window: &WindowOracle,
) -> VerifierResult {
    let p = traj.initial(primary).position;
    let d0 = match min_distance(p, object) {
        Ok(n) => n.distance,
        Err(e) => return VerifierResult::new(Outcome::OtherFailure, format!("{e}")),
    };
    let outcome = window.classify(d0);
    VerifierResult::new(
        outcome,
        format!("initial contact distance {d0:.6} m, window [{}, {}]", window.lo, window.hi),
    )
}

/// Inclusive range of frame indices (positions in the trajectory).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameRange {
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Contact is lost when the primary arm is farther than this, meters.
    pub loss_threshold: f64,
    /// Over-compression when deeper than this inside the object hull, meters.
    pub compress_threshold: f64,
    /// `None` checks every frame.
    pub contact_frames: Option<FrameRange>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            loss_threshold: 0.005,
            compress_threshold: 0.005,
            contact_frames: None,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.loss_threshold > 0.0) {
            return Err(Error::InvalidConfig("loss_threshold must be positive"));
        }
        if !(self.compress_threshold >= 0.0) {
            return Err(Error::InvalidConfig("compress_threshold must be >= 0"));
        }
        if self.contact_frames.is_some_and(|r| r.first > r.last) {
            return Err(Error::InvalidConfig("contact_frames must satisfy first <= last"));
        }
        Ok(())
    }
}

/// Clouds larger than this are thinned by a uniform stride before the
/// convex hull is built.
pub const MAX_HULL_POINTS: usize = 3000;

/// Checks contact over the configured frames, lowest failing frame first.
///
/// At each frame over-compression (depth inside the convex hull of the
/// object) is tested before contact loss. Without a usable hull only the
/// loss test runs and the detail says so.
pub fn verify_geometric(
    traj: &BimanualTrajectory,
    primary: Arm,
    object: &PointCloud,
    cfg: &OracleConfig,
) -> VerifierResult {
    if let Err(e) = cfg.validate() {
        return VerifierResult::new(Outcome::OtherFailure, format!("{e}"));
    }
    let range = cfg.contact_frames.unwrap_or(FrameRange {
        first: 0,
        last: traj.len() - 1,
    });
    if range.last >= traj.len() {
        return VerifierResult::new(
            Outcome::OtherFailure,
            format!(
                "contact frames {}..={} exceed trajectory length {}",
                range.first,
                range.last,
                traj.len()
            ),
        );
    }
    let points = thin(object.valid_points().map(|(_, p)| p).collect(), MAX_HULL_POINTS);
    let hull = ConvexHull::build(&points);
    let poses = traj.arm(primary);
    let mut worst: f64 = 0.0;
    for frame in range.first..=range.last {
        let p = poses[frame].position;
        if let Some(h) = &hull {
            let depth = h.penetration_depth(p);
            if depth > cfg.compress_threshold {
                return VerifierResult::new(
                    Outcome::OverCompression,
                    format!("frame {frame}: penetration depth {depth:.6} m"),
                );
            }
        }
        let d = match min_distance(p, object) {
            Ok(n) => n.distance,
            Err(e) => return VerifierResult::new(Outcome::OtherFailure, format!("{e}")),
        };
        if d > cfg.loss_threshold {
            return VerifierResult::new(
                Outcome::ContactLoss,
                format!("frame {frame}: contact distance {d:.6} m"),
            );
        }
        worst = worst.max(d);
    }
    let note = if hull.is_none() {
        "; hull unavailable (degenerate cloud), compression not checked"
    } else {
        ""
    };
    VerifierResult::new(
        Outcome::Success,
        format!(
            "frames {}..={} in contact, max distance {worst:.6} m{note}",
            range.first, range.last
        ),
    )
}

impl Verifier for WindowOracle {
    fn verify(&self, traj: &BimanualTrajectory, pattern: &SkillPattern, object: &PointCloud) -> VerifierResult {
        verify_window(traj, pattern.primary_arm(), object, self)
    }
}

impl Verifier for OracleConfig {
    fn verify(&self, traj: &BimanualTrajectory, pattern: &SkillPattern, object: &PointCloud) -> VerifierResult {
        verify_geometric(traj, pattern.primary_arm(), object, self)
    }
}

/// Either bundled oracle, selectable from configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BundledVerifier {
    Window(WindowOracle),
    Geometric(OracleConfig),
}

impl BundledVerifier {
    pub fn validate(&self) -> Result<()> {
        match self {
            BundledVerifier::Window(w) => w.validate(),
            BundledVerifier::Geometric(g) => g.validate(),
        }
    }
}

impl Verifier for BundledVerifier {
    fn verify(&self, traj: &BimanualTrajectory, pattern: &SkillPattern, object: &PointCloud) -> VerifierResult {
        match self {
            BundledVerifier::Window(w) => w.verify(traj, pattern, object),
            BundledVerifier::Geometric(g) => g.verify(traj, pattern, object),
        }
    }
}
