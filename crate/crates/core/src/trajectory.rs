use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{Point3, Rotation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arm {
    Left,
    Right,
}

impl Arm {
    pub fn other(self) -> Arm {
        match self {
            Arm::Left => Arm::Right,
            Arm::Right => Arm::Left,
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::Left => "left",
            Arm::Right => "right",
        })
    }
}

/// End-effector position and orientation at one timestep.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub position: Point3,
    pub orientation: Rotation,
}

impl Pose {
    pub fn new(position: Point3, orientation: Rotation) -> Self {
        Pose {
            position,
            orientation,
        }
    }
}

/// Time-indexed left/right pose sequences of equal, nonzero length.
#[derive(Debug, Clone, PartialEq)]
pub struct BimanualTrajectory {
    timesteps: Vec<i64>,
    left: Vec<Pose>,
    right: Vec<Pose>,
}

impl BimanualTrajectory {
    pub fn new(timesteps: Vec<i64>, left: Vec<Pose>, right: Vec<Pose>) -> Result<Self> {
        if left.is_empty() {
            return Err(Error::DegenerateInput("trajectory is empty"));
        }
        if left.len() != right.len() || timesteps.len() != left.len() {
            return Err(Error::DegenerateInput(
                "left, right and timestep sequences differ in length",
            ));
        }
        if timesteps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateInput("timesteps must be strictly increasing"));
        }
        if left
            .iter()
            .chain(&right)
            .any(|p| !p.position.is_finite())
        {
            return Err(Error::DegenerateInput("non-finite position"));
        }
        Ok(BimanualTrajectory {
            timesteps,
            left,
            right,
        })
    }

    /// Timesteps `0..n`.
    pub fn from_arms(left: Vec<Pose>, right: Vec<Pose>) -> Result<Self> {
        let timesteps = (0..left.len() as i64).collect();
        Self::new(timesteps, left, right)
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn timesteps(&self) -> &[i64] {
        &self.timesteps
    }

    pub fn arm(&self, arm: Arm) -> &[Pose] {
        match arm {
            Arm::Left => &self.left,
            Arm::Right => &self.right,
        }
    }

    pub fn left(&self) -> &[Pose] {
        &self.left
    }

    pub fn right(&self) -> &[Pose] {
        &self.right
    }

    pub fn positions(&self, arm: Arm) -> Vec<Point3> {
        self.arm(arm).iter().map(|p| p.position).collect()
    }

    pub fn rotations(&self, arm: Arm) -> Vec<Rotation> {
        self.arm(arm).iter().map(|p| p.orientation).collect()
    }

    pub fn initial(&self, arm: Arm) -> Pose {
        self.arm(arm)[0]
    }

    /// Replaces one arm; the new sequence must keep the length.
    pub fn with_arm(&self, arm: Arm, poses: Vec<Pose>) -> Result<Self> {
        let (left, right) = match arm {
            Arm::Left => (poses, self.right.clone()),
            Arm::Right => (self.left.clone(), poses),
        };
        Self::new(self.timesteps.clone(), left, right)
    }

    /// Translates both arms at every frame; orientations are untouched.
    pub fn translated(&self, delta: Point3) -> Self {
        let shift = |poses: &[Pose]| {
            poses
                .iter()
                .map(|p| Pose::new(p.position + delta, p.orientation))
                .collect()
        };
        BimanualTrajectory {
            timesteps: self.timesteps.clone(),
            left: shift(&self.left),
            right: shift(&self.right),
        }
    }

    /// Same poses with the left/right labels exchanged.
    pub fn swapped(&self) -> Self {
        BimanualTrajectory {
            timesteps: self.timesteps.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Per-frame distance between the two arms' positions.
    pub fn inter_arm_distances(&self) -> Vec<f64> {
        self.left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| l.position.distance(r.position))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn shape_validated() {
        let p = Pose::default();
        assert!(BimanualTrajectory::from_arms(vec![], vec![]).is_err());
        assert!(BimanualTrajectory::from_arms(vec![p, p], vec![p]).is_err());
        assert!(BimanualTrajectory::new(vec![3, 3], vec![p, p], vec![p, p]).is_err());
        let t = BimanualTrajectory::new(vec![3, 7], vec![p, p], vec![p, p]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.timesteps(), &[3, 7]);
    }
}
