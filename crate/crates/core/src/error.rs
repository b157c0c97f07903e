use alloc::boxed::Box;
use core::fmt;

use crate::adjust::AdjustReport;
use crate::trajectory::Arm;

pub type Result<T> = core::result::Result<T, Error>;

/// Which of the two clouds of a size comparison an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudRole {
    Base,
    New,
}

impl fmt::Display for CloudRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CloudRole::Base => f.write_str("base"),
            CloudRole::New => f.write_str("new"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Too few points, collinear/coincident points, empty clouds and similar.
    DegenerateInput(&'static str),
    /// Matrix deviates from SO(3) by more than the accepted tolerance.
    InvalidRotation { deviation: f64 },
    /// Index and ring fingers are collinear with the wrist.
    DegenerateHand { cross_norm: f64 },
    /// The organized cloud has no valid pixel at all.
    NoValidPoint,
    /// Point is on or behind the camera plane.
    BehindCamera { z: f64 },
    InvalidConfig(&'static str),
    /// An error raised while processing one hand of one frame.
    AtFrame {
        frame_index: i64,
        arm: Arm,
        source: Box<Error>,
    },
    /// A target contact distance could not be realized.
    Unreachable { target: f64, achieved: f64 },
    /// Zero-length reference span in the primary-arm scaling.
    DegenerateGeometry,
    /// Every attempt of the contact adjustment was rejected by the verifier.
    /// Carries the last attempt and the complete attempt log.
    AllAttemptsFailed(Box<AdjustReport>),
    EmptySlice { cloud: CloudRole, height: f64 },
    NoAlignedPair { cloud: CloudRole },
    /// Inter-arm distance of a synchronized skill is not constant.
    Unsynchronized { variation: f64 },
}

impl Error {
    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::InvalidRotation { .. } => "InvalidRotation",
            Error::DegenerateHand { .. } => "DegenerateHand",
            Error::NoValidPoint => "NoValidPoint",
            Error::BehindCamera { .. } => "BehindCamera",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::AtFrame { source, .. } => source.kind(),
            Error::Unreachable { .. } => "Unreachable",
            Error::DegenerateGeometry => "DegenerateGeometry",
            Error::AllAttemptsFailed(_) => "AllAttemptsFailed",
            Error::EmptySlice { .. } => "EmptySlice",
            Error::NoAlignedPair { .. } => "NoAlignedPair",
            Error::Unsynchronized { .. } => "Unsynchronized",
        }
    }

    /// Frame index attached by per-frame processing, if any.
    pub fn frame_index(&self) -> Option<i64> {
        match self {
            Error::AtFrame { frame_index, .. } => Some(*frame_index),
            _ => None,
        }
    }

    pub(crate) fn at_frame(self, frame_index: i64, arm: Arm) -> Error {
        Error::AtFrame {
            frame_index,
            arm,
            source: Box::new(self),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::InvalidRotation { deviation } => {
                write!(f, "matrix is not a rotation (deviation {deviation:e})")
            }
            Error::DegenerateHand { cross_norm } => write!(
                f,
                "index and ring fingers are collinear with the wrist (|l_iw x l_rw| = {cross_norm:e})"
            ),
            Error::NoValidPoint => f.write_str("organized cloud has no valid point"),
            Error::BehindCamera { z } => write!(f, "point is behind the camera (z = {z})"),
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Error::AtFrame {
                frame_index,
                arm,
                source,
            } => write!(f, "frame {frame_index} ({arm} hand): {source}"),
            Error::Unreachable { target, achieved } => write!(
                f,
                "target contact distance {target} m unreachable (achieved {achieved} m)"
            ),
            Error::DegenerateGeometry => {
                f.write_str("primary start coincides with the scaling anchor")
            }
            Error::AllAttemptsFailed(report) => write!(
                f,
                "all {} contact adjustment attempts failed",
                report.log.len()
            ),
            Error::EmptySlice { cloud, height } => {
                write!(f, "{cloud} cloud has no points in the slice at z = {height}")
            }
            Error::NoAlignedPair { cloud } => write!(
                f,
                "{cloud} cloud slice has no point pair aligned with the inter-arm axis"
            ),
            Error::Unsynchronized { variation } => write!(
                f,
                "inter-arm distance varies by {variation:e} m in a synchronized skill"
            ),
        }
    }
}

impl core::error::Error for Error {}
