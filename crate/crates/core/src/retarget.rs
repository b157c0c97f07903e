//! Stage 1: per-frame hand joints to coarse gripper poses.
//!
//! Each hand is reduced to a contact point (thumb/index fingertip midpoint),
//! which is projected into the image, looked up in the organized scene cloud,
//! and paired with an orientation built from the wrist, index-tip and
//! ring-tip joints.

use alloc::vec::Vec;

use crate::geometry::{Point3, PointCloud, Rotation};
use crate::math;
use crate::trajectory::{Arm, BimanualTrajectory, Pose};
use crate::{Error, Result};

pub const JOINT_COUNT: usize = 21;

/// `‖l_iw × l_rw‖` at or below which a hand frame is rejected.
pub const DEGENERATE_HAND_THRESHOLD: f64 = 1e-8;

/// One hand's 21 joints at one frame, in the camera frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HandFrame {
    pub joints: [Point3; JOINT_COUNT],
    pub handedness: Arm,
    pub frame_index: i64,
}

impl HandFrame {
    pub fn new(joints: [Point3; JOINT_COUNT], handedness: Arm, frame_index: i64) -> Result<Self> {
        if joints.iter().any(|j| !j.is_finite()) {
            return Err(Error::DegenerateInput("hand joint is not finite").at_frame(frame_index, handedness));
        }
        Ok(HandFrame {
            joints,
            handedness,
            frame_index,
        })
    }

    pub fn map_joints(&self, f: impl Fn(Point3) -> Point3) -> HandFrame {
        HandFrame {
            joints: self.joints.map(f),
            handedness: self.handedness,
            frame_index: self.frame_index,
        }
    }
}

/// Both hands over a demonstration, with the annotated segment `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HandSequence {
    left: Vec<HandFrame>,
    right: Vec<HandFrame>,
    start: i64,
    end: i64,
}

impl HandSequence {
    pub fn new(left: Vec<HandFrame>, right: Vec<HandFrame>, start: i64, end: i64) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidConfig("segment start is after its end"));
        }
        for frames in [&left, &right] {
            if frames.windows(2).any(|w| w[0].frame_index >= w[1].frame_index) {
                return Err(Error::DegenerateInput(
                    "hand frame indices must be strictly increasing",
                ));
            }
        }
        Ok(HandSequence {
            left,
            right,
            start,
            end,
        })
    }

    pub fn frames(&self, arm: Arm) -> &[HandFrame] {
        match arm {
            Arm::Left => &self.left,
            Arm::Right => &self.right,
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    pub fn frame(&self, arm: Arm, frame_index: i64) -> Option<&HandFrame> {
        let frames = self.frames(arm);
        frames
            .binary_search_by_key(&frame_index, |f| f.frame_index)
            .ok()
            .map(|i| &frames[i])
    }

    /// The same demonstration with the left/right hand lists exchanged.
    pub fn swapped(&self) -> HandSequence {
        HandSequence {
            left: self.right.clone(),
            right: self.left.clone(),
            start: self.start,
            end: self.end,
        }
    }
}

/// Which joints carry the wrist and fingertips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointIndexConfig {
    pub wrist: usize,
    pub thumb_tip: usize,
    pub index_tip: usize,
    pub ring_tip: usize,
}

impl Default for JointIndexConfig {
    fn default() -> Self {
        JointIndexConfig {
            wrist: 0,
            thumb_tip: 4,
            index_tip: 8,
            ring_tip: 16,
        }
    }
}

impl JointIndexConfig {
    pub fn validate(&self) -> Result<()> {
        let idx = [self.wrist, self.thumb_tip, self.index_tip, self.ring_tip];
        if idx.iter().any(|i| *i >= JOINT_COUNT) {
            return Err(Error::InvalidConfig("joint index out of range"));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if idx[i] == idx[j] {
                    return Err(Error::InvalidConfig("joint indices must be distinct"));
                }
            }
        }
        Ok(())
    }
}

/// Pinhole intrinsics, pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

/// Intrinsics plus the rigid transform taking camera-frame points into the
/// working frame the trajectory is expressed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub intrinsics: CameraIntrinsics,
    pub world_rotation: Rotation,
    pub world_translation: Point3,
}

impl Camera {
    pub fn new(intrinsics: CameraIntrinsics) -> Self {
        Camera {
            intrinsics,
            world_rotation: Rotation::IDENTITY,
            world_translation: Point3::ZERO,
        }
    }

    pub fn with_pose(mut self, world_rotation: Rotation, world_translation: Point3) -> Self {
        self.world_rotation = world_rotation;
        self.world_translation = world_translation;
        self
    }

    pub fn to_world(&self, p: Point3) -> Point3 {
        self.world_rotation.apply(p) + self.world_translation
    }

    pub fn to_camera(&self, p: Point3) -> Point3 {
        self.world_rotation.transpose().apply(p - self.world_translation)
    }
}

/// Integer pixel coordinates: `u` is the column, `v` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pixel {
    pub u: i64,
    pub v: i64,
}

/// Hand orientation from the wrist, index-tip and ring-tip joints.
///
/// `v_z = normalize(l_iw × l_rw)`, `v_y = normalize((l_iw + l_rw) / 2)`,
/// `v_x = v_y × v_z`, `R = [v_x | v_y | v_z]`, where `l_iw`/`l_rw` run from the
/// wrist to the index/ring fingertip.
pub fn hand_pose(frame: &HandFrame, cfg: &JointIndexConfig) -> Result<Rotation> {
    let wrist = frame.joints[cfg.wrist];
    let l_iw = frame.joints[cfg.index_tip] - wrist;
    let l_rw = frame.joints[cfg.ring_tip] - wrist;
    let vz = l_iw.cross(l_rw);
    let cross_norm = vz.norm();
    if !(cross_norm > DEGENERATE_HAND_THRESHOLD) {
        return Err(Error::DegenerateHand { cross_norm });
    }
    let vz = vz / cross_norm;
    let mid = (l_iw + l_rw) / 2.0;
    let vy = mid / mid.norm();
    let vx = vy.cross(vz);
    Ok(Rotation::from_columns_unchecked(vx, vy, vz))
}

/// Midpoint between the thumb tip and the index fingertip.
pub fn contact_point(frame: &HandFrame, cfg: &JointIndexConfig) -> Point3 {
    (frame.joints[cfg.thumb_tip] + frame.joints[cfg.index_tip]) / 2.0
}

/// Pinhole projection, rounded to the nearest pixel.
pub fn project_point(p: Point3, camera: &CameraIntrinsics) -> Result<Pixel> {
    if !(p.z > 0.0) {
        return Err(Error::BehindCamera { z: p.z });
    }
    Ok(Pixel {
        u: math::round(camera.fx * p.x / p.z + camera.cx) as i64,
        v: math::round(camera.fy * p.y / p.z + camera.cy) as i64,
    })
}

/// Scene point at `pixel`, or at the nearest valid pixel (Euclidean pixel
/// distance, row-major first on ties) when that one is masked out or lies
/// outside the grid.
pub fn lift_to_scene(pixel: Pixel, scene: &PointCloud) -> Result<Point3> {
    let grid = scene
        .grid()
        .ok_or(Error::DegenerateInput("scene cloud must be organized"))?;
    let (w, h) = (grid.width as i64, grid.height as i64);
    if (0..w).contains(&pixel.u) && (0..h).contains(&pixel.v) {
        let i = grid.index(pixel.u as usize, pixel.v as usize);
        if grid.valid[i] {
            return Ok(scene.points()[i]);
        }
    }
    let mut best: Option<(i64, usize)> = None;
    for (i, ok) in grid.valid.iter().enumerate() {
        if !*ok {
            continue;
        }
        let du = (i % grid.width) as i64 - pixel.u;
        let dv = (i / grid.width) as i64 - pixel.v;
        let d2 = du * du + dv * dv;
        if best.is_none_or(|(b, _)| d2 < b) {
            best = Some((d2, i));
        }
    }
    best.map(|(_, i)| scene.points()[i])
        .ok_or(Error::NoValidPoint)
}

/// Coarse pose of one hand at one frame, in the camera's working frame.
pub fn retarget_frame(
    frame: &HandFrame,
    scene: &PointCloud,
    camera: &Camera,
    cfg: &JointIndexConfig,
) -> Result<Pose> {
    let orientation = hand_pose(frame, cfg)?;
    let pixel = project_point(contact_point(frame, cfg), &camera.intrinsics)?;
    let position = lift_to_scene(pixel, scene)?;
    Ok(Pose::new(
        camera.to_world(position),
        camera.world_rotation * orientation,
    ))
}

/// Coarse bimanual trajectory over the annotated segment `[start, end]`.
///
/// Errors carry the failing frame index and hand.
pub fn extract_coarse(
    seq: &HandSequence,
    scene: &PointCloud,
    camera: &Camera,
    cfg: &JointIndexConfig,
) -> Result<BimanualTrajectory> {
    cfg.validate()?;
    if scene.grid().is_none() {
        return Err(Error::DegenerateInput("scene cloud must be organized"));
    }
    let mut timesteps = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for t in seq.start()..=seq.end() {
        for (arm, out) in [(Arm::Left, &mut left), (Arm::Right, &mut right)] {
            let frame = seq
                .frame(arm, t)
                .ok_or_else(|| Error::DegenerateInput("hand missing in frame").at_frame(t, arm))?;
            let pose = retarget_frame(frame, scene, camera, cfg).map_err(|e| e.at_frame(t, arm))?;
            out.push(pose);
        }
        timesteps.push(t);
    }
    BimanualTrajectory::new(timesteps, left, right)
}
