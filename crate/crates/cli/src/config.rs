//! Pipeline configuration file.
//!
//! ```json
//! {
//!   "skill": "pivoting", "primary_arm": "right",
//!   "d1": 0.005, "gamma": 0.85, "k_max": 10,
//!   "camera": { "fx": 500, "fy": 500, "cx": 199.5, "cy": 149.5,
//!               "rotation": [1,0,0, 0,0,1, 0,-1,0], "translation": [0,-0.6,0.12] },
//!   "smooth": { "left": { "top_n": 3 }, "right": { "spline_control_points": 5 } },
//!   "verifier": { "kind": "window", "lo": 0.003, "hi": 0.0034 },
//!   "inputs": { "hands": "hands.json", "scene": "scene.json", "object": "object.ply" },
//!   "out": "out"
//! }
//! ```
//!
//! Every block except `skill` is optional. Relative paths are resolved
//! against the directory holding the config file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use binomap_core::adjust::{AdjustConfig, SkillKind, SkillPattern};
use binomap_core::oracle::{BundledVerifier, FrameRange, OracleConfig, WindowOracle};
use binomap_core::param::SliceConfig;
use binomap_core::retarget::{Camera, CameraIntrinsics, JointIndexConfig};
use binomap_core::smooth::SmoothConfig;
use binomap_core::{Point3, Rotation};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{read_json, ArmName};

fn default_skill() -> String {
    "pivoting".into()
}

fn default_primary() -> ArmName {
    ArmName::Right
}

fn default_d1() -> f64 {
    AdjustConfig::default().d1
}

fn default_gamma() -> f64 {
    AdjustConfig::default().gamma
}

fn default_k_max() -> usize {
    AdjustConfig::default().k_max
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_skill")]
    pub skill: String,
    #[serde(default = "default_primary")]
    pub primary_arm: ArmName,
    #[serde(default = "default_d1")]
    pub d1: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraBlock>,
    #[serde(default)]
    pub joints: JointsBlock,
    #[serde(default)]
    pub smooth: SmoothBlock,
    #[serde(default)]
    pub slice: SliceBlock,
    #[serde(default)]
    pub verifier: VerifierBlock,
    #[serde(default)]
    pub inputs: InputsBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields defaulted")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraBlock {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    /// Camera-to-working-frame rotation, row-major. Identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[f64; 9]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<[f64; 3]>,
}

impl CameraBlock {
    pub fn to_camera(&self) -> CliResult<Camera> {
        let intr = CameraIntrinsics { fx: self.fx, fy: self.fy, cx: self.cx, cy: self.cy };
        if ![intr.fx, intr.fy].iter().all(|f| f.is_finite() && *f > 0.0) || ![intr.cx, intr.cy].iter().all(|c| c.is_finite()) {
            return Err(CliError::Config("camera focal lengths must be positive and finite".into()));
        }
        let rotation = match self.rotation {
            Some(r) => Rotation::from_row_major(r).map_err(|e| CliError::Config(format!("camera rotation: {e}")))?,
            None => Rotation::IDENTITY,
        };
        let translation = Point3::from_array(self.translation.unwrap_or([0.0; 3]));
        if !translation.is_finite() {
            return Err(CliError::Config("camera translation must be finite".into()));
        }
        Ok(Camera::new(intr).with_pose(rotation, translation))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JointsBlock {
    pub wrist: usize,
    pub thumb_tip: usize,
    pub index_tip: usize,
    pub ring_tip: usize,
}

impl Default for JointsBlock {
    fn default() -> Self {
        let d = JointIndexConfig::default();
        JointsBlock { wrist: d.wrist, thumb_tip: d.thumb_tip, index_tip: d.index_tip, ring_tip: d.ring_tip }
    }
}

impl JointsBlock {
    pub fn to_config(self) -> JointIndexConfig {
        JointIndexConfig { wrist: self.wrist, thumb_tip: self.thumb_tip, index_tip: self.index_tip, ring_tip: self.ring_tip }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArmSmoothBlock {
    pub top_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spline_control_points: Option<usize>,
    pub spline_smoothing_weight: f64,
}

impl Default for ArmSmoothBlock {
    fn default() -> Self {
        let d = SmoothConfig::default();
        ArmSmoothBlock { top_n: d.top_n, spline_control_points: d.spline_control_points, spline_smoothing_weight: d.spline_smoothing_weight }
    }
}

impl ArmSmoothBlock {
    pub fn to_config(self) -> SmoothConfig {
        SmoothConfig {
            top_n: self.top_n,
            spline_control_points: self.spline_control_points,
            spline_smoothing_weight: self.spline_smoothing_weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmoothBlock {
    pub left: ArmSmoothBlock,
    pub right: ArmSmoothBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SliceBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice_height: Option<f64>,
    pub half_thickness: f64,
    /// Radians.
    pub direction_tolerance: f64,
}

impl Default for SliceBlock {
    fn default() -> Self {
        let d = SliceConfig::default();
        SliceBlock { slice_height: d.slice_height, half_thickness: d.half_thickness, direction_tolerance: d.direction_tolerance }
    }
}

impl SliceBlock {
    pub fn to_config(self) -> SliceConfig {
        SliceConfig { slice_height: self.slice_height, half_thickness: self.half_thickness, direction_tolerance: self.direction_tolerance }
    }
}

fn default_loss() -> f64 {
    OracleConfig::default().loss_threshold
}

fn default_compress() -> f64 {
    OracleConfig::default().compress_threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum VerifierBlock {
    /// Success iff the initial contact distance lies in `[lo, hi]`.
    Window { lo: f64, hi: f64 },
    /// Distance and hull-penetration checks over `contact_frames`
    /// (`[first, last]`, inclusive; all frames when absent).
    Geometric {
        #[serde(default = "default_loss")]
        loss_threshold: f64,
        #[serde(default = "default_compress")]
        compress_threshold: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        contact_frames: Option<[usize; 2]>,
    },
}

impl Default for VerifierBlock {
    fn default() -> Self {
        let d = OracleConfig::default();
        VerifierBlock::Geometric { loss_threshold: d.loss_threshold, compress_threshold: d.compress_threshold, contact_frames: None }
    }
}

impl VerifierBlock {
    pub fn to_verifier(self) -> BundledVerifier {
        match self {
            VerifierBlock::Window { lo, hi } => BundledVerifier::Window(WindowOracle { lo, hi }),
            VerifierBlock::Geometric { loss_threshold, compress_threshold, contact_frames } => BundledVerifier::Geometric(OracleConfig {
                loss_threshold,
                compress_threshold,
                contact_frames: contact_frames.map(|[first, last]| FrameRange { first, last }),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputsBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hands: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scene: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_object: Option<PathBuf>,
}

impl PipelineConfig {
    /// Reads, resolves relative paths and validates.
    pub fn load(path: &Path) -> CliResult<PipelineConfig> {
        let mut cfg: PipelineConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut().filter(|q| q.is_relative()) {
                *q = base.join(&*q);
            }
        };
        let i = &mut self.inputs;
        for p in [&mut i.hands, &mut i.scene, &mut i.object, &mut i.new_object, &mut self.out] {
            fix(p);
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let core = |e: binomap_core::Error| CliError::Config(e.to_string());
        self.pattern()?;
        self.adjust().validate().map_err(core)?;
        self.slice.to_config().validate().map_err(core)?;
        self.joints.to_config().validate().map_err(core)?;
        self.verifier.to_verifier().validate().map_err(core)?;
        if let Some(c) = &self.camera {
            c.to_camera()?;
        }
        for (arm, s) in [("left", self.smooth.left), ("right", self.smooth.right)] {
            if s.spline_control_points.is_some_and(|m| m < 4) {
                return Err(CliError::Config(format!("smooth.{arm}.spline_control_points must be at least 4")));
            }
            if !(s.spline_smoothing_weight >= 0.0 && s.spline_smoothing_weight.is_finite()) {
                return Err(CliError::Config(format!("smooth.{arm}.spline_smoothing_weight must be finite and >= 0")));
            }
        }
        let paths: Vec<&PathBuf> = [&self.inputs.hands, &self.inputs.scene, &self.inputs.object, &self.inputs.new_object, &self.out]
            .into_iter()
            .flatten()
            .collect();
        let distinct: BTreeSet<&PathBuf> = paths.iter().copied().collect();
        if distinct.len() != paths.len() {
            return Err(CliError::Config("referenced paths must be distinct".into()));
        }
        Ok(())
    }

    pub fn pattern(&self) -> CliResult<SkillPattern> {
        let kind: SkillKind = self.skill.parse().map_err(|e: binomap_core::Error| CliError::Config(e.to_string()))?;
        Ok(SkillPattern::new(kind, self.primary_arm.into()))
    }

    pub fn adjust(&self) -> AdjustConfig {
        AdjustConfig { d1: self.d1, gamma: self.gamma, k_max: self.k_max }
    }

    pub fn camera(&self) -> CliResult<Camera> {
        self.camera.as_ref().ok_or_else(|| CliError::Config("a camera block is required for retargeting".into()))?.to_camera()
    }

    /// `--flag` value if given, otherwise the config input.
    pub fn input(&self, flag: Option<&Path>, from_config: &Option<PathBuf>, name: &str) -> CliResult<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| from_config.clone())
            .ok_or_else(|| CliError::Config(format!("no {name} input: pass it on the command line or set inputs.{name}")))
    }
}
