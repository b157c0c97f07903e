//! One function per subcommand. Each reads its inputs, runs a core stage,
//! writes its outputs plus a diagnostics sidecar into the output directory
//! and returns a JSON summary for stdout.

use std::path::{Path, PathBuf};

use binomap_core::adjust::{iterate_adjust, relocate, synchronize_arms, AdjustReport, SkillPattern, Verifier as _};
use binomap_core::param::adapt_primitive;
use binomap_core::retarget::extract_coarse;
use binomap_core::smooth::{smooth_trajectory, ArmSmoothing, SmoothedTrajectory};
use binomap_core::{Arm, BimanualTrajectory, Error as CoreError, PointCloud};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::PipelineConfig;
use crate::error::{AtStage, CliError, CliResult, Stage};
use crate::format::{
    self, attempts_jsonl, AttemptEntry, PatternEntry, Provenance, RecordFile, TrajFile, RECORD_VERSION, UNITS,
};

/// What a subcommand wrote and a short machine-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub written: Vec<PathBuf>,
    pub summary: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "written": self.written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "summary": self.summary,
        })
    }
}

// ---------------------------------------------------------------------------
// retarget

pub fn retarget(hands: &Path, scene: &Path, cfg: &PipelineConfig) -> CliResult<BimanualTrajectory> {
    let seq = format::read_hands(hands)?;
    let scene = format::read_cloud(scene)?;
    let camera = cfg.camera()?;
    info!("retargeting frames {}..={}", seq.start(), seq.end());
    extract_coarse(&seq, &scene, &camera, &cfg.joints.to_config()).at(Stage::Retarget)
}

pub fn cmd_retarget(hands: &Path, scene: &Path, cfg: &PipelineConfig, out: &Path) -> CliResult<Report> {
    let traj = retarget(hands, scene, cfg)?;
    let path = out.join("coarse.json");
    format::write_trajectory(&path, &traj)?;
    Ok(Report { written: vec![path], summary: json!({ "frames": traj.len() }) })
}

// ---------------------------------------------------------------------------
// smooth

#[derive(Serialize)]
struct PlaneEntry {
    normal: [f64; 3],
    offset: f64,
}

#[derive(Serialize)]
struct ArmDiagnostics {
    plane: PlaneEntry,
    anchors: Vec<usize>,
    max_deviation: f64,
    mean_deviation: f64,
    deviations: Vec<f64>,
    parameters: Vec<f64>,
}

impl From<&ArmSmoothing> for ArmDiagnostics {
    fn from(a: &ArmSmoothing) -> Self {
        ArmDiagnostics {
            plane: PlaneEntry { normal: a.plane.normal.to_array(), offset: a.plane.offset },
            anchors: a.anchors.indices().to_vec(),
            max_deviation: a.deviations.iter().copied().fold(0.0, f64::max),
            mean_deviation: a.deviations.iter().sum::<f64>() / a.deviations.len() as f64,
            deviations: a.deviations.clone(),
            parameters: a.parameters.clone(),
        }
    }
}

#[derive(Serialize)]
struct SmoothDiagnostics {
    version: &'static str,
    units: &'static str,
    left: ArmDiagnostics,
    right: ArmDiagnostics,
}

pub fn smooth(traj: &BimanualTrajectory, cfg: &PipelineConfig) -> CliResult<SmoothedTrajectory> {
    smooth_trajectory(traj, &cfg.smooth.left.to_config(), &cfg.smooth.right.to_config()).at(Stage::Smooth)
}

fn write_smoothed(out: &Path, s: &SmoothedTrajectory) -> CliResult<Vec<PathBuf>> {
    let traj = out.join("smoothed.json");
    let diag = out.join("smooth_diagnostics.json");
    format::write_trajectory(&traj, &s.trajectory)?;
    format::write_json(
        &diag,
        &SmoothDiagnostics { version: "binomap-smooth-diag/1", units: UNITS, left: (&s.left).into(), right: (&s.right).into() },
    )?;
    Ok(vec![traj, diag])
}

fn smooth_summary(s: &SmoothedTrajectory) -> Value {
    let arm = |a: &ArmSmoothing| {
        json!({
            "max_deviation": a.deviations.iter().copied().fold(0.0, f64::max),
            "anchors": a.anchors.indices(),
        })
    };
    json!({ "frames": s.trajectory.len(), "left": arm(&s.left), "right": arm(&s.right) })
}

pub fn cmd_smooth(traj: &Path, cfg: &PipelineConfig, out: &Path) -> CliResult<Report> {
    let input = format::read_trajectory(traj)?;
    let s = smooth(&input, cfg)?;
    Ok(Report { written: write_smoothed(out, &s)?, summary: smooth_summary(&s) })
}

// ---------------------------------------------------------------------------
// adjust

/// Runs the adjustment loop. Synchronized skills first have their primary
/// arm re-derived from the support arm so the inter-arm distance is exact.
pub fn adjust(traj: &BimanualTrajectory, object: &PointCloud, cfg: &PipelineConfig) -> CliResult<AdjustReport> {
    let pattern = cfg.pattern()?;
    let verifier = cfg.verifier.to_verifier();
    let traj = synchronize_arms(traj, &pattern).at(Stage::Adjust)?;
    info!("adjusting {} with {:?}", pattern.kind(), verifier);
    iterate_adjust(&traj, &pattern, object, &cfg.adjust(), &verifier).at(Stage::Adjust)
}

#[derive(Serialize)]
struct AdjustSummary {
    version: &'static str,
    units: &'static str,
    skill: String,
    primary_arm: String,
    converged: bool,
    k_used: usize,
    d: f64,
    s: f64,
    achieved: f64,
    d_sequence: Vec<f64>,
    provenance: Provenance,
}

fn provenance(cfg: &PipelineConfig) -> Provenance {
    Provenance {
        d1: cfg.d1,
        gamma: cfg.gamma,
        k_max: cfg.k_max,
        verifier: serde_json::to_value(cfg.verifier).expect("serializable"),
    }
}

fn adjust_summary(report: &AdjustReport, pattern: &SkillPattern, cfg: &PipelineConfig) -> AdjustSummary {
    let last = report.final_attempt();
    AdjustSummary {
        version: "binomap-adjust/1",
        units: UNITS,
        skill: pattern.kind().as_str().into(),
        primary_arm: pattern.primary_arm().to_string(),
        converged: report.converged,
        k_used: report.k_used,
        d: last.d_k,
        s: last.s_k,
        achieved: last.achieved,
        d_sequence: report.log.iter().map(|a| a.d_k).collect(),
        provenance: provenance(cfg),
    }
}

/// Writes the attempt log, the candidate and the summary. On exhaustion the
/// last candidate goes to `adjusted_last.json` and the error is returned
/// after everything is on disk.
fn write_adjust(
    out: &Path,
    result: CliResult<AdjustReport>,
    cfg: &PipelineConfig,
) -> CliResult<(AdjustReport, Vec<PathBuf>)> {
    let pattern = cfg.pattern()?;
    let (report, err) = match result {
        Ok(r) => (r, None),
        Err(CliError::Core { stage, source: CoreError::AllAttemptsFailed(report) }) => {
            let r = (*report).clone();
            (r, Some(CliError::Core { stage, source: CoreError::AllAttemptsFailed(report) }))
        }
        Err(e) => return Err(e),
    };
    let log = out.join("attempts.jsonl");
    let traj = out.join(if report.converged { "adjusted.json" } else { "adjusted_last.json" });
    let summary = out.join("adjust_summary.json");
    format::write_bytes(&log, attempts_jsonl(&report.log).as_bytes())?;
    format::write_trajectory(&traj, &report.trajectory)?;
    format::write_json(&summary, &adjust_summary(&report, &pattern, cfg))?;
    match err {
        Some(e) => Err(e),
        None => Ok((report, vec![log, traj, summary])),
    }
}

fn adjust_summary_json(report: &AdjustReport) -> Value {
    let last = report.final_attempt();
    json!({
        "k_used": report.k_used,
        "converged": report.converged,
        "d": last.d_k,
        "s": last.s_k,
        "achieved": last.achieved,
        "outcome": last.result.outcome.as_str(),
    })
}

pub fn cmd_adjust(traj: &Path, object: &Path, cfg: &PipelineConfig, out: &Path) -> CliResult<Report> {
    let input = format::read_trajectory(traj)?;
    let object = format::read_cloud(object)?;
    let (report, written) = write_adjust(out, adjust(&input, &object, cfg), cfg)?;
    Ok(Report { written, summary: adjust_summary_json(&report) })
}

// ---------------------------------------------------------------------------
// pipeline

pub const BASE_CLOUD_FILE: &str = "object_base.ply";

pub fn build_record(report: &AdjustReport, cfg: &PipelineConfig) -> CliResult<RecordFile> {
    let pattern = cfg.pattern()?;
    let last = report.final_attempt();
    Ok(RecordFile {
        version: RECORD_VERSION.into(),
        units: UNITS.into(),
        skill: cfg.skill.clone(),
        pattern: PatternEntry::from_pattern(&pattern),
        d: last.d_k,
        s: last.s_k,
        k_used: report.k_used,
        base_cloud: BASE_CLOUD_FILE.into(),
        provenance: provenance(cfg),
        attempts: report.log.iter().map(AttemptEntry::from).collect(),
        trajectory: TrajFile::from_trajectory(&report.trajectory),
    })
}

/// retarget → smooth → adjust, then the primitive record. The object cloud
/// is copied next to the record so the output directory is self-contained.
pub fn cmd_pipeline(cfg: &PipelineConfig, out: &Path) -> CliResult<Report> {
    let hands = cfg.input(None, &cfg.inputs.hands, "hands")?;
    let scene = cfg.input(None, &cfg.inputs.scene, "scene")?;
    let object_path = cfg.input(None, &cfg.inputs.object, "object")?;
    let mut written = Vec::new();

    let coarse = retarget(&hands, &scene, cfg)?;
    let coarse_path = out.join("coarse.json");
    format::write_trajectory(&coarse_path, &coarse)?;
    written.push(coarse_path);

    let smoothed = smooth(&coarse, cfg)?;
    written.extend(write_smoothed(out, &smoothed)?);

    let object = format::read_cloud(&object_path)?;
    let (report, paths) = write_adjust(out, adjust(&smoothed.trajectory, &object, cfg), cfg)?;
    written.extend(paths);

    let base = out.join(BASE_CLOUD_FILE);
    format::write_cloud(&base, &object.to_unorganized())?;
    let record = out.join("record.json");
    format::write_json(&record, &build_record(&report, cfg)?)?;
    written.extend([base, record]);
    info!("pipeline converged at k = {}", report.k_used);
    Ok(Report { written, summary: adjust_summary_json(&report) })
}

// ---------------------------------------------------------------------------
// param / relocate

#[derive(Serialize)]
struct ParamDiagnostics {
    version: &'static str,
    units: &'static str,
    delta: f64,
    s: f64,
    scale_calls: usize,
    steps: Vec<Value>,
}

pub fn cmd_param(record: &Path, new_object: &Path, cfg: &PipelineConfig, out: &Path) -> CliResult<Report> {
    use binomap_core::param::AdaptStep;
    let loaded = format::read_record(record)?;
    let new = format::read_cloud(new_object)?;
    let adapted = adapt_primitive(&loaded.record, &new, &cfg.slice.to_config()).at(Stage::Param)?;
    let steps = adapted
        .steps
        .iter()
        .map(|s| match s {
            AdaptStep::SizeDelta { delta, axis, height } => {
                json!({ "step": "size_delta", "delta": delta, "axis": axis.to_array(), "height": height })
            }
            AdaptStep::Scale { anchor, new_start, s } => {
                json!({ "step": "scale", "anchor": anchor.to_array(), "new_start": new_start.to_array(), "s": s })
            }
            AdaptStep::Relocate { shift } => json!({ "step": "relocate", "shift": shift.to_array() }),
        })
        .collect();
    let traj = out.join("adapted.json");
    let diag = out.join("param_diagnostics.json");
    format::write_trajectory(&traj, &adapted.trajectory)?;
    format::write_json(
        &diag,
        &ParamDiagnostics {
            version: "binomap-param-diag/1",
            units: UNITS,
            delta: adapted.delta,
            s: adapted.s,
            scale_calls: adapted.scale_calls(),
            steps,
        },
    )?;
    Ok(Report { written: vec![traj, diag], summary: json!({ "delta": adapted.delta, "s": adapted.s }) })
}

pub fn cmd_relocate(traj: &Path, base: &Path, new: &Path, out: &Path) -> CliResult<Report> {
    let input = format::read_trajectory(traj)?;
    let base = format::read_cloud(base)?;
    let new = format::read_cloud(new)?;
    let moved = relocate(&input, &base, &new).at(Stage::Relocate)?;
    let shift = moved.initial(Arm::Left).position - input.initial(Arm::Left).position;
    let path = out.join("relocated.json");
    let diag = out.join("relocate_diagnostics.json");
    format::write_trajectory(&path, &moved)?;
    format::write_json(&diag, &json!({ "version": "binomap-relocate-diag/1", "units": UNITS, "shift": shift.to_array() }))?;
    Ok(Report { written: vec![path, diag], summary: json!({ "shift": shift.to_array() }) })
}

// ---------------------------------------------------------------------------
// verify

/// A trajectory file or a primitive record, told apart by `version`.
pub enum TrajectoryInput {
    Trajectory(BimanualTrajectory),
    Record(Box<format::LoadedRecord>),
}

impl TrajectoryInput {
    pub fn read(path: &Path) -> CliResult<TrajectoryInput> {
        let value: Value = format::read_json(path)?;
        match value.get("version").and_then(Value::as_str) {
            Some(RECORD_VERSION) => Ok(TrajectoryInput::Record(Box::new(format::read_record(path)?))),
            _ => {
                let doc: TrajFile = serde_json::from_value(value).map_err(|e| CliError::format(path, e.to_string()))?;
                Ok(TrajectoryInput::Trajectory(doc.to_trajectory(path)?))
            }
        }
    }

    pub fn trajectory(&self) -> &BimanualTrajectory {
        match self {
            TrajectoryInput::Trajectory(t) => t,
            TrajectoryInput::Record(r) => &r.record.trajectory,
        }
    }
}

/// Runs the configured verifier once. A record supplies its own pattern and
/// object when none is given.
pub fn cmd_verify(input: &Path, object: Option<&Path>, cfg: &PipelineConfig, out: Option<&Path>) -> CliResult<Report> {
    let input = TrajectoryInput::read(input)?;
    let (pattern, object) = match (&input, object) {
        (_, Some(path)) => (cfg.pattern()?, format::read_cloud(path)?),
        (TrajectoryInput::Record(r), None) => (r.record.pattern, r.record.base_cloud.clone()),
        (TrajectoryInput::Trajectory(_), None) => match &cfg.inputs.object {
            Some(path) => (cfg.pattern()?, format::read_cloud(path)?),
            None => return Err(CliError::Config("verify needs --object for a plain trajectory".into())),
        },
    };
    let verifier = cfg.verifier.to_verifier();
    verifier.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let result = verifier.verify(input.trajectory(), &pattern, &object);
    let summary = json!({
        "outcome": result.outcome.as_str(),
        "detail": result.detail,
        "primary_arm": pattern.primary_arm().to_string(),
        "verifier": serde_json::to_value(cfg.verifier).expect("serializable"),
    });
    let mut written = Vec::new();
    if let Some(dir) = out {
        let path = dir.join("verify.json");
        format::write_json(&path, &summary)?;
        written.push(path);
    }
    Ok(Report { written, summary })
}
