//! On-disk formats: point clouds (ASCII PLY, CSV, JSON), hand sequences,
//! trajectories, primitive records and attempt logs.
//!
//! Every JSON document carries a `version` string and declares `units: "m"`.
//! Writers are canonical: the same value always serializes to the same bytes.

use std::fs;
use std::path::{Path, PathBuf};

use binomap_core::adjust::{AttemptRecord, SkillKind, SkillPattern};
use binomap_core::param::PrimitiveRecord;
use binomap_core::retarget::{HandFrame, HandSequence, JOINT_COUNT};
use binomap_core::{Arm, BimanualTrajectory, Point3, PointCloud, Pose, Rotation};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TRAJ_VERSION: &str = "binomap-traj/1";
pub const RECORD_VERSION: &str = "binomap-prim/1";
pub const HANDS_VERSION: &str = "binomap-hands/1";
pub const CLOUD_VERSION: &str = "binomap-cloud/1";
pub const UNITS: &str = "m";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArmName {
    Left,
    Right,
}

impl From<ArmName> for Arm {
    fn from(a: ArmName) -> Arm {
        match a {
            ArmName::Left => Arm::Left,
            ArmName::Right => Arm::Right,
        }
    }
}

impl From<Arm> for ArmName {
    fn from(a: Arm) -> ArmName {
        match a {
            Arm::Left => ArmName::Left,
            Arm::Right => ArmName::Right,
        }
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_bytes(path, to_json_string(value).as_bytes())
}

fn check_header(path: &Path, what: &str, version: &str, expected: &str, units: &str) -> CliResult<()> {
    if version != expected {
        return Err(CliError::format(path, format!("{what}: unsupported version `{version}`, expected `{expected}`")));
    }
    if units != UNITS {
        return Err(CliError::format(path, format!("{what}: units must be `{UNITS}`, got `{units}`")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Trajectories

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseEntry {
    pub p: [f64; 3],
    /// Row-major rotation matrix.
    #[serde(rename = "R")]
    pub r: [f64; 9],
}

impl PoseEntry {
    fn from_pose(pose: &Pose) -> Self {
        PoseEntry { p: pose.position.to_array(), r: pose.orientation.to_row_major() }
    }

    fn to_pose(&self) -> Result<Pose, String> {
        let p = Point3::from_array(self.p);
        if !p.is_finite() {
            return Err("non-finite position".into());
        }
        let r = Rotation::from_row_major(self.r).map_err(|e| e.to_string())?;
        Ok(Pose::new(p, r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub timestep: i64,
    pub left: PoseEntry,
    pub right: PoseEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajFile {
    pub version: String,
    pub units: String,
    pub frames: Vec<FrameEntry>,
}

impl TrajFile {
    pub fn from_trajectory(traj: &BimanualTrajectory) -> Self {
        let frames = traj
            .timesteps()
            .iter()
            .zip(traj.left().iter().zip(traj.right()))
            .map(|(t, (l, r))| FrameEntry { timestep: *t, left: PoseEntry::from_pose(l), right: PoseEntry::from_pose(r) })
            .collect();
        TrajFile { version: TRAJ_VERSION.into(), units: UNITS.into(), frames }
    }

    /// Validates the document and builds the trajectory; `path` is only used
    /// in error messages.
    pub fn to_trajectory(&self, path: &Path) -> CliResult<BimanualTrajectory> {
        check_header(path, "trajectory", &self.version, TRAJ_VERSION, &self.units)?;
        if self.frames.is_empty() {
            return Err(CliError::format(path, "trajectory has no frames"));
        }
        let mut timesteps = Vec::with_capacity(self.frames.len());
        let mut left = Vec::with_capacity(self.frames.len());
        let mut right = Vec::with_capacity(self.frames.len());
        for f in &self.frames {
            let bad = |arm: &str, e: String| CliError::format(path, format!("timestep {}, {arm} arm: {e}", f.timestep));
            left.push(f.left.to_pose().map_err(|e| bad("left", e))?);
            right.push(f.right.to_pose().map_err(|e| bad("right", e))?);
            timesteps.push(f.timestep);
        }
        BimanualTrajectory::new(timesteps, left, right).map_err(|e| CliError::format(path, e.to_string()))
    }
}

pub fn read_trajectory(path: &Path) -> CliResult<BimanualTrajectory> {
    read_json::<TrajFile>(path)?.to_trajectory(path)
}

pub fn write_trajectory(path: &Path, traj: &BimanualTrajectory) -> CliResult<()> {
    write_json(path, &TrajFile::from_trajectory(traj))
}

// ---------------------------------------------------------------------------
// Hand sequences

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandEntry {
    pub frame_index: i64,
    /// `None` when the estimator lost the hand in this frame.
    #[serde(default)]
    pub left: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub right: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandFile {
    pub version: String,
    pub units: String,
    pub t_s: i64,
    pub t_e: i64,
    pub frames: Vec<HandEntry>,
}

impl HandFile {
    pub fn to_sequence(&self, path: &Path) -> CliResult<HandSequence> {
        check_header(path, "hand sequence", &self.version, HANDS_VERSION, &self.units)?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for f in &self.frames {
            for (arm, joints, out) in [(Arm::Left, &f.left, &mut left), (Arm::Right, &f.right, &mut right)] {
                let Some(joints) = joints else { continue };
                let joints: [Point3; JOINT_COUNT] = joints
                    .iter()
                    .map(|j| Point3::from_array(*j))
                    .collect::<Vec<_>>()
                    .try_into()
                    .map_err(|v: Vec<Point3>| {
                        CliError::format(path, format!("frame {}, {arm} hand: expected {JOINT_COUNT} joints, got {}", f.frame_index, v.len()))
                    })?;
                let frame = HandFrame::new(joints, arm, f.frame_index)
                    .map_err(|e| CliError::format(path, format!("frame {}, {arm} hand: {e}", f.frame_index)))?;
                out.push(frame);
            }
        }
        HandSequence::new(left, right, self.t_s, self.t_e).map_err(|e| CliError::format(path, e.to_string()))
    }
}

pub fn read_hands(path: &Path) -> CliResult<HandSequence> {
    read_json::<HandFile>(path)?.to_sequence(path)
}

// ---------------------------------------------------------------------------
// Point clouds

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudFile {
    pub version: String,
    pub units: String,
    /// Grid size of an organized cloud; both absent for an unordered one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    /// Row-major point list.
    pub points: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid: Option<Vec<bool>>,
}

impl CloudFile {
    pub fn from_cloud(cloud: &PointCloud) -> Self {
        let points = cloud.points().iter().map(|p| p.to_array()).collect();
        match cloud.grid() {
            Some(g) => CloudFile {
                version: CLOUD_VERSION.into(),
                units: UNITS.into(),
                width: Some(g.width),
                height: Some(g.height),
                points,
                valid: Some(g.valid.clone()),
            },
            None => CloudFile { version: CLOUD_VERSION.into(), units: UNITS.into(), width: None, height: None, points, valid: None },
        }
    }

    pub fn to_cloud(&self, path: &Path) -> CliResult<PointCloud> {
        check_header(path, "point cloud", &self.version, CLOUD_VERSION, &self.units)?;
        let points: Vec<Point3> = self.points.iter().map(|p| Point3::from_array(*p)).collect();
        match (self.width, self.height) {
            (Some(w), Some(h)) => {
                let valid = self.valid.clone().unwrap_or_else(|| vec![true; points.len()]);
                PointCloud::organized(w, h, points, valid).map_err(|e| CliError::format(path, e.to_string()))
            }
            (None, None) => {
                if self.valid.is_some() {
                    return Err(CliError::format(path, "validity mask given for an unorganized cloud"));
                }
                if points.iter().any(|p| !p.is_finite()) {
                    return Err(CliError::format(path, "non-finite point"));
                }
                Ok(PointCloud::new(points))
            }
            _ => Err(CliError::format(path, "organized cloud needs both width and height")),
        }
    }
}

/// Reads a cloud, dispatching on the file extension (`.ply`, `.csv`, `.json`).
pub fn read_cloud(path: &Path) -> CliResult<PointCloud> {
    match extension(path).as_str() {
        "ply" => parse_ply(path, &read_text(path)?).map(PointCloud::new),
        "csv" => read_csv(path).map(PointCloud::new),
        "json" => read_json::<CloudFile>(path)?.to_cloud(path),
        other => Err(CliError::format(path, format!("unsupported point cloud extension `{other}`"))),
    }
}

/// Writes a cloud in the format named by the extension. Organized clouds
/// need `.json`.
pub fn write_cloud(path: &Path, cloud: &PointCloud) -> CliResult<()> {
    match extension(path).as_str() {
        "json" => write_json(path, &CloudFile::from_cloud(cloud)),
        "ply" if !cloud.is_organized() => write_bytes(path, ply_string(cloud.points()).as_bytes()),
        "csv" if !cloud.is_organized() => write_bytes(path, csv_string(cloud.points())?.as_bytes()),
        "ply" | "csv" => Err(CliError::format(path, "organized clouds are stored as JSON")),
        other => Err(CliError::format(path, format!("unsupported point cloud extension `{other}`"))),
    }
}

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

pub fn ply_string(points: &[Point3]) -> String {
    let mut s = format!(
        "ply\nformat ascii 1.0\ncomment units m\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nend_header\n",
        points.len()
    );
    for p in points {
        s.push_str(&format!("{} {} {}\n", p.x, p.y, p.z));
    }
    s
}

/// ASCII PLY reader. Only the `x`, `y`, `z` properties of the `vertex`
/// element are used; normals, colours and other elements are skipped.
pub fn parse_ply(path: &Path, text: &str) -> CliResult<Vec<Point3>> {
    let err = |m: String| CliError::format(path, m);
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(err("missing `ply` magic line".into()));
    }
    // (name, count, property names)
    let mut elements: Vec<(String, usize, Vec<String>)> = Vec::new();
    let mut ascii = false;
    loop {
        let line = lines.next().ok_or_else(|| err("header has no `end_header`".into()))?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["format", "ascii", _] => ascii = true,
            ["format", f, _] => return Err(err(format!("unsupported PLY format `{f}`, only ascii is read"))),
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => {
                let count = count.parse().map_err(|_| err(format!("bad element count `{count}`")))?;
                elements.push((name.to_string(), count, Vec::new()));
            }
            ["property", "list", ..] => {
                let (_, _, props) = elements.last_mut().ok_or_else(|| err("property before element".into()))?;
                props.push(String::from("<list>"));
            }
            ["property", _, name] => {
                let (_, _, props) = elements.last_mut().ok_or_else(|| err("property before element".into()))?;
                props.push(name.to_string());
            }
            ["end_header"] => break,
            _ => return Err(err(format!("unrecognized header line `{line}`"))),
        }
    }
    if !ascii {
        return Err(err("missing `format ascii 1.0` line".into()));
    }
    let mut points = Vec::new();
    let mut found = false;
    for (name, count, props) in &elements {
        if name != "vertex" {
            for _ in 0..*count {
                lines.next().ok_or_else(|| err(format!("truncated `{name}` element")))?;
            }
            continue;
        }
        found = true;
        let col = |axis: &str| props.iter().position(|p| p == axis).ok_or_else(|| err(format!("vertex has no `{axis}` property")));
        let (ix, iy, iz) = (col("x")?, col("y")?, col("z")?);
        if props.iter().take(ix.max(iy).max(iz) + 1).any(|p| p == "<list>") {
            return Err(err("list properties before x, y, z are not supported".into()));
        }
        for k in 0..*count {
            let line = lines.next().ok_or_else(|| err(format!("expected {count} vertices, got {k}")))?;
            let values: Vec<&str> = line.split_whitespace().collect();
            let get = |i: usize| -> CliResult<f64> {
                let v: f64 = values
                    .get(i)
                    .ok_or_else(|| err(format!("vertex {k}: too few values")))?
                    .parse()
                    .map_err(|_| err(format!("vertex {k}: not a number")))?;
                if v.is_finite() { Ok(v) } else { Err(err(format!("vertex {k}: non-finite value"))) }
            };
            points.push(Point3::new(get(ix)?, get(iy)?, get(iz)?));
        }
    }
    if !found {
        return Err(err("no vertex element".into()));
    }
    Ok(points)
}

fn read_csv(path: &Path) -> CliResult<Vec<Point3>> {
    let err = |m: String| CliError::format(path, m);
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| err(e.to_string()))?.clone();
    let col = |axis: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(axis))
            .ok_or_else(|| err(format!("header must name columns x,y,z (missing `{axis}`)")))
    };
    let (ix, iy, iz) = (col("x")?, col("y")?, col("z")?);
    let mut points = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let get = |i: usize| -> CliResult<f64> {
            let v: f64 = rec
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(format!("row {}: bad number", row + 1)))?;
            if v.is_finite() { Ok(v) } else { Err(err(format!("row {}: non-finite value", row + 1))) }
        };
        points.push(Point3::new(get(ix)?, get(iy)?, get(iz)?));
    }
    Ok(points)
}

fn csv_string(points: &[Point3]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Config(e.to_string());
    w.write_record(["x", "y", "z"]).map_err(to_err)?;
    for p in points {
        w.write_record([p.x.to_string(), p.y.to_string(), p.z.to_string()]).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

// ---------------------------------------------------------------------------
// Attempt logs and primitive records

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptEntry {
    pub k: usize,
    pub d_k: f64,
    pub s_k: f64,
    pub outcome: String,
    pub detail: String,
    /// Initial contact distance of the candidate.
    pub achieved: f64,
}

impl From<&AttemptRecord> for AttemptEntry {
    fn from(a: &AttemptRecord) -> Self {
        AttemptEntry {
            k: a.k,
            d_k: a.d_k,
            s_k: a.s_k,
            outcome: a.result.outcome.as_str().into(),
            detail: a.result.detail.clone(),
            achieved: a.achieved,
        }
    }
}

/// One JSON object per line.
pub fn attempts_jsonl(log: &[AttemptRecord]) -> String {
    let mut s = String::new();
    for a in log {
        s.push_str(&serde_json::to_string(&AttemptEntry::from(a)).expect("serializable"));
        s.push('\n');
    }
    s
}

pub fn read_attempts(path: &Path) -> CliResult<Vec<AttemptEntry>> {
    read_text(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| CliError::format(path, e.to_string())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternEntry {
    pub skill: String,
    pub primary_arm: ArmName,
}

impl PatternEntry {
    pub fn from_pattern(p: &SkillPattern) -> Self {
        PatternEntry { skill: p.kind().as_str().into(), primary_arm: p.primary_arm().into() }
    }

    pub fn to_pattern(&self, path: &Path) -> CliResult<SkillPattern> {
        let kind: SkillKind = self.skill.parse().map_err(|e: binomap_core::Error| CliError::format(path, e.to_string()))?;
        Ok(SkillPattern::new(kind, self.primary_arm.into()))
    }
}

/// Adjustment settings the record was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub d1: f64,
    pub gamma: f64,
    pub k_max: usize,
    pub verifier: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFile {
    pub version: String,
    pub units: String,
    pub skill: String,
    pub pattern: PatternEntry,
    pub d: f64,
    pub s: f64,
    pub k_used: usize,
    /// Object cloud path, relative to the record file.
    pub base_cloud: String,
    pub provenance: Provenance,
    pub attempts: Vec<AttemptEntry>,
    pub trajectory: TrajFile,
}

/// A loaded record plus the parts of the file the core type does not hold.
#[derive(Debug, Clone)]
pub struct LoadedRecord {
    pub record: PrimitiveRecord,
    pub file: RecordFile,
    pub base_cloud_path: PathBuf,
}

pub fn read_record(path: &Path) -> CliResult<LoadedRecord> {
    let file: RecordFile = read_json(path)?;
    check_header(path, "primitive record", &file.version, RECORD_VERSION, &file.units)?;
    let trajectory = file.trajectory.to_trajectory(path)?;
    let pattern = file.pattern.to_pattern(path)?;
    let base_cloud_path = path.parent().unwrap_or(Path::new("")).join(&file.base_cloud);
    let base_cloud = read_cloud(&base_cloud_path)?;
    let record = PrimitiveRecord { trajectory, base_cloud, pattern, d: file.d, s: file.s, skill: file.skill.clone() };
    record.validate().map_err(|e| CliError::format(path, e.to_string()))?;
    Ok(LoadedRecord { record, file, base_cloud_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ply_skips_extra_properties_and_elements() {
        let text = "ply\nformat ascii 1.0\nelement vertex 2\nproperty float nx\nproperty float x\nproperty float y\nproperty float z\n\
                    element face 1\nproperty list uchar int vertex_indices\nend_header\n9 1 2 3\n9 4 5 6\n3 0 1 1\n";
        let pts = parse_ply(Path::new("t.ply"), text).unwrap();
        assert_eq!(pts, vec![Point3::new(1.0, 2.0, 3.0), Point3::new(4.0, 5.0, 6.0)]);
    }

    #[test]
    fn ply_rejects_binary_and_truncation() {
        let bin = "ply\nformat binary_little_endian 1.0\nelement vertex 1\nproperty float x\nend_header\n";
        assert!(parse_ply(Path::new("t.ply"), bin).is_err());
        let short = "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2 3\n";
        assert!(parse_ply(Path::new("t.ply"), short).is_err());
    }

    #[test]
    fn ply_round_trip_is_exact() {
        let pts = vec![Point3::new(0.1, -2.5e-7, 3.0), Point3::new(1.0 / 3.0, 0.0, -0.0)];
        assert_eq!(parse_ply(Path::new("t.ply"), &ply_string(&pts)).unwrap(), pts);
    }

    #[test]
    fn trajectory_document_round_trip() {
        let pose = Pose::new(Point3::new(0.1, 0.2, 0.3), Rotation::from_axis_angle(Point3::Y, 0.4));
        let traj = BimanualTrajectory::new(vec![3, 4], vec![pose; 2], vec![Pose::default(); 2]).unwrap();
        let doc = TrajFile::from_trajectory(&traj);
        let back: TrajFile = serde_json::from_str(&to_json_string(&doc)).unwrap();
        assert_eq!(back.to_trajectory(Path::new("t.json")).unwrap(), traj);
    }
}
