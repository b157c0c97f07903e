//! Static SVG figures and summary statistics for trajectories and records.

use std::fmt::Write as _;
use std::path::Path;

use binomap_core::{fit_plane, Arm, BimanualTrajectory, Point3};
use serde::Serialize;
use serde_json::Value;

use crate::commands::{Report, TrajectoryInput};
use crate::error::{CliError, CliResult};
use crate::format::{self, UNITS};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;
const LEFT_COLOR: &str = "#1f77b4";
const RIGHT_COLOR: &str = "#d62728";
const RAW_COLOR: &str = "#999999";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmStats {
    pub plane_residual_max: f64,
    pub plane_residual_mean: f64,
    /// Distance to the reference trajectory, when one was given.
    pub deviation_max: Option<f64>,
    pub deviation_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotStats {
    pub version: &'static str,
    pub units: &'static str,
    pub frames: usize,
    pub left: ArmStats,
    pub right: ArmStats,
    pub k_used: Option<usize>,
    pub d: Option<f64>,
    pub d_sequence: Option<Vec<f64>>,
}

/// Unsigned distances to the least-squares plane; all zero when the arm does
/// not span a plane (parked arm, too few frames).
fn plane_residuals(points: &[Point3]) -> Vec<f64> {
    match fit_plane(points) {
        Ok(fit) => points.iter().map(|p| fit.plane.signed_distance(*p).abs()).collect(),
        Err(_) => vec![0.0; points.len()],
    }
}

fn max_mean(v: &[f64]) -> (f64, f64) {
    (v.iter().copied().fold(0.0, f64::max), v.iter().sum::<f64>() / v.len() as f64)
}

fn arm_stats(traj: &BimanualTrajectory, raw: Option<&BimanualTrajectory>, arm: Arm) -> (ArmStats, Vec<f64>) {
    let pts = traj.positions(arm);
    let res = plane_residuals(&pts);
    let (rmax, rmean) = max_mean(&res);
    let dev = raw.map(|r| {
        let d: Vec<f64> = r.positions(arm).iter().zip(&pts).map(|(a, b)| a.distance(*b)).collect();
        max_mean(&d)
    });
    (
        ArmStats { plane_residual_max: rmax, plane_residual_mean: rmean, deviation_max: dev.map(|d| d.0), deviation_mean: dev.map(|d| d.1) },
        res,
    )
}

struct Frame {
    lo: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = [f64; 2]>) -> Frame {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-6);
        let scale = (WIDTH - 2.0 * MARGIN).min(HEIGHT - 2.0 * MARGIN) / span;
        Frame { lo, scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.lo[0]) * self.scale, HEIGHT - MARGIN - (p[1] - self.lo[1]) * self.scale)
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n"
    )
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[[f64; 2]], color: &str, dashed: bool) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = frame.map(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let dash = if dashed { " stroke-dasharray=\"4 3\"" } else { "" };
    let _ = writeln!(svg, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>", coords.join(" "));
}

/// Orthographic projection of both arms onto two world axes.
fn projection_svg(traj: &BimanualTrajectory, raw: Option<&BimanualTrajectory>, axes: [usize; 2]) -> String {
    let names = ["x", "y", "z"];
    let project = |t: &BimanualTrajectory, arm: Arm| -> Vec<[f64; 2]> {
        t.positions(arm).iter().map(|p| { let a = p.to_array(); [a[axes[0]], a[axes[1]]] }).collect()
    };
    let mut all: Vec<[f64; 2]> = Vec::new();
    for t in std::iter::once(traj).chain(raw) {
        for arm in [Arm::Left, Arm::Right] {
            all.extend(project(t, arm));
        }
    }
    let frame = Frame::fit(all.into_iter());
    let mut svg = svg_open(&format!("{}-{} projection (m)", names[axes[0]], names[axes[1]]));
    if let Some(r) = raw {
        for arm in [Arm::Left, Arm::Right] {
            polyline(&mut svg, &frame, &project(r, arm), RAW_COLOR, true);
        }
    }
    polyline(&mut svg, &frame, &project(traj, Arm::Left), LEFT_COLOR, false);
    polyline(&mut svg, &frame, &project(traj, Arm::Right), RIGHT_COLOR, false);
    svg.push_str("</svg>\n");
    svg
}

fn bars_svg(title: &str, values: &[f64], highlight: Option<usize>, labels: &[String]) -> String {
    let mut svg = svg_open(title);
    let top = values.iter().copied().fold(0.0, f64::max).max(1e-12);
    let n = values.len().max(1) as f64;
    let slot = (WIDTH - 2.0 * MARGIN) / n;
    for (i, v) in values.iter().enumerate() {
        let h = (HEIGHT - 2.0 * MARGIN - 20.0) * v / top;
        let x = MARGIN + slot * i as f64;
        let color = if Some(i) == highlight { RIGHT_COLOR } else { LEFT_COLOR };
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"{color}\"/>",
            x + 0.1 * slot,
            HEIGHT - MARGIN - h,
            0.8 * slot
        );
        if let Some(label) = labels.get(i) {
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{label}</text>",
                x + 0.5 * slot,
                HEIGHT - MARGIN + 14.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn histogram(values: &[f64], bins: usize) -> (Vec<f64>, f64) {
    let top = values.iter().copied().fold(0.0, f64::max);
    let width = if top > 0.0 { top / bins as f64 } else { 1.0 };
    let mut counts = vec![0.0; bins];
    for v in values {
        counts[((v / width) as usize).min(bins - 1)] += 1.0;
    }
    (counts, width)
}

pub fn cmd_plot(input: &Path, raw: Option<&Path>, out: &Path) -> CliResult<Report> {
    let input = TrajectoryInput::read(input)?;
    let traj = input.trajectory();
    let raw = raw.map(format::read_trajectory).transpose()?;
    if let Some(r) = &raw {
        if r.len() != traj.len() {
            return Err(CliError::Config(format!("reference trajectory has {} frames, input has {}", r.len(), traj.len())));
        }
    }
    let (left, mut residuals) = arm_stats(traj, raw.as_ref(), Arm::Left);
    let (right, right_res) = arm_stats(traj, raw.as_ref(), Arm::Right);
    residuals.extend(right_res);
    let (k_used, d, d_sequence) = match &input {
        TrajectoryInput::Record(r) => (Some(r.file.k_used), Some(r.file.d), Some(r.file.attempts.iter().map(|a| a.d_k).collect::<Vec<_>>())),
        TrajectoryInput::Trajectory(_) => (None, None, None),
    };
    let stats = PlotStats { version: "binomap-plot-stats/1", units: UNITS, frames: traj.len(), left, right, k_used, d, d_sequence };

    let mut written = Vec::new();
    let mut emit = |name: &str, body: String| -> CliResult<()> {
        let path = out.join(name);
        format::write_bytes(&path, body.as_bytes())?;
        written.push(path);
        Ok(())
    };
    for (name, axes) in [("projection_xy.svg", [0, 1]), ("projection_xz.svg", [0, 2]), ("projection_yz.svg", [1, 2])] {
        emit(name, projection_svg(traj, raw.as_ref(), axes))?;
    }
    let (counts, width) = histogram(&residuals, 20);
    let labels: Vec<String> = (0..counts.len()).step_by(5).map(|i| format!("{:.1e}", width * i as f64)).collect();
    let labels: Vec<String> = (0..counts.len()).map(|i| if i % 5 == 0 { labels[i / 5].clone() } else { String::new() }).collect();
    emit("plane_residuals.svg", bars_svg("plane residual histogram (m)", &counts, None, &labels))?;
    if let Some(seq) = &stats.d_sequence {
        let mm: Vec<f64> = seq.iter().map(|d| d * 1e3).collect();
        let labels: Vec<String> = (1..=mm.len()).map(|k| k.to_string()).collect();
        emit("d_sequence.svg", bars_svg("target contact distance d_k (mm)", &mm, stats.k_used.map(|k| k - 1), &labels))?;
    }
    let stats_path = out.join("stats.json");
    format::write_json(&stats_path, &stats)?;
    written.push(stats_path);
    let summary: Value = serde_json::to_value(&stats).expect("serializable");
    Ok(Report { written, summary })
}
