//! Argument parsing and dispatch for the `binomap` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{self, Report};
use crate::config::PipelineConfig;
use crate::error::CliResult;
use crate::plot;
use crate::scenario::{self, Scenario, DEFAULT_SIGMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Bimanual non-prehensile primitives from hand demonstrations.
#[derive(Debug, Parser)]
#[command(name = "binomap", version)]
pub struct Cli {
    /// Pipeline configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for `gen`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Format of the summary printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hand sequence + organized scene cloud -> coarse trajectory.
    Retarget {
        #[arg(long)]
        hands: Option<PathBuf>,
        #[arg(long)]
        scene: Option<PathBuf>,
    },
    /// Coplanar spline smoothing and anchor SLERP.
    Smooth { traj: PathBuf },
    /// Iterative contact-distance adjustment against the configured verifier.
    Adjust {
        traj: PathBuf,
        #[arg(long)]
        object: Option<PathBuf>,
    },
    /// Resize a primitive record for a new object instance.
    Param {
        record: PathBuf,
        #[arg(long)]
        new_object: Option<PathBuf>,
    },
    /// Move a trajectory with the horizontal object displacement.
    Relocate {
        traj: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        new: PathBuf,
    },
    /// retarget -> smooth -> adjust, writing a primitive record.
    Pipeline,
    /// SVG figures and stats for a trajectory or record.
    Plot {
        input: PathBuf,
        /// Reference (e.g. coarse) trajectory for raw-vs-smoothed views.
        #[arg(long)]
        raw: Option<PathBuf>,
    },
    /// Generate a synthetic dataset.
    Gen {
        scenario: String,
        /// Noise standard deviation, meters.
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
    },
    /// Run the configured verifier on a trajectory or record.
    Verify {
        input: PathBuf,
        #[arg(long)]
        object: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> CliResult<PipelineConfig> {
    match &cli.config {
        Some(path) => PipelineConfig::load(path),
        None => Ok(PipelineConfig::default()),
    }
}

fn out_dir(cli: &Cli, cfg: &PipelineConfig) -> PathBuf {
    cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"))
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    if let Command::Gen { scenario, sigma } = &cli.command {
        let scenario: Scenario = scenario.parse()?;
        let seed = cli.seed.unwrap_or(0);
        let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(scenario.name()));
        let ds = scenario::generate(scenario, seed, *sigma)?;
        let written = scenario::write_dataset(&ds, &out)?;
        let summary = serde_json::json!({ "scenario": scenario.name(), "seed": seed, "sigma": sigma });
        return Ok(Report { written, summary });
    }
    let cfg = load_config(cli)?;
    let out = out_dir(cli, &cfg);
    let opt = |p: &Option<PathBuf>| p.as_deref().map(Path::to_path_buf);
    match &cli.command {
        Command::Retarget { hands, scene } => {
            let hands = cfg.input(opt(hands).as_deref(), &cfg.inputs.hands, "hands")?;
            let scene = cfg.input(opt(scene).as_deref(), &cfg.inputs.scene, "scene")?;
            commands::cmd_retarget(&hands, &scene, &cfg, &out)
        }
        Command::Smooth { traj } => commands::cmd_smooth(traj, &cfg, &out),
        Command::Adjust { traj, object } => {
            let object = cfg.input(object.as_deref(), &cfg.inputs.object, "object")?;
            commands::cmd_adjust(traj, &object, &cfg, &out)
        }
        Command::Param { record, new_object } => {
            let new = cfg.input(new_object.as_deref(), &cfg.inputs.new_object, "new_object")?;
            commands::cmd_param(record, &new, &cfg, &out)
        }
        Command::Relocate { traj, base, new } => commands::cmd_relocate(traj, base, new, &out),
        Command::Pipeline => commands::cmd_pipeline(&cfg, &out),
        Command::Plot { input, raw } => plot::cmd_plot(input, raw.as_deref(), &out),
        Command::Verify { input, object } => commands::cmd_verify(input, object.as_deref(), &cfg, cli.out.as_deref()),
        Command::Gen { .. } => unreachable!("handled above"),
    }
}

pub fn print_report(cli: &Cli, report: &Report) {
    let mut stdout = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not an error of the command itself.
    let _ = write_report(&mut stdout, cli.format, report);
}

pub fn write_report(w: &mut impl Write, format: OutputFormat, report: &Report) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
        OutputFormat::Text => {
            for p in &report.written {
                writeln!(w, "wrote {}", p.display())?;
            }
            writeln!(w, "{}", report.summary)
        }
    }
}
