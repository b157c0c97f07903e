use std::path::{Path, PathBuf};

use binomap_core::Error as CoreError;
use serde_json::json;

/// Pipeline stage a core error was raised in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Retarget,
    Smooth,
    Adjust,
    Param,
    Relocate,
    Verify,
    Plot,
    Gen,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Retarget => "retarget",
            Stage::Smooth => "smooth",
            Stage::Adjust => "adjust",
            Stage::Param => "param",
            Stage::Relocate => "relocate",
            Stage::Verify => "verify",
            Stage::Plot => "plot",
            Stage::Gen => "gen",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unknown scenario `{0}` (expected one of pivot-bowl, poke-cup, push-basket, wrap-ball)")]
    UnknownScenario(String),
    #[error("{}: {source}", stage.as_str())]
    Core { stage: Stage, source: CoreError },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, message: impl Into<String>) -> Self {
        CliError::Format { path: path.to_path_buf(), message: message.into() }
    }

    /// 2 for unreadable or malformed input, 3 for violated preconditions,
    /// 4 when the adjustment loop ran out of attempts.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source: CoreError::AllAttemptsFailed(_), .. } => 4,
            CliError::Core { source: CoreError::InvalidConfig(_), .. } => 2,
            CliError::Core { .. } => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Format { .. } => "Format",
            CliError::Config(_) => "Config",
            CliError::UnknownScenario(_) => "UnknownScenario",
            CliError::Core { source, .. } => source.kind(),
        }
    }

    /// Machine-readable report written to stderr on failure.
    pub fn to_json(&self) -> serde_json::Value {
        let (stage, frame_index, arm) = match self {
            CliError::Core { stage, source } => {
                let arm = match source {
                    CoreError::AtFrame { arm, .. } => Some(arm.to_string()),
                    _ => None,
                };
                (Some(stage.as_str()), source.frame_index(), arm)
            }
            _ => (None, None, None),
        };
        let path = match self {
            CliError::Io { path, .. } | CliError::Format { path, .. } => Some(path.display().to_string()),
            _ => None,
        };
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "stage": stage,
            "frame_index": frame_index,
            "arm": arm,
            "path": path,
            "exit_code": self.exit_code(),
        })
    }
}

/// Attaches a stage name to core results.
pub trait AtStage<T> {
    fn at(self, stage: Stage) -> CliResult<T>;
}

impl<T> AtStage<T> for Result<T, CoreError> {
    fn at(self, stage: Stage) -> CliResult<T> {
        self.map_err(|source| CliError::Core { stage, source })
    }
}
