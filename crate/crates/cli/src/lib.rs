//! Command-line front end: configuration files, subcommands and the CSV/JSON
//! output formats.
//!
//! Exit codes: 0 on success, 1 for invalid input (arguments, configuration,
//! model validation), 2 when a computation fails numerically. Failures are
//! reported as a JSON object on stderr.

pub mod commands;
pub mod config;
pub mod output;

use pt_liouville::Error;
use serde_json::{json, Value};

pub use commands::{run, run_command};
pub use config::{config_from_value, parse_config, ModelConfig, ModelKind};
pub use output::{format_spectrum_csv, read_spectrum_csv, write_spectrum_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            CliError::Core(
                Error::Singular
                    | Error::ConvergenceFailure { .. }
                    | Error::NoZeroMode { .. }
                    | Error::DegenerateAtEvaluationPoint { .. }
                    | Error::DegenerateSpectrumSpan
                    | Error::BracketInvalid(_)
            )
        )
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_numerical() {
            2
        } else {
            1
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Schema { .. } => "schema",
            CliError::Io(_) => "io",
            CliError::Unsupported(_) => "unsupported",
            CliError::Core(_) if self.is_numerical() => "numerical",
            CliError::Core(_) => "validation",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> Value {
        let mut err = json!({
            "kind": self.kind(),
            "message": self.to_string(),
        });
        if let CliError::Schema { path, .. } = self {
            err["path"] = json!(path);
        }
        json!({ "error": err, "exit_code": self.exit_code() })
    }
}
