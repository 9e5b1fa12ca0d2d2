//! Library half of the `riesz` command-line tool: randomized verification
//! suites for the isomorphism identities, manufactured-solution convergence
//! runs, and pressure solves over field files. The binary in `main.rs` is a
//! thin argument-parsing shell over these functions, so integration tests
//! and the acceptance suite can drive everything in-process.

pub mod checkiso;
pub mod mms_run;
pub mod pressure_run;
pub mod report;
pub mod sampling;

pub use checkiso::{run_check_iso, CheckIsoConfig};
pub use mms_run::{run_mms, MmsConfig};
pub use pressure_run::{run_pressure, PressureConfig, PressureOutcome};
pub use report::{CheckRecord, Report};

/// Errors from command execution, split by exit-code class: usage and I/O
/// problems exit with 2, failed mathematical checks with 1.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, unreadable input, malformed files, unwritable
    /// report paths.
    Usage(String),
    /// A numerical routine failed outright (distinct from a check that ran
    /// and reported a violation).
    Math(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Math(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pressure_field::Error> for CliError {
    fn from(e: pressure_field::Error) -> Self {
        match e {
            pressure_field::Error::CgDidNotConverge { .. } => CliError::Math(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
