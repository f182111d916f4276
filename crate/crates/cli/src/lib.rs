//! Reproducible runs of the cosphere reduction pipeline: lattice emission,
//! stratification reports, zero-level sampling checks, Reeb flow export and
//! a one-shot check of the two builtin examples.
//!
//! Every command is a plain function over a [`RunConfig`] so the binary and
//! the test suites drive the same code.

pub mod config;
pub mod examples;
pub mod flow;
pub mod reduce;
pub mod verify;

use std::io;
use std::path::{Path, PathBuf};

pub use config::{parse_planes, RunConfig, Source};
pub use examples::{cmd_examples, ExamplesReport};
pub use flow::{cmd_flow, run_flow, FlowMethodArg, FlowSummary};
pub use reduce::{
    cmd_lattice, cmd_reduce, render_lattice, strata_report, LatticeDots, StrataReport,
};
pub use verify::{cmd_verify, run_verification, PatternReport, VerificationReport};

/// Exit status contract of the binary.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] cosphere::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Input(_) | CliError::Core(_) => EXIT_INVALID,
            CliError::Io { .. } | CliError::Csv(_) => EXIT_IO,
        }
    }

    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
