//! Config-driven experiment runner for driven spin-lattice simulations.
//!
//! Each run type produces a CSV table (or a circuit listing) headed by a
//! version comment line. Rows are sorted canonically, so output depends
//! only on the config and seed.

pub mod config;
mod runs;

use floquet_kick::Error;

pub use config::Config;
pub use runs::{
    render_coeffs, render_error_scan, render_sweep, render_timeseries, run_coeffs, run_compile, run_error_scan,
    run_sweep, run_timeseries, CoefficientCsvRow, CompileOutput, ErrorScanRow, SweepRow, TimeseriesRow,
};

/// First line of every output file.
pub const HEADER: &str = concat!("# floquet-kick-sim v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("{0}")]
    Runtime(String),
}

impl RunError {
    /// Process exit code: 2 for config errors, 3 for capacity errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Capacity(_) => 3,
            RunError::Runtime(_) => 1,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity(m) => RunError::Capacity(m),
            Error::NonConvergence(_) | Error::Io(_) => RunError::Runtime(e.to_string()),
            other => RunError::Config(other.to_string()),
        }
    }
}

/// Renders rows as CSV under the version header.
pub fn to_csv<R: serde::Serialize>(columns: &[&str], rows: &[R]) -> Result<String, RunError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(columns).map_err(|e| RunError::Runtime(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| RunError::Runtime(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| RunError::Runtime(e.to_string()))?;
    Ok(format!("{HEADER}\n{}", String::from_utf8(body).expect("csv output is UTF-8")))
}
