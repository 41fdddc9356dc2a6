//! Command-line plumbing around `opo_core`: configuration, frequency sweeps,
//! CSV/SVG output, figure reproduction and the validation report.

pub mod config;
pub mod emit;
pub mod error;
pub mod figure;
pub mod report;
pub mod sweep;

pub use config::{parse_config, Format, Overrides, RunConfig};
pub use error::{CliError, Result};
pub use sweep::{run_sweep, run_sweep_with, Parallelism, SweepRow, CSV_HEADER};
