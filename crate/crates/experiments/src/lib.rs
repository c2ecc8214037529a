//! Scenario files, the SNR / energy-split / design sweeps built on
//! `starloc-core`, and CSV or JSON result files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod drivers;
pub mod error;
pub mod records;

pub use config::{load_config, ScenarioConfig};
pub use drivers::{run_design_compare, run_heatmap, run_snr_sweep};
pub use error::{ExperimentError, Result};
pub use records::{read_results, write_results, Cell, Format, SweepRecord, COLUMNS};
