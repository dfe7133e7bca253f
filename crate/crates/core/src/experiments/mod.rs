//! Monte Carlo sweeps comparing OFDMA with the TDMA benchmarks.
//!
//! A sweep walks a grid of (user count, blockage density, axis value)
//! points and averages the per-drop minimum rate of every scheme. Drop `i`
//! always draws from the same seeded streams, so curves along an axis use
//! common random numbers.

mod config;
mod output;
mod sweep;

pub use config::{ExperimentConfig, SweepAxis, SweepPoint};
pub use output::{emit_csv, emit_json, write_csv, CSV_HEADER};
pub use sweep::{run_drop, run_point, run_sweep, trace_drop, DropRates, DropTrace, GridSummary, Scheme, SweepResult, SweepRow};
