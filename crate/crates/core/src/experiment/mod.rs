//! Seeded Monte-Carlo sweep over bandwidths, its reports and the CLI.
//!
//! For every realization `h^(i)` and bandwidth `W = 1/T` the sweep filters
//! `h^(i)` to `W`, draws an offset `ε ~ U[0, T/M)`, acquires the best
//! coarse offset at each of the `M` phases `ε + mT/M` and records the
//! relative spread `P^(i) = 1 - min g / max g`. Per bandwidth it reports
//! the worst case `P_T = max_i P^(i)` and the mean `P̄_T`.

pub mod cli;
mod config;
mod report;
mod sweep;

pub use config::{parse_bandwidths, ChannelSource, SweepConfig, TABLE_BANDWIDTHS};
pub use report::{aggregate_csv, aggregate_path, emit_report, realization_csv, summary_table};
pub use sweep::{
    draw_unit, run_sweep, run_sweep_on, BandwidthRow, PenaltyReport, RealizationResult,
};
