//! Experiment orchestration: configuration files, AWGN and fiber sweeps,
//! shaper comparisons and file-level shaping.

mod compare;
mod config;
mod files;
mod link;
mod scheme;
mod sweep;

pub use compare::{compare_shapers, write_comparison, ComparisonRow, COMPARISON_HEADER};
pub use config::{parse_list, ChannelKind, ExperimentConfig, Scheme};
pub use files::{deshape_file, shape_file};
pub use link::{fast_len, guard_symbols, simulate_fiber_point};
pub use scheme::{pair_complex, Measurement, SchemeSetup};
pub use sweep::{
    derive_seed, grid, run_point, run_sweep, simulate_awgn_point, snr_at_air, worker_budget, GridPoint, WORKERS_ENV,
};
