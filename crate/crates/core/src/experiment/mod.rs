//! Sweeps, half-saturation search, scaling fits and figure datasets.

mod distinguish;
mod figures;
mod output;
mod records;
mod scaling;
mod sweep;

pub use distinguish::{distinguish_p, DistinguishRow, DEFAULT_MULTIPLES, P_WINDOW};
pub use figures::{distinguish_table, figure_dataset, FigureDataset, FigureId, FigureParams, FIG4_LADDER, FIG5_NS};
pub use output::{write_dataset, OutputFormat, Table};
pub use records::{derive_seed, PointFailure, RunManifest, SweepOutcome, SweepRecord, TruncationRecord};
pub use scaling::{
    bisect_half_saturation, fit_power_law, half_saturation, scaling_exponent, HalfSaturation, ScalingFit, DEFAULT_TARGET, DEFAULT_TOL,
    MIN_LOG10_SPAN,
};
pub use sweep::{epsilon_point, log_grid, log_grid_per_decade, sweep_epsilon, witness_point, witness_sweep, SweepConfig};
