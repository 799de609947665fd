//! Monte Carlo oracle: skeleton simulation of the process, killed on
//! leaving an interval or reflected in its infimum, and comparison of
//! the resulting estimates with analytic densities.

mod estimate;
mod io;
mod sampler;
mod simulate;

pub use estimate::{
    cell_averages, compare, empirical_cdf, estimate_density, estimate_mean, ks_distance,
    ks_distance_on_grid, quantile_grid, CompareThresholds, DiscrepancyReport, McEstimate,
};
pub use io::{read_records, write_occupation, write_records};
pub use sampler::{sample_stable, StableSampler};
pub use simulate::{
    path_rng, reflect, simulate_exit, simulate_passage_below, simulate_reflected, ExitRecord,
    HistogramSpec, McConfig, PassageRecord, Skeleton, DEFAULT_BUDGET, DEFAULT_MAX_STEPS,
    DEFAULT_PATHS, DEFAULT_STEP,
};
