//! Random target sets and the geometry statistics of the exponential-limit hypotheses.

mod conditions;
mod generate;
mod geometry;
mod target_set;

pub use conditions::{
    check_conditions, cloud_constants, ConditionReport, Thresholds, TimeScale, Verdicts,
};
pub use generate::{percolation_cloud, sample_without_replacement, EXPLICIT_MAX_DIM, MAX_SET_SIZE};
pub use geometry::{
    distance_profile, vn_max, volume_stats, StatsMode, VolumeStats, EXACT_STATS_BUDGET,
    EXACT_STATS_MAX_DIM,
};
pub use target_set::{Provenance, TargetSet};
