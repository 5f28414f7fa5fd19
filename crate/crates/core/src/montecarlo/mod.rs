//! Monte Carlo layer: samplers, replicated experiments, summaries and diagnostics.

pub mod diagnostics;
pub mod experiment;
pub mod rng;
pub mod sampling;
pub mod stats;

pub use diagnostics::{
    efron_stein_diagnostic, floating_containment_rate, missed_volume_path, visible_increment, ContainmentRate,
    EfronSteinReport, DEFAULT_CONTAINMENT_C,
};
pub use experiment::{
    run_experiment, run_circumscribed_experiment, run_inscribed_experiment, sample_circumscribed, CircumscribedSample,
    EstimatorSummary, Model, SimulationConfig, Statistic, DEFAULT_U1_SAMPLES,
};
pub use rng::{replication_rng, stream_id};
pub use sampling::{sample_uniform, sample_uniform_chart, UniformSampler};
pub use stats::{fit_scaling, moments, Moments, ScalingFit};
