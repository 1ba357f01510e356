//! Experiment harness: configuration, deterministic substreams, the
//! realization loop, and CSV output.

pub mod config;
pub mod csv;
pub mod rng;
pub mod runner;

pub use config::{ExperimentConfig, Preset};
pub use csv::{emit_csv, format_csv, parse_csv};
pub use runner::{
    plan, run_experiment, run_experiment_with_threads, run_realization, AggregateRow,
    ExperimentPlan, RealizationOutput, SchemeKind, SchemeMetrics,
};
pub use rng::substream;
