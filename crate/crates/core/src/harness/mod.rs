//! Run orchestration: configuration, classification, experiments, sweeps,
//! and file outputs.

pub mod classify;
pub mod config;
pub mod experiment;
pub mod output;
pub mod runner;
pub mod sweep;

pub use classify::{classify, classify_double, ClassifyThresholds};
pub use config::{Geometry, RunConfig, SweepAxis, SweepConfig};
pub use runner::{execute_run, RunArtifacts};
