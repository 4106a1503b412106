//! Numerical laboratory for a 1D attraction-repulsion chemotaxis system with
//! logistic growth and Stefan-type moving fronts.
//!
//! The crate simulates the coupled parabolic-elliptic system on a domain
//! whose endpoint(s) move by a Stefan law, computes the critical domain
//! lengths at which the linearized growth exponent changes sign, and
//! classifies long runs as spreading or vanishing. Fixed-domain companions
//! (half-line truncation, single-species equations with drift, the logistic
//! ODE) provide the comparison dynamics the classification is checked
//! against.
//!
//! Validation code prefers `!(v > 0.0)` over `v <= 0.0` so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeff;
pub mod doublefront;
pub mod elliptic;
pub mod error;
pub mod fixeddomain;
pub mod frontsolver;
pub mod harness;
mod imex;
pub mod model;
pub mod numerics;
pub mod profile;
pub mod spectrum;

pub use coeff::{CoefficientField, CoefficientKind, Sampler};
pub use error::{ConfigError, ModelError, SolverError, SpectrumError};
pub use model::{HypothesisReport, ModelParams};
