//! Error types shared across the crate.

use thiserror::Error;

/// Errors from model parameter and coefficient validation.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The weak damping condition fails: the effective logistic damping
    /// `b_inf + chi2*mu2 - chi1*mu1 - combo_coeff` is not positive, so the
    /// density ceiling and persistence floor are undefined.
    #[error("damping hypothesis violated: b_inf + chi2*mu2 - chi1*mu1 - combo = {margin} <= 0")]
    DampingHypothesis { margin: f64 },

    /// A sampled coefficient value escaped its declared bounds.
    #[error("declared coefficient bounds violated: {0}")]
    DeclaredBounds(String),

    #[error("coefficient field invalid: {0}")]
    InvalidCoefficient(String),
}

/// Errors from eigenvalue and growth-exponent computations.
#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("invalid boundary specification: {0}")]
    InvalidBoundary(String),

    #[error("eigenvalue iteration failed to converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("exponent evolution overflowed or produced non-finite values at t = {t}")]
    Overflow { t: f64 },

    #[error("root bracketing failed for {what}: no sign change on [{lo}, {hi}]")]
    BracketFailure { what: &'static str, lo: f64, hi: f64 },

    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors raised while evolving a state in time or solving the potentials.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("non-finite value encountered at t = {t} ({context})")]
    NonFinite { t: f64, context: &'static str },

    #[error("negativity beyond clamp at t = {t}: min u = {min:.3e} at node {node}")]
    Negativity { t: f64, min: f64, node: usize },

    #[error("front collapse at t = {t}: front velocity {velocity:.3e} < 0 beyond tolerance")]
    FrontCollapse { t: f64, velocity: f64 },

    #[error("fronts crossed at t = {t}: left {left} >= right {right}")]
    FrontsCrossed { t: f64, left: f64, right: f64 },

    #[error("initial profile incompatible: {0}")]
    Compatibility(String),

    #[error("runtime bound violated at t = {t}: {what} = {value:.6e} exceeds {limit:.6e}")]
    BoundViolation {
        t: f64,
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("blow-up guard tripped at t = {t}: sup u = {sup_u:.3e}")]
    BlowUp { t: f64, sup_u: f64 },

    #[error("quadrature budget exceeded ({evaluations} evaluations)")]
    QuadratureBudget { evaluations: usize },

    #[error("fixed-point iteration failed to converge after {iterations} iterations (gap {gap:.3e})")]
    FixedPointDiverged { iterations: usize, gap: f64 },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Errors from configuration parsing and validation.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config invalid: {0}")]
    Validation(String),

    #[error("override path `{0}` does not match any config field")]
    OverridePath(String),

    #[error("sweep axis path `{0}` does not match any config field")]
    AxisPath(String),

    #[error(transparent)]
    Model(#[from] ModelError),
}
