//! Logistic coefficient fields a(t,x), b(t,x) with certified bounds.
//!
//! Coefficients come in three classes: constant, time-periodic (space
//! independent), and space-time (separable or tabulated, periodic in t).
//! Bounds are declared by the user and spot-checked by dense sampling; a
//! mismatch is a hard configuration error since every derived constant
//! downstream trusts the declared infima and suprema.

use crate::error::ModelError;
use crate::numerics::composite_simpson;
use serde::{Deserialize, Serialize};

/// A scalar field on (t, x), either a closed-form built-in or a table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum Sampler {
    Constant {
        value: f64,
    },
    /// offset + amplitude * sin(2*pi*t / period)
    SinPeriodic {
        offset: f64,
        amplitude: f64,
        period: f64,
    },
    /// offset + amplitude * sin(2*pi*x / wavelength)
    SinSpace {
        offset: f64,
        amplitude: f64,
        wavelength: f64,
    },
    /// Product of a time-only factor and a space-only factor.
    Separable {
        time: Box<Sampler>,
        space: Box<Sampler>,
    },
    /// Bilinear interpolation on a rectangular (t, x) grid. Outside the grid
    /// the nearest edge value is used in x; t clamps to the table range
    /// (periodic fields should tabulate one full period).
    Table {
        t: Vec<f64>,
        x: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

impl Sampler {
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            Sampler::Constant { value } => *value,
            Sampler::SinPeriodic {
                offset,
                amplitude,
                period,
            } => offset + amplitude * (2.0 * std::f64::consts::PI * t / period).sin(),
            Sampler::SinSpace {
                offset,
                amplitude,
                wavelength,
            } => offset + amplitude * (2.0 * std::f64::consts::PI * x / wavelength).sin(),
            Sampler::Separable { time, space } => time.eval(t, x) * space.eval(t, x),
            Sampler::Table { t: ts, x: xs, values } => bilinear(ts, xs, values, t, x),
        }
    }

    pub fn is_time_independent(&self) -> bool {
        match self {
            Sampler::Constant { .. } | Sampler::SinSpace { .. } => true,
            Sampler::SinPeriodic { .. } => false,
            Sampler::Separable { time, space } => {
                time.is_time_independent() && space.is_time_independent()
            }
            Sampler::Table { t, .. } => t.len() <= 1,
        }
    }

    pub fn is_space_independent(&self) -> bool {
        match self {
            Sampler::Constant { .. } | Sampler::SinPeriodic { .. } => true,
            Sampler::SinSpace { .. } => false,
            Sampler::Separable { time, space } => {
                time.is_space_independent() && space.is_space_independent()
            }
            Sampler::Table { x, .. } => x.len() <= 1,
        }
    }

    fn validate(&self, name: &str) -> Result<(), ModelError> {
        match self {
            Sampler::Constant { value } => {
                finite(name, *value)?;
            }
            Sampler::SinPeriodic {
                offset,
                amplitude,
                period,
            } => {
                finite(name, *offset)?;
                finite(name, *amplitude)?;
                if !(*period > 0.0) {
                    return Err(ModelError::InvalidCoefficient(format!(
                        "{name}: sin_periodic period must be > 0, got {period}"
                    )));
                }
            }
            Sampler::SinSpace {
                offset,
                amplitude,
                wavelength,
            } => {
                finite(name, *offset)?;
                finite(name, *amplitude)?;
                if !(*wavelength > 0.0) {
                    return Err(ModelError::InvalidCoefficient(format!(
                        "{name}: sin_space wavelength must be > 0, got {wavelength}"
                    )));
                }
            }
            Sampler::Separable { time, space } => {
                time.validate(name)?;
                space.validate(name)?;
            }
            Sampler::Table { t, x, values } => {
                if t.is_empty() || x.is_empty() {
                    return Err(ModelError::InvalidCoefficient(format!(
                        "{name}: table axes must be nonempty"
                    )));
                }
                if values.len() != t.len() || values.iter().any(|row| row.len() != x.len()) {
                    return Err(ModelError::InvalidCoefficient(format!(
                        "{name}: table shape must be t.len() x x.len()"
                    )));
                }
                if !strictly_increasing(t) || !strictly_increasing(x) {
                    return Err(ModelError::InvalidCoefficient(format!(
                        "{name}: table axes must be strictly increasing"
                    )));
                }
                for row in values {
                    for &v in row {
                        finite(name, v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn finite(name: &str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidCoefficient(format!(
            "{name}: non-finite value {v}"
        )))
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn bilinear(ts: &[f64], xs: &[f64], values: &[Vec<f64>], t: f64, x: f64) -> f64 {
    let (it, wt) = locate(ts, t);
    let (ix, wx) = locate(xs, x);
    let it1 = (it + 1).min(ts.len() - 1);
    let ix1 = (ix + 1).min(xs.len() - 1);
    let v00 = values[it][ix];
    let v01 = values[it][ix1];
    let v10 = values[it1][ix];
    let v11 = values[it1][ix1];
    (1.0 - wt) * ((1.0 - wx) * v00 + wx * v01) + wt * ((1.0 - wx) * v10 + wx * v11)
}

/// Cell index and interpolation weight; clamps to the grid edges.
fn locate(axis: &[f64], v: f64) -> (usize, f64) {
    if axis.len() == 1 || v <= axis[0] {
        return (0, 0.0);
    }
    let last = axis.len() - 1;
    if v >= axis[last] {
        return (last, 0.0);
    }
    let i = axis.partition_point(|&a| a <= v) - 1;
    let w = (v - axis[i]) / (axis[i + 1] - axis[i]);
    (i, w)
}

/// Structural class of a coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Constant,
    TimeOnly,
    SpaceTime,
}

/// The logistic growth/damping pair with declared, verified bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientField {
    pub kind: CoefficientKind,
    pub a: Sampler,
    pub b: Sampler,
    /// Period of the time dependence; ignored for constant fields.
    #[serde(default = "default_period")]
    pub period: f64,
    pub a_inf: f64,
    pub a_sup: f64,
    pub b_inf: f64,
    pub b_sup: f64,
    /// Spatial window used for bounds sampling and interval placement
    /// searches on space-dependent fields.
    #[serde(default = "default_x_window")]
    pub x_window: (f64, f64),
}

fn default_period() -> f64 {
    1.0
}

fn default_x_window() -> (f64, f64) {
    (0.0, 1.0)
}

impl CoefficientField {
    /// Constant coefficients with tight bounds.
    pub fn constant(a0: f64, b0: f64) -> Self {
        CoefficientField {
            kind: CoefficientKind::Constant,
            a: Sampler::Constant { value: a0 },
            b: Sampler::Constant { value: b0 },
            period: 1.0,
            a_inf: a0,
            a_sup: a0,
            b_inf: b0,
            b_sup: b0,
            x_window: (0.0, 1.0),
        }
    }

    /// Time-periodic, space-independent coefficients.
    pub fn time_periodic(a: Sampler, b: Sampler, period: f64, bounds: [f64; 4]) -> Self {
        CoefficientField {
            kind: CoefficientKind::TimeOnly,
            a,
            b,
            period,
            a_inf: bounds[0],
            a_sup: bounds[1],
            b_inf: bounds[2],
            b_sup: bounds[3],
            x_window: (0.0, 1.0),
        }
    }

    /// Fold t into one declared period so tabulated samplers stay periodic
    /// on long horizons; closed-form samplers are unaffected.
    fn fold_t(&self, t: f64) -> f64 {
        match self.kind {
            CoefficientKind::Constant => t,
            _ => t.rem_euclid(self.period),
        }
    }

    pub fn a(&self, t: f64, x: f64) -> f64 {
        self.a.eval(self.fold_t(t), x)
    }

    pub fn b(&self, t: f64, x: f64) -> f64 {
        self.b.eval(self.fold_t(t), x)
    }

    /// Time average of a over one period at `x = x_ref`.
    ///
    /// For space-independent periodic fields this is exact up to quadrature
    /// error, and growth exponents of the linearized dynamics reduce to the
    /// averaged constant-coefficient problem.
    pub fn a_time_mean(&self, x_ref: f64) -> f64 {
        match self.kind {
            CoefficientKind::Constant => self.a(0.0, x_ref),
            _ => {
                composite_simpson(&|t| self.a(t, x_ref), 0.0, self.period, 4096) / self.period
            }
        }
    }

    /// Validate structure, (H0)-style positivity of the declared infima, and
    /// containment of `samples` dense samples within the declared bounds.
    pub fn validate(&self, samples: usize) -> Result<(), ModelError> {
        self.a.validate("a")?;
        self.b.validate("b")?;
        for (name, v) in [
            ("a_inf", self.a_inf),
            ("a_sup", self.a_sup),
            ("b_inf", self.b_inf),
            ("b_sup", self.b_sup),
        ] {
            if !v.is_finite() {
                return Err(ModelError::InvalidParam {
                    name: match name {
                        "a_inf" => "a_inf",
                        "a_sup" => "a_sup",
                        "b_inf" => "b_inf",
                        _ => "b_sup",
                    },
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        if !(self.a_inf > 0.0) {
            return Err(ModelError::InvalidParam {
                name: "a_inf",
                value: self.a_inf,
                reason: "declared infimum of a must be positive",
            });
        }
        if !(self.b_inf > 0.0) {
            return Err(ModelError::InvalidParam {
                name: "b_inf",
                value: self.b_inf,
                reason: "declared infimum of b must be positive",
            });
        }
        if self.a_sup < self.a_inf || self.b_sup < self.b_inf {
            return Err(ModelError::InvalidCoefficient(
                "declared sup must be >= declared inf".into(),
            ));
        }
        if !(self.period > 0.0) {
            return Err(ModelError::InvalidCoefficient(format!(
                "period must be > 0, got {}",
                self.period
            )));
        }
        if !(self.x_window.0 < self.x_window.1) {
            return Err(ModelError::InvalidCoefficient(format!(
                "x_window must be a nonempty interval, got ({}, {})",
                self.x_window.0, self.x_window.1
            )));
        }
        match self.kind {
            CoefficientKind::Constant => {
                if !(self.a.is_time_independent()
                    && self.a.is_space_independent()
                    && self.b.is_time_independent()
                    && self.b.is_space_independent())
                {
                    return Err(ModelError::InvalidCoefficient(
                        "kind = constant requires constant samplers".into(),
                    ));
                }
            }
            CoefficientKind::TimeOnly => {
                if !(self.a.is_space_independent() && self.b.is_space_independent()) {
                    return Err(ModelError::InvalidCoefficient(
                        "kind = time_only requires space-independent samplers".into(),
                    ));
                }
            }
            CoefficientKind::SpaceTime => {}
        }
        self.check_bounds_by_sampling(samples)
    }

    /// Dense-sample a and b over one period times the spatial window and
    /// reject any escape from the declared bounds. Sampling cannot certify an
    /// infimum, but it catches misdeclared configs early and loudly.
    fn check_bounds_by_sampling(&self, samples: usize) -> Result<(), ModelError> {
        let nt = (samples as f64).sqrt().ceil() as usize;
        let nx = nt;
        let (x0, x1) = self.x_window;
        let slack = 1e-9 * (1.0 + self.a_sup.abs().max(self.b_sup.abs()));
        for i in 0..=nt {
            let t = self.period * i as f64 / nt as f64;
            for j in 0..=nx {
                let x = x0 + (x1 - x0) * j as f64 / nx as f64;
                let av = self.a(t, x);
                let bv = self.b(t, x);
                if av < self.a_inf - slack || av > self.a_sup + slack {
                    return Err(ModelError::DeclaredBounds(format!(
                        "a({t:.4}, {x:.4}) = {av} outside [{}, {}]",
                        self.a_inf, self.a_sup
                    )));
                }
                if bv < self.b_inf - slack || bv > self.b_sup + slack {
                    return Err(ModelError::DeclaredBounds(format!(
                        "b({t:.4}, {x:.4}) = {bv} outside [{}, {}]",
                        self.b_inf, self.b_sup
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_field_validates() {
        let c = CoefficientField::constant(1.0, 1.0);
        c.validate(10_000).unwrap();
        assert_eq!(c.a(3.7, 12.0), 1.0);
    }

    #[test]
    fn sinusoid_bounds_are_checked() {
        let mut c = CoefficientField::time_periodic(
            Sampler::SinPeriodic {
                offset: 1.0,
                amplitude: 0.5,
                period: 1.0,
            },
            Sampler::Constant { value: 1.0 },
            1.0,
            [0.5, 1.5, 1.0, 1.0],
        );
        c.validate(10_000).unwrap();
        // Misdeclare the sup and the sampler escapes.
        c.a_sup = 1.2;
        assert!(matches!(
            c.validate(10_000),
            Err(ModelError::DeclaredBounds(_))
        ));
    }

    #[test]
    fn nonpositive_inf_rejected() {
        let mut c = CoefficientField::constant(1.0, 1.0);
        c.a_inf = 0.0;
        assert!(c.validate(100).is_err());
    }

    #[test]
    fn time_mean_of_sinusoid_is_offset() {
        let c = CoefficientField::time_periodic(
            Sampler::SinPeriodic {
                offset: 1.0,
                amplitude: 0.5,
                period: 1.0,
            },
            Sampler::Constant { value: 1.0 },
            1.0,
            [0.5, 1.5, 1.0, 1.0],
        );
        assert_relative_eq!(c.a_time_mean(0.0), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn tabulated_periodic_field_folds_time() {
        let c = CoefficientField {
            kind: CoefficientKind::TimeOnly,
            a: Sampler::Table {
                t: vec![0.0, 0.5, 1.0],
                x: vec![0.0],
                values: vec![vec![1.0], vec![2.0], vec![1.0]],
            },
            b: Sampler::Constant { value: 1.0 },
            period: 1.0,
            a_inf: 1.0,
            a_sup: 2.0,
            b_inf: 1.0,
            b_sup: 1.0,
            x_window: (0.0, 1.0),
        };
        c.validate(1_000).unwrap();
        assert_relative_eq!(c.a(0.25, 0.0), 1.5);
        // Far beyond the tabulated range the field repeats its period.
        assert_relative_eq!(c.a(7.25, 0.0), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn table_interpolates_bilinearly() {
        let s = Sampler::Table {
            t: vec![0.0, 1.0],
            x: vec![0.0, 2.0],
            values: vec![vec![1.0, 3.0], vec![2.0, 4.0]],
        };
        assert_relative_eq!(s.eval(0.5, 1.0), 2.5, epsilon = 1e-14);
        // Clamped beyond the grid edges.
        assert_relative_eq!(s.eval(0.0, 5.0), 3.0, epsilon = 1e-14);
    }
}
