//! Initial-profile descriptors on the reference interval y in [0, 1].

use serde::{Deserialize, Serialize};

/// Built-in initial profiles, sampled on the straightened grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Profile {
    /// amplitude * cos(pi y / 2): flat at y = 0, zero at y = 1.
    CosHalf { amplitude: f64 },
    /// amplitude * sin(pi y): zero at both ends (double-front data).
    SinPi { amplitude: f64 },
    /// Smooth bump amplitude * exp(1 - 1/(1 - y²)) vanishing at y = 1 with
    /// all derivatives; flat at y = 0.
    Bump { amplitude: f64 },
    /// Constant value (half-line and fixed-domain data).
    Constant { value: f64 },
    Zero,
    /// Piecewise-linear table on y in [0, 1].
    Table { y: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn sample(&self, y: f64) -> f64 {
        match self {
            Profile::CosHalf { amplitude } => {
                amplitude * (std::f64::consts::FRAC_PI_2 * y).cos()
            }
            Profile::SinPi { amplitude } => amplitude * (std::f64::consts::PI * y).sin(),
            Profile::Bump { amplitude } => {
                if y >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - y * y)).exp()
                }
            }
            Profile::Constant { value } => *value,
            Profile::Zero => 0.0,
            Profile::Table { y: ys, values } => interp_linear(ys, values, y),
        }
    }

    /// Sample onto an (n+1)-node grid over [0, 1].
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|i| self.sample(i as f64 / n as f64)).collect()
    }
}

fn interp_linear(ys: &[f64], values: &[f64], y: f64) -> f64 {
    if ys.is_empty() {
        return 0.0;
    }
    if y <= ys[0] {
        return values[0];
    }
    let last = ys.len() - 1;
    if y >= ys[last] {
        return values[last];
    }
    let i = ys.partition_point(|&a| a <= y) - 1;
    let w = (y - ys[i]) / (ys[i + 1] - ys[i]);
    values[i] * (1.0 - w) + values[i + 1] * w
}
