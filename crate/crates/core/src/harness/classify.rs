//! Finite-time classification of run series into spreading / vanishing /
//! undetermined.
//!
//! Spreading and vanishing are asymptotic notions; the thresholds below
//! operationalize them over a trailing window of the recorded series.
//! Undetermined is a first-class verdict: near the dichotomy boundary a
//! finite horizon genuinely cannot decide.

use crate::frontsolver::{Outcome, RunSeries, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyThresholds {
    /// Fraction of the run forming the trailing decision window.
    #[serde(default = "default_window_fraction")]
    pub window_fraction: f64,
    /// Vanishing requires sup u below this over the window...
    #[serde(default = "default_eps_vanish_sup")]
    pub eps_vanish_sup: f64,
    /// ...and front speed below this.
    #[serde(default = "default_eps_vanish_front")]
    pub eps_vanish_front: f64,
    /// Spreading requires the interior infimum to stay at or above this.
    #[serde(default = "default_delta_spread")]
    pub delta_spread: f64,
    /// Spreading also requires the front to have reached this cap.
    #[serde(default = "default_h_max")]
    pub h_max: f64,
}

fn default_window_fraction() -> f64 {
    0.2
}
fn default_eps_vanish_sup() -> f64 {
    1e-6
}
fn default_eps_vanish_front() -> f64 {
    1e-8
}
fn default_delta_spread() -> f64 {
    1e-3
}
fn default_h_max() -> f64 {
    f64::INFINITY
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        ClassifyThresholds {
            window_fraction: default_window_fraction(),
            eps_vanish_sup: default_eps_vanish_sup(),
            eps_vanish_front: default_eps_vanish_front(),
            delta_spread: default_delta_spread(),
            h_max: default_h_max(),
        }
    }
}

impl ClassifyThresholds {
    /// The two verdicts must be mutually exclusive: a window cannot both stay
    /// below the vanishing sup threshold and above the spreading infimum.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.window_fraction > 0.0 && self.window_fraction <= 1.0) {
            return Err(format!(
                "window_fraction must be in (0, 1], got {}",
                self.window_fraction
            ));
        }
        if !(self.eps_vanish_sup < self.delta_spread) {
            return Err(format!(
                "need eps_vanish_sup < delta_spread for verdict exclusivity, got {} vs {}",
                self.eps_vanish_sup, self.delta_spread
            ));
        }
        if self.eps_vanish_front <= 0.0 || self.eps_vanish_sup <= 0.0 || self.delta_spread <= 0.0 {
            return Err("classification thresholds must be positive".into());
        }
        Ok(())
    }
}

/// Classify a single-front series. Pure in its inputs: identical series,
/// critical length, and thresholds give identical outcomes.
pub fn classify(series: &RunSeries, l_star: f64, thresholds: &ClassifyThresholds) -> Outcome {
    let window = series.trailing_window(thresholds.window_fraction);
    // An empty series never classifies.
    let last = window.last().copied().unwrap_or(crate::frontsolver::Sample {
        t: 0.0,
        h: f64::NAN,
        h_prime: f64::NAN,
        sup_u: f64::NAN,
        inf_u_window: f64::NAN,
        combo_residual: 0.0,
        gradient_residual: 0.0,
        g: 0.0,
        g_prime: 0.0,
    });

    let vanishing = !window.is_empty()
        && window.iter().all(|s| {
            s.sup_u < thresholds.eps_vanish_sup && s.h_prime.abs() < thresholds.eps_vanish_front
        });
    let spreading = !window.is_empty()
        && last.h >= thresholds.h_max
        && window.iter().all(|s| s.inf_u_window >= thresholds.delta_spread);

    let verdict = if vanishing {
        Verdict::Vanishing
    } else if spreading {
        Verdict::Spreading
    } else {
        Verdict::Undetermined
    };
    Outcome {
        verdict,
        h_infinity_estimate: match verdict {
            Verdict::Spreading => f64::INFINITY,
            _ => last.h,
        },
        final_sup_u: last.sup_u,
        l_star,
    }
}

/// Classify a double-front series; both fronts must stall (vanishing) or both
/// reach the cap (spreading).
pub fn classify_double(
    series: &RunSeries,
    l_star_star: f64,
    thresholds: &ClassifyThresholds,
) -> Outcome {
    let window = series.trailing_window(thresholds.window_fraction);
    let last = match window.last() {
        Some(s) => *s,
        None => {
            return Outcome {
                verdict: Verdict::Undetermined,
                h_infinity_estimate: f64::NAN,
                final_sup_u: f64::NAN,
                l_star: l_star_star,
            }
        }
    };

    let vanishing = window.iter().all(|s| {
        s.sup_u < thresholds.eps_vanish_sup
            && s.h_prime.abs() < thresholds.eps_vanish_front
            && s.g_prime.abs() < thresholds.eps_vanish_front
    });
    let spreading = last.h >= thresholds.h_max
        && -last.g >= thresholds.h_max
        && window.iter().all(|s| s.inf_u_window >= thresholds.delta_spread);

    let verdict = if vanishing {
        Verdict::Vanishing
    } else if spreading {
        Verdict::Spreading
    } else {
        Verdict::Undetermined
    };
    Outcome {
        verdict,
        // For double fronts the estimate tracks the final width.
        h_infinity_estimate: match verdict {
            Verdict::Spreading => f64::INFINITY,
            _ => last.h - last.g,
        },
        final_sup_u: last.sup_u,
        l_star: l_star_star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontsolver::Sample;

    fn series_from(rows: Vec<(f64, f64, f64, f64, f64)>) -> RunSeries {
        let mut s = RunSeries::new("test", false);
        for (t, h, h_prime, sup_u, inf_u) in rows {
            s.samples.push(Sample {
                t,
                h,
                h_prime,
                sup_u,
                inf_u_window: inf_u,
                combo_residual: 0.0,
                gradient_residual: 0.0,
                g: 0.0,
                g_prime: 0.0,
            });
        }
        s
    }

    #[test]
    fn decayed_series_classifies_vanishing() {
        let rows = (0..100)
            .map(|k| {
                let t = k as f64;
                (t, 1.2, 1e-12, 1e-9, 0.0)
            })
            .collect();
        let out = classify(&series_from(rows), std::f64::consts::FRAC_PI_2, &ClassifyThresholds::default());
        assert_eq!(out.verdict, Verdict::Vanishing);
        assert!(out.h_infinity_estimate <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn capped_series_classifies_spreading() {
        let thresholds = ClassifyThresholds {
            h_max: 20.0,
            ..Default::default()
        };
        let rows = (0..100)
            .map(|k| {
                let t = k as f64;
                (t, 1.0 + 0.2 * t, 0.2, 1.0, 0.9)
            })
            .collect();
        let out = classify(&series_from(rows), std::f64::consts::FRAC_PI_2, &thresholds);
        assert_eq!(out.verdict, Verdict::Spreading);
        assert!(out.h_infinity_estimate.is_infinite());
    }

    #[test]
    fn short_series_stays_undetermined() {
        let rows = vec![(0.0, 1.0, 0.1, 0.5, 0.2), (1.0, 1.1, 0.1, 0.5, 0.2)];
        let out = classify(&series_from(rows), std::f64::consts::FRAC_PI_2, &ClassifyThresholds::default());
        assert_eq!(out.verdict, Verdict::Undetermined);
    }

    #[test]
    fn thresholds_enforce_exclusivity() {
        let bad = ClassifyThresholds {
            eps_vanish_sup: 1e-2,
            delta_spread: 1e-3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(ClassifyThresholds::default().validate().is_ok());
    }
}
