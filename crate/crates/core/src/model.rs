//! Model constants, standing hypotheses, and derived bounds.
//!
//! The coupled system tracks a population density u with an attractant
//! potential v1 (sensitivity chi1) and a repellent potential v2 (sensitivity
//! chi2), both relaxing instantaneously:
//!
//! ```text
//! u_t = u_xx - chi1 (u v1_x)_x + chi2 (u v2_x)_x + u (a - b u)
//! 0   = v1_xx - lambda1 v1 + mu1 u
//! 0   = v2_xx - lambda2 v2 + mu2 u
//! ```
//!
//! Everything here is algebra on the constants: the combination coefficient
//! that dominates `chi2 lambda2 v2 - chi1 lambda1 v1`, the gradient
//! coefficient that dominates `d/dx (chi2 v2 - chi1 v1)`, the density ceiling
//! the dynamics cannot exceed for long, and the persistence floor interior
//! densities settle above when the damping is strong enough.

use crate::coeff::CoefficientField;
use crate::error::ModelError;
use serde::{Deserialize, Serialize};

/// Chemotaxis sensitivities, potential decay/production rates, and the
/// Stefan coefficient tying front speed to the boundary flux.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub chi1: f64,
    pub chi2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub nu: f64,
}

impl ModelParams {
    /// No chemotaxis; the system degenerates to logistic diffusion with a
    /// Stefan front.
    pub fn no_chemotaxis(nu: f64) -> Self {
        ModelParams {
            chi1: 0.0,
            chi2: 0.0,
            lambda1: 1.0,
            lambda2: 1.0,
            mu1: 1.0,
            mu2: 1.0,
            nu,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let nonneg = [
            ("chi1", self.chi1),
            ("chi2", self.chi2),
            ("mu1", self.mu1),
            ("mu2", self.mu2),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::InvalidParam {
                    name,
                    value: v,
                    reason: "must be finite and >= 0",
                });
            }
        }
        let positive = [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("nu", self.nu),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(ModelError::InvalidParam {
                    name,
                    value: v,
                    reason: "must be finite and > 0",
                });
            }
        }
        Ok(())
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Coefficient dominating the potential combination: for nonnegative sources,
/// `chi2 lambda2 v2 - chi1 lambda1 v1 <= combo_coefficient * sup(u)`.
///
/// Minimum of two routes through the heat-kernel representation of the
/// potentials, one discounted by each decay rate. Always in
/// `[0, chi2 * mu2]`.
pub fn combo_coefficient(p: &ModelParams) -> f64 {
    let c1 = p.chi1 * p.mu1 * p.lambda1;
    let c2 = p.chi2 * p.mu2 * p.lambda2;
    let via2 = (pos(c2 - c1) + p.chi1 * p.mu1 * pos(p.lambda1 - p.lambda2)) / p.lambda2;
    let via1 = (pos(c2 - c1) + p.chi2 * p.mu2 * pos(p.lambda1 - p.lambda2)) / p.lambda1;
    via2.min(via1)
}

/// Two-sided variant of [`combo_coefficient`]: dominates
/// `|chi1 lambda1 v1 - chi2 lambda2 v2|` by a multiple of `sup(u)`.
pub fn combo_coefficient_abs(p: &ModelParams) -> f64 {
    let c1 = p.chi1 * p.mu1 * p.lambda1;
    let c2 = p.chi2 * p.mu2 * p.lambda2;
    let dl = (p.lambda1 - p.lambda2).abs();
    let via2 = ((c1 - c2).abs() + p.chi1 * p.mu1 * dl) / p.lambda2;
    let via1 = ((c1 - c2).abs() + p.chi2 * p.mu2 * dl) / p.lambda1;
    via2.min(via1)
}

/// Coefficient dominating the drift gradient: for nonnegative sources,
/// `sup |d/dx (chi2 v2 - chi1 v1)| <= gradient_coefficient * sup(u)`.
pub fn gradient_coefficient(p: &ModelParams) -> f64 {
    let s1 = p.lambda1.sqrt();
    let s2 = p.lambda2.sqrt();
    let d = (p.chi2 * p.mu2 - p.chi1 * p.mu1).abs();
    let via2 = d / (2.0 * s2) + p.chi1 * p.mu1 * (s1 - s2).abs() / (2.0 * s1 * s2);
    let via1 = d / (2.0 * s1) + p.chi2 * p.mu2 * (s2 - s1).abs() / (2.0 * s1 * s2);
    via2.min(via1)
}

/// Effective damping margin `b_inf + chi2 mu2 - chi1 mu1 - combo`; positive
/// exactly when the weak damping hypothesis holds.
pub fn damping_margin(p: &ModelParams, c: &CoefficientField) -> f64 {
    c.b_inf + p.chi2 * p.mu2 - p.chi1 * p.mu1 - combo_coefficient(p)
}

/// Density ceiling: solutions never exceed `max(sup u0, ceiling)` and settle
/// below the ceiling eventually. Requires the weak damping hypothesis.
pub fn density_ceiling(p: &ModelParams, c: &CoefficientField) -> Result<f64, ModelError> {
    let denom = damping_margin(p, c);
    if denom <= 0.0 {
        return Err(ModelError::DampingHypothesis { margin: denom });
    }
    Ok(c.a_sup / denom)
}

/// Persistence floor: interior densities of globally spread states settle
/// above this value; positive exactly when the strict damping hypothesis
/// holds. Requires the weak damping hypothesis.
pub fn persistence_floor(p: &ModelParams, c: &CoefficientField) -> Result<f64, ModelError> {
    let m = combo_coefficient(p);
    let weak = damping_margin(p, c);
    if weak <= 0.0 {
        return Err(ModelError::DampingHypothesis { margin: weak });
    }
    let chi_net = p.chi1 * p.mu1 - p.chi2 * p.mu2;
    let strict = c.b_inf - (1.0 + c.a_sup / c.a_inf) * p.chi1 * p.mu1 + p.chi2 * p.mu2 - m;
    Ok(c.a_inf * strict / ((c.b_inf - chi_net - m) * (c.b_sup - chi_net)))
}

/// Evaluation of the three standing damping hypotheses with margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Combination coefficient (see [`combo_coefficient`]).
    pub combo: f64,
    /// Two-sided combination coefficient (see [`combo_coefficient_abs`]).
    pub combo_abs: f64,
    /// Density ceiling; `None` when the weak hypothesis fails.
    pub ceiling: Option<f64>,
    /// Persistence floor; `None` when the weak hypothesis fails, and may be
    /// nonpositive when the strict hypothesis fails.
    pub floor: Option<f64>,
    /// Weak damping: enough for global existence and the ceiling.
    pub global_existence: bool,
    /// Strict damping: additionally yields a positive persistence floor.
    pub persistence: bool,
    /// Two-sided damping: the regime with a unique positive entire state.
    pub uniqueness: bool,
    /// `b_inf` minus the right-hand side of each strict inequality.
    pub margin_global: f64,
    pub margin_persistence: f64,
    pub margin_uniqueness: f64,
}

/// Evaluate the three strict damping inequalities exactly as stated, with
/// zero tolerance; the margins make borderline configurations visible.
pub fn check_hypotheses(p: &ModelParams, c: &CoefficientField) -> HypothesisReport {
    let m = combo_coefficient(p);
    let k = combo_coefficient_abs(p);
    let chi_net = p.chi1 * p.mu1 - p.chi2 * p.mu2;
    let margin_global = c.b_inf - (chi_net + m);
    let margin_persistence =
        c.b_inf - ((1.0 + c.a_sup / c.a_inf) * p.chi1 * p.mu1 - p.chi2 * p.mu2 + m);
    let margin_uniqueness = c.b_inf - (chi_net + k);
    let global_existence = margin_global > 0.0;
    HypothesisReport {
        combo: m,
        combo_abs: k,
        ceiling: density_ceiling(p, c).ok(),
        floor: persistence_floor(p, c).ok(),
        global_existence,
        persistence: margin_persistence > 0.0,
        uniqueness: margin_uniqueness > 0.0,
        margin_global,
        margin_persistence,
        margin_uniqueness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(chi1: f64, chi2: f64, l1: f64, l2: f64, mu1: f64, mu2: f64) -> ModelParams {
        ModelParams {
            chi1,
            chi2,
            lambda1: l1,
            lambda2: l2,
            mu1,
            mu2,
            nu: 1.0,
        }
    }

    #[test]
    fn combo_coefficient_known_values() {
        // Pure attraction with matched decay rates: the positive parts vanish.
        assert_eq!(combo_coefficient(&params(2.0, 0.0, 1.0, 1.0, 3.0, 0.0)), 0.0);
        // Pure repulsion: the coefficient saturates at chi2*mu2.
        assert_eq!(combo_coefficient(&params(0.0, 2.0, 1.0, 1.0, 0.0, 3.0)), 6.0);
        // Balanced sensitivities cancel termwise.
        assert_eq!(combo_coefficient(&params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)), 0.0);
    }

    #[test]
    fn combo_coefficient_abs_known_values() {
        assert_eq!(
            combo_coefficient_abs(&params(2.0, 0.0, 1.0, 1.0, 3.0, 0.0)),
            6.0
        );
        assert_eq!(
            combo_coefficient_abs(&params(0.0, 2.0, 1.0, 1.0, 0.0, 3.0)),
            6.0
        );
        assert_eq!(
            combo_coefficient_abs(&params(0.0, 0.0, 1.0, 1.0, 1.0, 1.0)),
            0.0
        );
    }

    #[test]
    fn ceiling_known_values() {
        let c = CoefficientField::constant(1.0, 1.0);
        let p0 = ModelParams::no_chemotaxis(1.0);
        assert_relative_eq!(density_ceiling(&p0, &c).unwrap(), 1.0);

        let c2 = CoefficientField::constant(2.0, 1.0);
        assert_relative_eq!(density_ceiling(&p0, &c2).unwrap(), 2.0);

        // Pure repulsion with matched rates: combo = chi2*mu2 cancels.
        let p = params(0.0, 1.0, 1.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(density_ceiling(&p, &c).unwrap(), 1.0);
    }

    #[test]
    fn floor_known_values() {
        let c = CoefficientField::constant(1.0, 1.0);
        let p0 = ModelParams::no_chemotaxis(1.0);
        assert_relative_eq!(persistence_floor(&p0, &c).unwrap(), 1.0);

        let c2 = CoefficientField::constant(2.0, 1.0);
        assert_relative_eq!(persistence_floor(&p0, &c2).unwrap(), 2.0);

        // Pure repulsion with matched rates: combo = chi2*mu2 = 1 cancels in
        // the numerator and first denominator factor but not in the second,
        // which keeps the bare chi2*mu2 term: floor = 1/(1*(1+1)) = 1/2.
        let p = params(0.0, 1.0, 1.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(persistence_floor(&p, &c).unwrap(), 0.5);
    }

    #[test]
    fn hypothesis_report_known_cases() {
        let c = CoefficientField::constant(1.0, 1.0);
        let p0 = ModelParams::no_chemotaxis(1.0);
        let r = check_hypotheses(&p0, &c);
        assert!(r.global_existence && r.persistence && r.uniqueness);

        // Attraction-only at damping 1.5: weak holds (1.5 > 1), two-sided
        // fails (1.5 < 2).
        let c15 = CoefficientField::constant(1.0, 1.5);
        let p = params(1.0, 0.0, 1.0, 1.0, 1.0, 0.0);
        let r = check_hypotheses(&p, &c15);
        assert!(r.global_existence);
        assert!(!r.uniqueness);
        assert!(!r.persistence);

        let cweak = CoefficientField::constant(1.0, 0.5);
        let r = check_hypotheses(&p, &cweak);
        assert!(!r.global_existence);
        assert!(r.ceiling.is_none());
    }

    #[test]
    fn ceiling_errors_without_weak_damping() {
        let p = params(1.0, 0.0, 1.0, 1.0, 1.0, 0.0);
        let c = CoefficientField::constant(1.0, 0.5);
        assert!(matches!(
            density_ceiling(&p, &c),
            Err(ModelError::DampingHypothesis { .. })
        ));
    }

    fn arb_params() -> impl Strategy<Value = ModelParams> {
        (
            0.0..4.0f64,
            0.0..4.0f64,
            0.1..5.0f64,
            0.1..5.0f64,
            0.0..4.0f64,
            0.0..4.0f64,
        )
            .prop_map(|(chi1, chi2, l1, l2, mu1, mu2)| params(chi1, chi2, l1, l2, mu1, mu2))
    }

    proptest! {
        #[test]
        fn combo_dominated_by_repulsion_strength(p in arb_params()) {
            prop_assert!(combo_coefficient(&p) <= p.chi2 * p.mu2 + 1e-12);
        }

        #[test]
        fn combo_below_two_sided(p in arb_params()) {
            prop_assert!(combo_coefficient(&p) <= combo_coefficient_abs(&p) + 1e-12);
        }

        #[test]
        fn combo_homogeneous_in_sensitivities(p in arb_params(), s in 0.1..10.0f64) {
            let mut q = p;
            q.chi1 *= s;
            q.chi2 *= s;
            let m = combo_coefficient(&p);
            let k = combo_coefficient_abs(&p);
            prop_assert!((combo_coefficient(&q) - s * m).abs() <= 1e-10 * (1.0 + s * m));
            prop_assert!((combo_coefficient_abs(&q) - s * k).abs() <= 1e-10 * (1.0 + s * k));
        }

        #[test]
        fn strict_damping_implies_weak_and_positive_floor(
            p in arb_params(),
            b in 0.05..8.0f64,
            a_spread in 1.0..3.0f64,
        ) {
            let mut c = CoefficientField::constant(1.0, b);
            c.a_sup = a_spread;
            let r = check_hypotheses(&p, &c);
            if r.persistence {
                prop_assert!(r.global_existence);
                prop_assert!(r.floor.unwrap() > 0.0);
            }
        }
    }
}
