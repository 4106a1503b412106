//! Shared test oracles, deliberately independent of the production solvers:
//! a fully explicit front-tracking reference scheme with a first-order
//! Stefan stencil, and the closed-form (Bernoulli substitution) solution of
//! the periodic logistic ODE.

#![allow(dead_code)]

/// Reference state for the explicit scheme.
#[derive(Debug, Clone)]
pub struct RefState {
    pub t: f64,
    pub h: f64,
    pub u: Vec<f64>,
}

impl RefState {
    pub fn sup_u(&self) -> f64 {
        self.u.iter().fold(0.0f64, |s, &x| s.max(x))
    }
}

/// Explicit Euler front-tracking run without chemotaxis: centered advection,
/// explicit diffusion, first-order one-sided Stefan stencil. Used as an
/// independent coarse check of the production IMEX path.
pub fn reference_run_single(
    h0: f64,
    u0: &[f64],
    nu: f64,
    a0: f64,
    b0: f64,
    t_end: f64,
) -> RefState {
    let n = u0.len() - 1;
    let dy = 1.0 / n as f64;
    let mut u = u0.to_vec();
    u[n] = 0.0;
    let mut h = h0;
    let mut t = 0.0;
    while t < t_end {
        let hp = nu * u[n - 1] / (dy * h);
        let dt = (0.35 * dy * dy * h * h)
            .min(0.05)
            .min(if hp > 0.0 { 0.4 * dy * h / hp } else { f64::INFINITY })
            .min(t_end - t);
        let mut next = vec![0.0; n + 1];
        for i in 0..n {
            let um = if i == 0 { u[1] } else { u[i - 1] };
            let diff = (u[i + 1] - 2.0 * u[i] + um) / (dy * dy * h * h);
            let adv = if i == 0 {
                0.0
            } else {
                (i as f64 * dy) * hp / h * (u[i + 1] - u[i - 1]) / (2.0 * dy)
            };
            let grow = u[i] * (a0 - b0 * u[i]);
            next[i] = (u[i] + dt * (diff + adv + grow)).max(0.0);
        }
        u = next;
        h += dt * hp;
        t += dt;
    }
    RefState { t, h, u }
}

/// Mirrored double-front variant of [`reference_run_single`].
pub fn reference_run_double(
    g0: f64,
    h0: f64,
    u0: &[f64],
    nu: f64,
    a0: f64,
    b0: f64,
    t_end: f64,
) -> (f64, f64, RefState) {
    let n = u0.len() - 1;
    let dy = 1.0 / n as f64;
    let mut u = u0.to_vec();
    u[0] = 0.0;
    u[n] = 0.0;
    let mut g = g0;
    let mut h = h0;
    let mut t = 0.0;
    while t < t_end {
        let d = h - g;
        let hp = nu * u[n - 1] / (dy * d);
        let gp = -nu * u[1] / (dy * d);
        let speed = hp.max(-gp);
        let dt = (0.35 * dy * dy * d * d)
            .min(0.05)
            .min(if speed > 0.0 {
                0.4 * dy * d / speed
            } else {
                f64::INFINITY
            })
            .min(t_end - t);
        let mut next = vec![0.0; n + 1];
        for i in 1..n {
            let y = i as f64 * dy;
            let diff = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dy * dy * d * d);
            let adv = ((1.0 - y) * gp + y * hp) / d * (u[i + 1] - u[i - 1]) / (2.0 * dy);
            let grow = u[i] * (a0 - b0 * u[i]);
            next[i] = (u[i] + dt * (diff + adv + grow)).max(0.0);
        }
        u = next;
        g += dt * gp;
        h += dt * hp;
        t += dt;
    }
    (
        g,
        h,
        RefState {
            t,
            h: h - g,
            u,
        },
    )
}

/// Closed-form periodic logistic orbit via the reciprocal substitution:
/// w = 1/u solves w' = -a(t) w + b(t), whose unique periodic solution is
/// explicit in the antiderivative of a. Returns (t, u) pairs on a uniform
/// grid over one period, accurate to quadrature error (~1e-13).
pub fn logistic_orbit_closed_form(
    a: &dyn Fn(f64) -> f64,
    b: &dyn Fn(f64) -> f64,
    period: f64,
) -> Vec<(f64, f64)> {
    let m = 8192usize; // Simpson pairs
    let half = period / (2.0 * m as f64);
    // a on the half-step grid.
    let av: Vec<f64> = (0..=2 * m).map(|k| a(k as f64 * half)).collect();
    // Cumulative antiderivative of a at every node: Simpson on pairs for the
    // even nodes, a one-sided 4th-order rule for the odd ones.
    let mut big_a = vec![0.0f64; 2 * m + 1];
    for k in (0..2 * m).step_by(2) {
        big_a[k + 1] = big_a[k] + half / 12.0 * (5.0 * av[k] + 8.0 * av[k + 1] - av[k + 2]);
        big_a[k + 2] = big_a[k] + half / 3.0 * (av[k] + 4.0 * av[k + 1] + av[k + 2]);
    }
    // Cumulative integral of e^{A} b the same way.
    let gv: Vec<f64> = (0..=2 * m)
        .map(|k| (big_a[k]).exp() * b(k as f64 * half))
        .collect();
    let mut integral = vec![0.0f64; 2 * m + 1];
    for k in (0..2 * m).step_by(2) {
        integral[k + 1] =
            integral[k] + half / 12.0 * (5.0 * gv[k] + 8.0 * gv[k + 1] - gv[k + 2]);
        integral[k + 2] = integral[k] + half / 3.0 * (gv[k] + 4.0 * gv[k + 1] + gv[k + 2]);
    }
    let w0 = integral[2 * m] / ((big_a[2 * m]).exp() - 1.0);
    (0..=2 * m)
        .map(|k| {
            let w = (-big_a[k]).exp() * (w0 + integral[k]);
            (k as f64 * half, 1.0 / w)
        })
        .collect()
}

/// Standard TOML config text used across CLI and harness tests.
pub fn basic_config_toml(h0: f64, amplitude: f64, t_end: f64) -> String {
    format!(
        r#"
[model]
chi1 = 0.0
chi2 = 0.0
lambda1 = 1.0
lambda2 = 1.0
mu1 = 1.0
mu2 = 1.0
nu = 1.0

[coefficients]
kind = "constant"
a0 = 1.0
b0 = 1.0

[geometry]
kind = "single"
h0 = {h0}

[initial]
shape = "cos_half"
amplitude = {amplitude}

[grid]
n = 64

[time]
t_end = {t_end}

[run]
h_max = 10.0
"#
    )
}
