//! Small numerical building blocks: tridiagonal solves and quadrature.

use crate::error::SolverError;

/// Solve a tridiagonal system in place with the Thomas algorithm.
///
/// `lower[i]` couples row `i` to `i-1` (`lower[0]` unused), `upper[i]`
/// couples row `i` to `i+1` (`upper[n-1]` unused). `rhs` is overwritten with the
/// solution. The caller guarantees the system is diagonally dominant enough
/// that no pivoting is needed, which holds for every matrix assembled in this
/// crate (M-matrices from implicit diffusion and screened Poisson operators).
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = rhs.len();
    debug_assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    let mut scratch = vec![0.0; n];
    let mut d = diag[0];
    rhs[0] /= d;
    for i in 1..n {
        scratch[i] = upper[i - 1] / d;
        d = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
///
/// `budget` caps the number of function evaluations; exceeding it is an
/// error rather than a silently degraded result.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<f64, SolverError> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evals = 3usize;
    let v = simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 40, &mut evals, budget)?;
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    evals: &mut usize,
    budget: usize,
) -> Result<f64, SolverError> {
    if *evals > budget {
        return Err(SolverError::QuadratureBudget { evaluations: *evals });
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let lv = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals, budget)?;
    let rv = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals, budget)?;
    Ok(lv + rv)
}

/// Composite Simpson quadrature with `panels` panels (rounded up to even).
pub fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i.is_multiple_of(2) { 2.0 } else { 4.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tridiagonal_reproduces_known_solution() {
        // -u'' = 1 on (0,1), u(0)=u(1)=0, exact u = x(1-x)/2.
        let n = 63;
        let dx = 1.0 / (n as f64 + 1.0);
        let lower = vec![-1.0 / (dx * dx); n];
        let diag = vec![2.0 / (dx * dx); n];
        let upper = vec![-1.0 / (dx * dx); n];
        let mut rhs = vec![1.0; n];
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        for (i, v) in rhs.iter().enumerate() {
            let x = (i as f64 + 1.0) * dx;
            assert_relative_eq!(*v, 0.5 * x * (1.0 - x), epsilon = 1e-12);
        }
    }

    #[test]
    fn simpson_integrates_gaussian_tail() {
        let f = |x: f64| (-x * x).exp();
        let v = adaptive_simpson(&f, 0.0, 10.0, 1e-13, 100_000).unwrap();
        assert_relative_eq!(v, core::f64::consts::PI.sqrt() / 2.0, epsilon = 1e-11);
    }

    #[test]
    fn composite_simpson_matches_polynomial() {
        let f = |x: f64| x * x * x;
        assert_relative_eq!(composite_simpson(&f, 0.0, 2.0, 16), 4.0, epsilon = 1e-12);
    }
}
