//! The l-adic averaging (Perron-Frobenius) operator
//! `P_l f(xi) = (1/l) sum_{y^l = xi} f(y)` applied to `|1 - r y|^{-alpha}`,
//! and the Fourier coefficients `b_n` of that function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numerics::quadrature::QuadratureRule;
use crate::params::ProblemParams;

use super::integral::reflection_factor;

fn check_rule(p: &ProblemParams, rule: &QuadratureRule) -> Result<()> {
    if (rule.beta - p.beta).abs() > 1e-15 {
        return Err(domain("quadrature rule beta does not match the problem"));
    }
    Ok(())
}

/// `b_n = (sin(beta pi)/pi) r^|n| int t^{beta-1}(1-t)^{-beta} t^|n| (1 - t r^2)^{-beta} dt`.
pub fn perron_b(p: &ProblemParams, n: i64, r: f64, rule: &QuadratureRule) -> Result<f64> {
    check_rule(p, rule)?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("b_n needs r in [0, 1), got {r}")));
    }
    let n = n.unsigned_abs() as i32;
    let r2 = r * r;
    let integral = rule.integrate(|t| t.powi(n) * (1.0 - t * r2).powf(-p.beta));
    Ok(reflection_factor(p.beta) * r.powi(n) * integral)
}

/// All `b_0 .. b_{n_max}` at once.
pub fn perron_coefficients(p: &ProblemParams, r: f64, n_max: usize, rule: &QuadratureRule) -> Result<Vec<f64>> {
    (0..=n_max as i64).map(|n| perron_b(p, n, r, rule)).collect()
}

/// Closed form of `P_l(|1 - r y|^{-alpha})(xi)` for `|xi| = 1`.
pub fn perron_apply(p: &ProblemParams, r: f64, xi: Complex64, rule: &QuadratureRule) -> Result<f64> {
    check_rule(p, rule)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(domain(format!("r must lie in (0, 1), got {r}")));
    }
    if (xi.norm() - 1.0).abs() > 1e-12 {
        return Err(domain("xi must lie on the unit circle"));
    }
    let r2 = r * r;
    let integral = rule.integrate(|t| {
        let x = (t * r).powi(p.l as i32);
        (1.0 - t * r2).powf(-p.beta) * (1.0 - x * x) / (Complex64::new(1.0, 0.0) - xi * x).norm_sqr()
    });
    Ok(reflection_factor(p.beta) * integral)
}

/// `P_l(|1 - r y|^{-alpha})(xi)` straight from the averaging definition.
pub fn perron_average(p: &ProblemParams, r: f64, xi: Complex64) -> f64 {
    let l = p.l as f64;
    let arg = xi.arg();
    (0..p.l)
        .map(|j| {
            let y = Complex64::from_polar(1.0, (arg + 2.0 * PI * j as f64) / l);
            (Complex64::new(1.0, 0.0) - y * r).norm().powf(-p.alpha)
        })
        .sum::<f64>()
        / l
}

/// `(1/l) sum_{y^l = xi} y^k`.
pub fn monomial_average(l: usize, k: i64, xi: Complex64) -> Complex64 {
    let lf = l as f64;
    let arg = xi.arg();
    (0..l)
        .map(|j| Complex64::from_polar(1.0, (arg + 2.0 * PI * j as f64) / lf).powi(k as i32))
        .sum::<Complex64>()
        / lf
}

/// Number of terms `N` with `r^{l N} < 1e-12`.
pub fn series_truncation(l: usize, r: f64) -> usize {
    ((1e-12f64).ln() / (l as f64 * r.ln())).ceil().max(1.0) as usize
}

/// `sum_{n=-N}^{N} c_{|n|} xi^n` for real symmetric coefficients.
pub fn symmetric_series(coeffs: &[f64], xi: Complex64) -> f64 {
    let mut acc = coeffs[0];
    for (n, c) in coeffs.iter().enumerate().skip(1) {
        acc += 2.0 * c * xi.powi(n as i32).re;
    }
    acc
}

/// `|binomial(-beta, N)| = prod_{k=1}^{N} (beta + k - 1) / k`.
pub fn binomial_neg_beta_abs(beta: f64, n: usize) -> f64 {
    (1..=n).map(|k| (beta + k as f64 - 1.0) / k as f64).product()
}

/// `(sin(beta pi)/pi) int t^{beta-1}(1-t)^{-beta} t^N dt`.
pub fn binomial_integral(rule: &QuadratureRule, n: usize) -> f64 {
    reflection_factor(rule.beta) * rule.integrate(|t| t.powi(n as i32))
}
