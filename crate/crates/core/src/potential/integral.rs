//! Integral representation of the potential in the variables `(theta, r)`,
//! `r = (1 - sin phi) / (1 + sin phi)`:
//!
//! ```text
//! U = ((1+r)^2 / (4r))^beta [ c_group + l r^beta (sin(beta pi)/pi) I(r, theta) ]
//! I(r, theta) = int_0^1 t^{beta-1} (1-t)^{-beta} (1 - t r^2)^{-beta}
//!               (1 - x^2) / (1 + x^2 - 2 x cos(2 l theta)) dt,   x = (t r)^l
//! ```
//!
//! The endpoint singularities are exactly the Gauss-Jacobi weight, so the
//! remaining factor is smooth for `r < 1`. At `r = 1` the factor
//! `(1 - t r^2)^{-beta}` joins the weight; the integrands there carry a zero
//! `1 - x^2 = (1 - t) (1 + x) sum_{k<l} t^k`, which is divided out before
//! integrating against `t^{beta-1} (1-t)^{1-2 beta}`.

use std::f64::consts::PI;

use crate::error::{collision, domain, Error, Result};
use crate::numerics::quadrature::{gauss_jacobi_rule, jacobi_rule, QuadratureRule};
use crate::params::ProblemParams;

use super::{binary_collision_distance, PotentialValue, COLLISION_GUARD};

/// Relative change allowed when the quadrature order is doubled.
pub const SELF_CHECK_THRESHOLD: f64 = 1e-10;

fn check(p: &ProblemParams, theta: f64, r: f64, rule: &QuadratureRule) -> Result<()> {
    if (rule.beta - p.beta).abs() > 1e-15 {
        return Err(domain(format!(
            "quadrature rule built for beta = {}, problem has beta = {}",
            rule.beta, p.beta
        )));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain(format!("r must lie in (0, 1], got {r}")));
    }
    if 1.0 - r < COLLISION_GUARD && binary_collision_distance(p, theta) < COLLISION_GUARD {
        return Err(collision(format!("binary collision at theta = {theta}, r = {r}")));
    }
    Ok(())
}

/// `sin(beta pi) / pi`.
pub fn reflection_factor(beta: f64) -> f64 {
    (beta * PI).sin() / PI
}

/// Rule for the `r = 1` equator, weight `t^{beta-1} (1-t)^{1-2 beta}`.
fn equator_rule(rule: &QuadratureRule) -> QuadratureRule {
    jacobi_rule(rule.order, rule.beta, rule.beta - 1.0, 1.0 - 2.0 * rule.beta)
        .expect("exponents lie in (-1, 1) for beta in (0, 1)")
}

/// `(1 - x^2) / (1 - t)` at `r = 1`, without cancellation.
fn equator_factor(l: usize, t: f64, x: f64) -> f64 {
    (1.0 + x) * (0..l).map(|k| t.powi(k as i32)).sum::<f64>()
}

/// Integrates `g(t, x, (1 - x^2) / (1 - t r^2)^beta)` against the rule weight.
fn integrate_kernel<G: Fn(f64, f64, f64) -> f64>(p: &ProblemParams, r: f64, rule: &QuadratureRule, g: G) -> f64 {
    let l = p.l as i32;
    if r == 1.0 {
        equator_rule(rule).integrate(|t| {
            let x = t.powi(l);
            g(t, x, equator_factor(p.l, t, x))
        })
    } else {
        let r2 = r * r;
        rule.integrate(|t| {
            let x = (t * r).powi(l);
            g(t, x, (1.0 - t * r2).powf(-p.beta) * (1.0 - x * x))
        })
    }
}

/// `I(r, theta)`, strictly positive.
pub fn kernel_integral(p: &ProblemParams, theta: f64, r: f64, rule: &QuadratureRule) -> f64 {
    let c = (2.0 * p.l as f64 * theta).cos();
    integrate_kernel(p, r, rule, |_, x, num| num / (1.0 + x * x - 2.0 * x * c))
}

/// The integral `J(r, theta)` multiplying `-sin(2 l theta)` in
/// `dU/dtheta`; same weight, integrand `x (1 - x^2) / D^2`. Strictly positive.
pub fn theta_derivative_integral(p: &ProblemParams, theta: f64, r: f64, rule: &QuadratureRule) -> f64 {
    let c = (2.0 * p.l as f64 * theta).cos();
    integrate_kernel(p, r, rule, |_, x, num| {
        let d = 1.0 + x * x - 2.0 * x * c;
        x * num / (d * d)
    })
}

pub fn u_integral(p: &ProblemParams, theta: f64, r: f64, rule: &QuadratureRule) -> Result<PotentialValue> {
    check(p, theta, r, rule)?;
    let i = kernel_integral(p, theta, r, rule);
    let pref = ((1.0 + r).powi(2) / (4.0 * r)).powf(p.beta);
    let bracket = p.c_group + p.l as f64 * r.powf(p.beta) * reflection_factor(p.beta) * i;
    Ok(PotentialValue(pref * bracket))
}

/// `dU/dtheta = -4 l^2 sin(2 l theta) ((1+r)/2)^alpha (sin(beta pi)/pi) J(r, theta)`.
pub fn du_dtheta(p: &ProblemParams, theta: f64, r: f64, rule: &QuadratureRule) -> Result<f64> {
    check(p, theta, r, rule)?;
    let lf = p.l as f64;
    let j = theta_derivative_integral(p, theta, r, rule);
    Ok(-4.0 * lf * lf * (2.0 * lf * theta).sin() * ((1.0 + r) / 2.0).powf(p.alpha)
        * reflection_factor(p.beta)
        * j)
}

/// Recomputes `I(r, theta)` with orders `order` and `2 order` and returns
/// the relative change, or [`Error::QuadratureWarning`] when it exceeds
/// [`SELF_CHECK_THRESHOLD`].
pub fn quadrature_self_check(p: &ProblemParams, theta: f64, r: f64, order: usize) -> Result<f64> {
    let coarse = gauss_jacobi_rule(order, p.beta)?;
    let fine = gauss_jacobi_rule(2 * order, p.beta)?;
    check(p, theta, r, &coarse)?;
    let a = kernel_integral(p, theta, r, &coarse);
    let b = kernel_integral(p, theta, r, &fine);
    let rel_change = ((a - b) / b).abs();
    if rel_change > SELF_CHECK_THRESHOLD {
        return Err(Error::QuadratureWarning {
            rel_change,
            threshold: SELF_CHECK_THRESHOLD,
        });
    }
    Ok(rel_change)
}
