//! Gauss-Jacobi quadrature on `[0, 1]`.
//!
//! The default weight is `t^{beta-1} (1-t)^{-beta}`; [`jacobi_rule`] builds
//! rules for any weight `t^p (1-t)^q` with `p, q > -1`. On `[-1, 1]` with
//! `x = 2t - 1` the weight becomes the Jacobi weight `(1-x)^q (1+x)^p`.
//! Nodes start from the Golub-Welsch eigenvalues and are polished by Newton
//! steps on the three-term recurrence; weights come from the Christoffel
//! function at the polished nodes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{domain, Result};

/// Nodes and weights of a Gauss-Jacobi rule on `[0, 1]`. The weight
/// function is part of the rule: `integrate(f)` approximates
/// `int_0^1 t^t_exp (1-t)^one_minus_t_exp f(t) dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Problem exponent the rule belongs to.
    pub beta: f64,
    pub t_exp: f64,
    pub one_minus_t_exp: f64,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Rule for `t^{beta-1} (1-t)^{-beta}`, total mass `pi / sin(pi beta)`.
pub fn gauss_jacobi_rule(order: usize, beta: f64) -> Result<QuadratureRule> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("weight exponent beta must lie in (0, 1), got {beta}")));
    }
    let mu0 = PI / (PI * beta).sin();
    build(order, beta, beta - 1.0, -beta, mu0)
}

/// Rule for `t^p (1-t)^q`, tagged with the problem exponent `beta`.
pub fn jacobi_rule(order: usize, beta: f64, p: f64, q: f64) -> Result<QuadratureRule> {
    if !(p > -1.0 && q > -1.0) {
        return Err(domain(format!("Jacobi exponents must exceed -1, got ({p}, {q})")));
    }
    let mu0 = gamma(p + 1.0) * gamma(q + 1.0) / gamma(p + q + 2.0);
    build(order, beta, p, q, mu0)
}

/// Recurrence coefficients of the orthonormal Jacobi polynomials for
/// `(1-x)^a (1+x)^b`: diagonal `diag[k]`, off-diagonal `off[k]` linking
/// degrees `k-1` and `k` (`off[0]` unused).
fn recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let diag = (0..n)
        .map(|k| {
            let s = 2.0 * k as f64 + ab;
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (0..=n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            match k {
                0 => 0.0,
                // closed form with the removable 0/0 at a + b = -1 cancelled
                1 => (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt(),
                _ => (4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt(),
            }
        })
        .collect();
    (diag, off)
}

/// Orthonormal `q_0 .. q_{n-1}` at `x`, plus `p_n(x)` and `p_n'(x)` for the
/// (unnormalised) degree-`n` polynomial.
fn evaluate(x: f64, diag: &[f64], off: &[f64]) -> (f64, f64, f64) {
    let n = diag.len();
    let (mut q_prev, mut q) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut sum_sq = 1.0;
    for k in 0..n {
        let next = (x - diag[k]) * q - off[k] * q_prev;
        let d_next = q + (x - diag[k]) * d - off[k] * d_prev;
        if k + 1 == n {
            return (sum_sq, next, d_next);
        }
        let scale = off[k + 1];
        q_prev = q;
        d_prev = d;
        q = next / scale;
        d = d_next / scale;
        sum_sq += q * q;
    }
    unreachable!()
}

fn build(order: usize, beta: f64, p: f64, q: f64, mu0: f64) -> Result<QuadratureRule> {
    if order < 2 {
        return Err(domain(format!("quadrature order must be >= 2, got {order}")));
    }
    let n = order;
    let (diag, off) = recurrence(n, q, p);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jac[(k, k)] = diag[k];
        if k > 0 {
            jac[(k, k - 1)] = off[k];
            jac[(k - 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let mut x = eig.eigenvalues[i];
            for _ in 0..3 {
                let (_, pn, dpn) = evaluate(x, &diag, &off);
                if dpn == 0.0 {
                    break;
                }
                let step = pn / dpn;
                x -= step;
                if step.abs() <= 1e-17 * x.abs().max(1e-300) {
                    break;
                }
            }
            let (sum_sq, _, _) = evaluate(x, &diag, &off);
            (0.5 * (x + 1.0), mu0 / sum_sq)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    if pairs.iter().any(|&(t, w)| !(t > 0.0 && t < 1.0) || !(w > 0.0)) {
        return Err(domain(format!(
            "Gauss-Jacobi rule of order {order} produced nodes outside (0, 1)"
        )));
    }
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        beta,
        t_exp: p,
        one_minus_t_exp: q,
        order,
    })
}
