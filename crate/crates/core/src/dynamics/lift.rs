//! Recovering the size `rho` and the physical time `t` along a trajectory
//! from `(log rho)' = v` and `dt = rho^{1+beta} d tau`.
//!
//! Both integrals use the end-corrected trapezoid rule
//! `int_a^b f = h (f_a + f_b)/2 + h^2 (f'_a - f'_b)/12 + O(h^5)`, with the
//! derivatives `v'` from the vector field and
//! `(rho^{1+beta})' = (1 + beta) v rho^{1+beta}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::ProblemParams;

use super::{energy, vector_field, McGeheeState, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftSample {
    pub tau: f64,
    pub rho: f64,
    pub t: f64,
}

fn corrected_trapezoid(h: f64, f0: f64, f1: f64, d0: f64, d1: f64) -> f64 {
    0.5 * h * (f0 + f1) + h * h / 12.0 * (d0 - d1)
}

/// Lift with `rho(tau_0) = rho0` and `t(tau_0) = 0`.
pub fn lift(p: &ProblemParams, traj: &Trajectory, rho0: f64) -> Result<Trajectory> {
    lift_with_origin(p, traj, rho0, 0.0)
}

/// Lift with `rho(tau_0) = rho0` and `t(tau_0) = t0`.
pub fn lift_with_origin(p: &ProblemParams, traj: &Trajectory, rho0: f64, t0: f64) -> Result<Trajectory> {
    if traj.samples.is_empty() {
        return Err(domain("cannot lift an empty trajectory"));
    }
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(domain(format!("rho0 must be positive, got {rho0}")));
    }
    let k = 1.0 + p.beta;
    let dv: Vec<f64> = traj
        .samples
        .iter()
        .map(|(_, x)| vector_field(p, x).map(|d| d.v))
        .collect::<Result<_>>()?;

    let tau0 = traj.samples[0].0;
    let mut log_rho = rho0.ln();
    let mut t = t0;
    let mut out = vec![LiftSample { tau: tau0, rho: rho0, t }];
    for i in 1..traj.samples.len() {
        let (ta, xa) = traj.samples[i - 1];
        let (tb, xb) = traj.samples[i];
        let h = tb - ta;
        let log_a = log_rho;
        log_rho += corrected_trapezoid(h, xa.v, xb.v, dv[i - 1], dv[i]);
        let (ga, gb) = ((k * log_a).exp(), (k * log_rho).exp());
        t += corrected_trapezoid(h, ga, gb, k * xa.v * ga, k * xb.v * gb);
        out.push(LiftSample {
            tau: tb,
            rho: log_rho.exp(),
            t,
        });
    }
    Ok(Trajectory {
        lift: Some(out),
        ..traj.clone()
    })
}

/// `rho` from the energy relation `E = h rho^alpha` at physical energy
/// `h != 0`.
pub fn algebraic_lift(p: &ProblemParams, x: &McGeheeState, h: f64) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(domain("the energy relation needs a finite nonzero energy"));
    }
    let (e, _) = energy(p, x)?;
    let ratio = e / h;
    if !(ratio > 0.0) {
        return Err(domain(format!("E = {e} and h = {h} have different signs")));
    }
    Ok(ratio.powf(1.0 / p.alpha))
}
