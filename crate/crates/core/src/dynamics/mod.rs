//! The McGehee-regularized flow projected to `(v, s, w)`.
//!
//! In the sphere chart, with `w = w1 ds/dtheta + w2 ds/dphi`:
//!
//! ```text
//! v'  = w1^2 cos^2 phi + w2^2 + beta v^2 - alpha U
//! theta' = w1,   phi' = w2
//! w1' = (beta - 1) v w1 + 2 tan(phi) w1 w2 + U_theta / cos^2 phi
//! w2' = (beta - 1) v w2 - (1/2) w1^2 sin(2 phi) + U_phi
//! ```
//!
//! `E = (v^2 + |w|^2)/2 - U` satisfies `E' = alpha v E`, so the sign of `E`
//! is invariant and `E = 0` is the parabolic manifold. On it
//! `v' = (1 - beta) |w|^2 >= 0`.

pub mod ambient;
pub mod lift;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::central::CentralConfiguration;
use crate::error::{domain, Error, Result};
use crate::geometry::SphereConfig;
use crate::numerics::rk::{rk_integrate_partial, rk_integrate_until, IntegratorConfig};
use crate::params::ProblemParams;
use crate::potential::{gradient, u_direct};

pub use ambient::{vector_field_ambient, AmbientState};
pub use lift::{algebraic_lift, lift, lift_with_origin, LiftSample};

/// Distance from the poles at which the chart is abandoned.
pub const POLE_GUARD: f64 = 1e-6;
/// `|E|` below this counts as parabolic.
pub const ENERGY_DEAD_BAND: f64 = 1e-12;
/// A run is stopped as a collision approach once `U(s)` exceeds this
/// multiple of its initial value.
pub const COLLISION_APPROACH_RATIO: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McGeheeState {
    pub v: f64,
    pub theta: f64,
    pub phi: f64,
    pub w1: f64,
    pub w2: f64,
}

impl McGeheeState {
    pub fn new(v: f64, theta: f64, phi: f64, w1: f64, w2: f64) -> Self {
        Self { v, theta, phi, w1, w2 }
    }

    /// Equilibrium `(v, s, 0)`.
    pub fn at_rest(v: f64, s: SphereConfig) -> Self {
        Self::new(v, s.theta, s.phi, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.v, self.theta, self.phi, self.w1, self.w2]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn config(&self) -> SphereConfig {
        SphereConfig::new(self.theta, self.phi)
    }

    /// `|w|^2 = w1^2 cos^2 phi + w2^2`.
    pub fn w_norm_sq(&self) -> f64 {
        (self.w1 * self.phi.cos()).powi(2) + self.w2 * self.w2
    }
}

fn guard_pole(phi: f64) -> Result<()> {
    if !(phi.abs() < FRAC_PI_2 - POLE_GUARD) {
        return Err(domain(format!("latitude {phi} is within the pole guard of the chart")));
    }
    Ok(())
}

/// Right-hand side of the flow in the sphere chart.
pub fn vector_field(p: &ProblemParams, x: &McGeheeState) -> Result<McGeheeState> {
    guard_pole(x.phi)?;
    let s = x.config();
    let u = u_direct(p, s)?.value();
    let (ut, up) = gradient(p, s)?;
    let (sp, cp) = x.phi.sin_cos();
    let b = p.beta;
    Ok(McGeheeState {
        v: x.w_norm_sq() + b * x.v * x.v - p.alpha * u,
        theta: x.w1,
        phi: x.w2,
        w1: (b - 1.0) * x.v * x.w1 + 2.0 * (sp / cp) * x.w1 * x.w2 + ut / (cp * cp),
        w2: (b - 1.0) * x.v * x.w2 - x.w1 * x.w1 * sp * cp + up,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl EnergyClass {
    pub fn of(e: f64) -> Self {
        if e.abs() < ENERGY_DEAD_BAND {
            EnergyClass::Parabolic
        } else if e < 0.0 {
            EnergyClass::Elliptic
        } else {
            EnergyClass::Hyperbolic
        }
    }
}

/// `E = (v^2 + |w|^2)/2 - U(s)` and its class.
pub fn energy(p: &ProblemParams, x: &McGeheeState) -> Result<(f64, EnergyClass)> {
    let u = u_direct(p, x.config())?.value();
    let e = 0.5 * (x.v * x.v + x.w_norm_sq()) - u;
    Ok((e, EnergyClass::of(e)))
}

/// Rescales `(v, w)` by the positive factor that puts `x` on `E = 0`.
pub fn project_to_parabolic(p: &ProblemParams, x: &McGeheeState) -> Result<McGeheeState> {
    let u = u_direct(p, x.config())?.value();
    let k2 = x.v * x.v + x.w_norm_sq();
    if k2 == 0.0 {
        return Err(domain("cannot project a state with v = 0 and w = 0"));
    }
    let f = (2.0 * u / k2).sqrt();
    Ok(McGeheeState {
        v: f * x.v,
        w1: f * x.w1,
        w2: f * x.w2,
        ..*x
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, McGeheeState)>,
    /// `E` at each sample.
    pub energies: Vec<f64>,
    /// Physical size and time aligned with `samples`, once lifted.
    pub lift: Option<Vec<LiftSample>>,
    /// Why integration stopped before the requested end, if it did.
    #[serde(skip)]
    pub stopped: Option<Error>,
}

impl Trajectory {
    pub fn last(&self) -> &McGeheeState {
        &self.samples.last().expect("trajectories are never empty").1
    }

    pub fn max_abs_energy(&self) -> f64 {
        self.energies.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// Whether every sample has the class of the first one.
    pub fn class_is_constant(&self) -> bool {
        let first = EnergyClass::of(self.energies[0]);
        self.energies.iter().all(|&e| EnergyClass::of(e) == first)
    }
}

fn finish(p: &ProblemParams, raw: Vec<(f64, [f64; 5])>, stopped: Option<Error>) -> Result<Trajectory> {
    let samples: Vec<(f64, McGeheeState)> = raw.into_iter().map(|(t, y)| (t, McGeheeState::from_array(y))).collect();
    let energies = samples
        .iter()
        .map(|(_, x)| energy(p, x).map(|e| e.0))
        .collect::<Result<_>>()?;
    Ok(Trajectory {
        samples,
        energies,
        lift: None,
        stopped,
    })
}

/// Integrates the flow and keeps everything computed before a failure.
/// Approaching a binary or l-adic collision, detected by `U` growing past
/// [`COLLISION_APPROACH_RATIO`] times its initial value, ends the run with
/// [`Error::Collision`].
pub fn integrate_partial(
    p: &ProblemParams,
    x0: &McGeheeState,
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    guard_pole(x0.phi)?;
    let u_cap = COLLISION_APPROACH_RATIO * u_direct(p, x0.config())?.value();
    let field = |_: f64, y: &[f64; 5]| vector_field(p, &McGeheeState::from_array(*y)).map(McGeheeState::to_array);
    let stop = |tau: f64, y: &[f64; 5]| {
        let u = u_direct(p, SphereConfig::new(y[1], y[2])).map_or(f64::INFINITY, |u| u.value());
        (u > u_cap).then(|| Error::Collision(format!("collision approach at tau = {tau}: U = {u:e}")))
    };
    let (raw, stopped) = rk_integrate_until(field, stop, x0.to_array(), tau_span, cfg)?;
    finish(p, raw, stopped)
}

/// Integrates the flow; step failures near the singular set are errors.
pub fn integrate(
    p: &ProblemParams,
    x0: &McGeheeState,
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let traj = integrate_partial(p, x0, tau_span, cfg)?;
    match traj.stopped {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

/// A homothetic motion: shape frozen at a central configuration, `v`
/// solving `v' = beta v^2 - alpha U = beta (v^2 - a^2)`, `a = sqrt(2U)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotheticRun {
    pub trajectory: Trajectory,
    /// Closed-form escape time `ln((v0 + a)/(v0 - a)) / (2 beta a)` when
    /// `v0 > a` and `tau` runs forward.
    pub escape_tau: Option<f64>,
}

/// Finite forward escape time of `v' = beta (v^2 - a^2)` from `v0`.
pub fn homothetic_escape_time(beta: f64, a: f64, v0: f64) -> Option<f64> {
    (v0 > a).then(|| ((v0 + a) / (v0 - a)).ln() / (2.0 * beta * a))
}

/// Blow-up of `v` in finite `tau` is reported through `escape_tau` and
/// `trajectory.stopped`, not as an error.
pub fn homothetic(
    p: &ProblemParams,
    cc: &CentralConfiguration,
    v0: f64,
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<HomotheticRun> {
    let u = cc.u_value;
    let rhs = p.alpha * u;
    let b = p.beta;
    let field = |_: f64, y: &[f64; 1]| Ok([b * y[0] * y[0] - rhs]);
    let (raw, stopped) = rk_integrate_partial(field, [v0], tau_span, cfg)?;
    let samples: Vec<(f64, McGeheeState)> = raw
        .into_iter()
        .map(|(t, y)| (t, McGeheeState::at_rest(y[0], cc.s)))
        .collect();
    let energies = samples.iter().map(|(_, x)| 0.5 * x.v * x.v - u).collect();
    let escape_tau = if tau_span.1 > tau_span.0 {
        homothetic_escape_time(b, cc.v_bar, v0)
    } else {
        None
    };
    Ok(HomotheticRun {
        trajectory: Trajectory {
            samples,
            energies,
            lift: None,
            stopped,
        },
        escape_tau,
    })
}

/// Size along the parabolic homothetic orbit with total collision at
/// `t = 0`: `rho(t) = (sign (1 + beta) sqrt(2U) t)^{1/(1+beta)}`. The `+`
/// branch (`t > 0`) is the ejection.
pub fn parabolic_homothetic_rho(p: &ProblemParams, cc: &CentralConfiguration, t: f64, sign: f64) -> Result<f64> {
    if sign.abs() != 1.0 {
        return Err(domain(format!("sign must be +1 or -1, got {sign}")));
    }
    if !(sign * t > 0.0) {
        return Err(domain(format!("need sign * t > 0, got sign = {sign}, t = {t}")));
    }
    Ok((sign * (1.0 + p.beta) * cc.v_bar * t).powf(1.0 / (1.0 + p.beta)))
}
