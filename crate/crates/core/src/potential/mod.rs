//! The reduced potential on the shape sphere.
//!
//! In sphere coordinates
//!
//! ```text
//! U(theta, phi) = (2 cos phi)^{-alpha} [ c_sphere + sum_{j=0}^{l-1} (sin^2(j pi/l - theta) + tan^2 phi)^{-beta} ]
//! ```
//!
//! (the `j = 0` term stands for `j = l`). The sum form is the reference
//! implementation; [`integral`] provides the singular-integral form used for
//! the sign structure of `dU/dtheta`, [`ambient`] evaluates the same
//! function on R^3 through the group orbit, and [`perron`] holds the l-adic
//! averaging operator behind the integral form.

pub mod ambient;
pub mod integral;
pub mod perron;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{collision, domain, Result};
use crate::geometry::SphereConfig;
use crate::params::ProblemParams;

pub use integral::{du_dtheta, u_integral};
pub use perron::{perron_apply, perron_b};

/// Guard radius around binary collisions and the poles.
pub const COLLISION_GUARD: f64 = 1e-9;

/// A value of the potential (positive away from collisions).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PotentialValue(pub f64);

impl PotentialValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `dU/dphi` together with its factorization `prefactor * f_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDerivative {
    pub value: f64,
    /// `2 beta tan(phi) / (2 cos phi)^alpha`.
    pub prefactor: f64,
    pub f_theta: f64,
}

/// Second partials of `U(theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hessian {
    pub tt: f64,
    pub tp: f64,
    pub pp: f64,
}

/// Value and partials of the bracketed sum `S = c_sphere + sum_j g_j` and
/// of the prefactor `P = (2 cos phi)^{-alpha}`.
struct SphereTerms {
    pref: f64,
    pref_p: f64,
    pref_pp: f64,
    s: f64,
    s_t: f64,
    s_p: f64,
    s_tt: f64,
    s_tp: f64,
    s_pp: f64,
}

fn check_config(p: &ProblemParams, s: SphereConfig) -> Result<()> {
    if !s.theta.is_finite() || !s.phi.is_finite() {
        return Err(domain("non-finite sphere coordinates"));
    }
    if s.phi.abs() >= FRAC_PI_2 - COLLISION_GUARD {
        return Err(collision(format!(
            "l-adic collision: phi = {} is at a pole",
            s.phi
        )));
    }
    if s.phi.abs() < COLLISION_GUARD && binary_collision_distance(p, s.theta) < COLLISION_GUARD {
        return Err(collision(format!(
            "binary collision at theta = {}, phi = {}",
            s.theta, s.phi
        )));
    }
    Ok(())
}

/// Distance from `theta` to the nearest multiple of `pi / l`.
pub fn binary_collision_distance(p: &ProblemParams, theta: f64) -> f64 {
    let period = p.theta_period();
    let m = theta.rem_euclid(period);
    m.min(period - m)
}

fn terms(p: &ProblemParams, s: SphereConfig) -> SphereTerms {
    let beta = p.beta;
    let (sp, cp) = s.phi.sin_cos();
    let tan = sp / cp;
    let sec2 = 1.0 / (cp * cp);
    let tan2 = tan * tan;
    // T = tan^2 phi and its derivatives
    let t_p = 2.0 * tan * sec2;
    let t_pp = 2.0 * sec2 * (sec2 + 2.0 * tan2);

    let (mut g, mut g_t, mut g_p, mut g_tt, mut g_tp, mut g_pp) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for j in 0..p.l {
        let x = j as f64 * PI / p.l as f64 - s.theta;
        let (sx, cx) = x.sin_cos();
        let a = sx * sx;
        let a_t = -2.0 * sx * cx;
        let a_tt = 2.0 * (cx * cx - sx * sx);
        let base = a + tan2;
        let b0 = base.powf(-beta);
        let b1 = b0 / base;
        let b2 = b1 / base;
        g += b0;
        g_t += -beta * b1 * a_t;
        g_p += -beta * b1 * t_p;
        g_tt += beta * (beta + 1.0) * b2 * a_t * a_t - beta * b1 * a_tt;
        g_tp += beta * (beta + 1.0) * b2 * a_t * t_p;
        g_pp += beta * (beta + 1.0) * b2 * t_p * t_p - beta * b1 * t_pp;
    }
    let pref = (2.0 * cp).powf(-p.alpha);
    let pref_p = p.alpha * tan * pref;
    let pref_pp = p.alpha * pref * (sec2 + p.alpha * tan2);
    SphereTerms {
        pref,
        pref_p,
        pref_pp,
        s: p.c_sphere + g,
        s_t: g_t,
        s_p: g_p,
        s_tt: g_tt,
        s_tp: g_tp,
        s_pp: g_pp,
    }
}

/// The potential by direct summation over the group orbit.
pub fn u_direct(p: &ProblemParams, s: SphereConfig) -> Result<PotentialValue> {
    check_config(p, s)?;
    let t = terms(p, s);
    Ok(PotentialValue(t.pref * t.s))
}

/// `(dU/dtheta, dU/dphi)` by termwise differentiation of the direct sum.
pub fn gradient(p: &ProblemParams, s: SphereConfig) -> Result<(f64, f64)> {
    check_config(p, s)?;
    let t = terms(p, s);
    Ok((t.pref * t.s_t, t.pref_p * t.s + t.pref * t.s_p))
}

/// Value, gradient and Hessian in one pass.
pub fn jet(p: &ProblemParams, s: SphereConfig) -> Result<(f64, (f64, f64), Hessian)> {
    check_config(p, s)?;
    let t = terms(p, s);
    let u = t.pref * t.s;
    let grad = (t.pref * t.s_t, t.pref_p * t.s + t.pref * t.s_p);
    let hess = Hessian {
        tt: t.pref * t.s_tt,
        tp: t.pref_p * t.s_t + t.pref * t.s_tp,
        pp: t.pref_pp * t.s + 2.0 * t.pref_p * t.s_p + t.pref * t.s_pp,
    };
    Ok((u, grad, hess))
}

pub fn hessian(p: &ProblemParams, s: SphereConfig) -> Result<Hessian> {
    jet(p, s).map(|(_, _, h)| h)
}

/// `f_theta(phi) = c_sphere - sum_j cos^2(x_j) / (sin^2(x_j) + tan^2 phi)^{beta+1}`
/// with `x_j = j pi / l - theta`; it carries the sign of `dU/dphi` for
/// `phi > 0`.
pub fn f_theta(p: &ProblemParams, theta: f64, phi: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&phi) {
        return Err(domain(format!("f_theta needs phi in [0, pi/2), got {phi}")));
    }
    if phi < COLLISION_GUARD && binary_collision_distance(p, theta) < COLLISION_GUARD {
        return Err(domain(
            "f_theta diverges to -infinity at phi = 0 when theta is a multiple of pi/l",
        ));
    }
    let tan2 = phi.tan().powi(2);
    let mut sum = 0.0;
    for j in 0..p.l {
        let x = j as f64 * PI / p.l as f64 - theta;
        let (sx, cx) = x.sin_cos();
        sum += cx * cx * (sx * sx + tan2).powf(-(p.beta + 1.0));
    }
    Ok(p.c_sphere - sum)
}

pub fn du_dphi(p: &ProblemParams, s: SphereConfig) -> Result<PhiDerivative> {
    check_config(p, s)?;
    let prefactor = 2.0 * p.beta * s.phi.tan() / (2.0 * s.phi.cos()).powf(p.alpha);
    // f_theta is even in phi
    let f = f_theta(p, s.theta, s.phi.abs())?;
    Ok(PhiDerivative {
        value: prefactor * f,
        prefactor,
        f_theta: f,
    })
}

/// Chart components of the covariant gradient,
/// `((1/cos^2 phi) dU/dtheta, dU/dphi)`.
pub fn covariant_gradient(p: &ProblemParams, s: SphereConfig) -> Result<(f64, f64)> {
    let (ut, up) = gradient(p, s)?;
    Ok((ut / s.phi.cos().powi(2), up))
}

/// Riemannian norm of the covariant gradient on the unit sphere.
pub fn covariant_gradient_norm(p: &ProblemParams, s: SphereConfig) -> Result<f64> {
    let (ut, up) = gradient(p, s)?;
    Ok((ut * ut / s.phi.cos().powi(2) + up * up).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{group_elements, SphereConfig};
    use crate::params::make_params;
    use crate::Error;

    fn u(p: &ProblemParams, theta: f64, phi: f64) -> f64 {
        u_direct(p, SphereConfig::new(theta, phi)).unwrap().value()
    }

    #[test]
    fn square_configuration_value() {
        let p = make_params(2, 1.0).unwrap();
        let want = (1.0 + 2.0 * 2f64.sqrt()) / 2.0;
        assert!((u(&p, PI / 4.0, 0.0) - want).abs() < 1e-14);
    }

    #[test]
    fn binary_collision_is_rejected() {
        let p = make_params(2, 1.0).unwrap();
        assert!(matches!(
            u_direct(&p, SphereConfig::new(0.0, 0.0)),
            Err(Error::Collision(_))
        ));
        assert!(matches!(
            u_direct(&p, SphereConfig::new(PI / 2.0, 0.0)),
            Err(Error::Collision(_))
        ));
        assert!(matches!(
            u_direct(&p, SphereConfig::new(0.3, FRAC_PI_2)),
            Err(Error::Collision(_))
        ));
        // just outside the guard
        assert!(u_direct(&p, SphereConfig::new(1e-6, 0.0)).is_ok());
    }

    #[test]
    fn rotation_by_pi_over_l() {
        for l in 2..7 {
            let p = make_params(l, 1.3).unwrap();
            let a = u(&p, 0.21, 0.4);
            let b = u(&p, 0.21 + PI / l as f64, 0.4);
            assert!((a / b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_under_reflections_and_group() {
        for l in 2..7 {
            let p = make_params(l, 0.8).unwrap();
            let s = SphereConfig::new(0.13, 0.52);
            let base = u(&p, s.theta, s.phi);
            for (t, f) in [
                (s.theta, -s.phi),
                (-s.theta, s.phi),
                (PI / l as f64 - s.theta, s.phi),
            ] {
                assert!((u(&p, t, f) / base - 1.0).abs() < 1e-12);
            }
            for g in group_elements(l) {
                let gs = SphereConfig::from_cartesian(&(g * s.to_cartesian()));
                assert!((u(&p, gs.theta, gs.phi) / base - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f_theta_l2_hand_reductions() {
        let p = make_params(2, 1.0).unwrap();
        // theta = 0: f = 1 - tan^{-2(beta+1)} phi
        assert!(f_theta(&p, 0.0, PI / 4.0).unwrap().abs() < 1e-14);
        // theta = pi/4: f = 1 - (1/2 + tan^2 phi)^{-beta-1}
        let phi: f64 = 0.3;
        let want = 1.0 - (0.5 + phi.tan().powi(2)).powf(-1.5);
        assert!((f_theta(&p, PI / 4.0, phi).unwrap() - want).abs() < 1e-14);
        assert!(f_theta(&p, 0.0, 0.0).is_err());
        assert!(f_theta(&p, 0.0, -0.1).is_err());
    }

    #[test]
    fn f_theta_tends_to_c_sphere_and_increases() {
        let p = make_params(5, 1.2).unwrap();
        let near_pole = f_theta(&p, 0.1, FRAC_PI_2 - 1e-7).unwrap();
        assert!((near_pole - p.c_sphere).abs() < 1e-10);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..200 {
            let f = f_theta(&p, 0.1, k as f64 * FRAC_PI_2 / 200.0).unwrap();
            assert!(f > prev);
            prev = f;
        }
    }

    #[test]
    fn du_dphi_vanishes_on_equator_and_at_tetrahedron() {
        let p = make_params(2, 1.0).unwrap();
        assert_eq!(du_dphi(&p, SphereConfig::new(0.4, 0.0)).unwrap().value, 0.0);
        let s = SphereConfig::new(PI / 4.0, (1.0 / 3f64.sqrt()).asin());
        assert!(du_dphi(&p, s).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn du_dphi_matches_finite_difference() {
        let p = make_params(3, 1.0).unwrap();
        let (theta, phi, h) = (PI / 6.0, 0.4, 1e-5);
        let fd = (u(&p, theta, phi + h) - u(&p, theta, phi - h)) / (2.0 * h);
        let d = du_dphi(&p, SphereConfig::new(theta, phi)).unwrap();
        assert!((d.value / fd - 1.0).abs() < 1e-7);
        assert!((d.prefactor * d.f_theta - d.value).abs() < 1e-15);
        let (_, up) = gradient(&p, SphereConfig::new(theta, phi)).unwrap();
        assert!((up / d.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hessian_signs_at_symmetric_points() {
        let p = make_params(3, 1.0).unwrap();
        // 2l-gon: minimum in theta, maximum in phi
        let h = hessian(&p, SphereConfig::new(PI / 6.0, 0.0)).unwrap();
        assert!(h.tt > 0.0 && h.pp < 0.0 && h.tp.abs() < 1e-10);
    }

    #[test]
    fn hessian_matches_five_point_differences() {
        let p = make_params(4, 1.4).unwrap();
        let s = SphereConfig::new(0.17, 0.33);
        let h = 1e-3;
        let fd2 = |f: &dyn Fn(f64) -> f64| {
            (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h)
        };
        let tt = fd2(&|d| u(&p, s.theta + d, s.phi));
        let pp = fd2(&|d| u(&p, s.theta, s.phi + d));
        let d1 = |f: &dyn Fn(f64) -> f64| (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
        let tp = d1(&|e| gradient(&p, SphereConfig::new(s.theta, s.phi + e)).unwrap().0);
        let pt = d1(&|e| gradient(&p, SphereConfig::new(s.theta + e, s.phi)).unwrap().1);
        let got = hessian(&p, s).unwrap();
        assert!((got.tt / tt - 1.0).abs() < 1e-5, "{} {}", got.tt, tt);
        assert!((got.pp / pp - 1.0).abs() < 1e-5, "{} {}", got.pp, pp);
        assert!((got.tp / tp - 1.0).abs() < 1e-5);
        assert!((got.tp / pt - 1.0).abs() < 1e-7, "{tp} {pt} {}", got.tp);
    }

    #[test]
    fn covariant_gradient_is_tangent() {
        let p = make_params(3, 0.9).unwrap();
        let s = SphereConfig::new(0.31, -0.62);
        let (gt, gp) = covariant_gradient(&p, s).unwrap();
        let (et, ep) = s.tangent_basis();
        let g = et * gt + ep * gp;
        assert!(g.dot(&s.to_cartesian()).abs() < 1e-12);
        assert_eq!(covariant_gradient(&p, SphereConfig::new(0.3, 0.0)).unwrap().1, 0.0);
    }
}
