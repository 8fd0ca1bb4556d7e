//! The same flow on `S^2 x R x TS^2` embedded in R^3:
//!
//! ```text
//! v' = |w|^2 + beta v^2 - alpha U(s)
//! s' = w
//! w' = -|w|^2 s + (beta - 1) v w + grad_s U
//! ```

use nalgebra::Vector3;

use crate::error::{domain, Result};
use crate::params::ProblemParams;
use crate::potential::ambient::{covariant_gradient_ambient, u_ambient};

use super::McGeheeState;

/// `(s, v, w)` with `|s| = 1` and `<w, s> = 0`. Also used for derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientState {
    pub s: Vector3<f64>,
    pub v: f64,
    pub w: Vector3<f64>,
}

impl AmbientState {
    pub fn from_chart(x: &McGeheeState) -> Self {
        let c = x.config();
        let (et, ep) = c.tangent_basis();
        Self {
            s: c.to_cartesian(),
            v: x.v,
            w: et * x.w1 + ep * x.w2,
        }
    }

    /// Chart coordinates of a state; the inverse of [`Self::from_chart`]
    /// away from the poles.
    pub fn to_chart(&self) -> McGeheeState {
        let c = crate::geometry::SphereConfig::from_cartesian(&self.s);
        let (et, ep) = c.tangent_basis();
        McGeheeState {
            v: self.v,
            theta: c.theta,
            phi: c.phi,
            w1: self.w.dot(&et) / et.norm_squared(),
            w2: self.w.dot(&ep),
        }
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        if (self.s.norm() - 1.0).abs() > tol {
            return Err(domain(format!("|s| = {} is not 1", self.s.norm())));
        }
        if self.w.dot(&self.s).abs() > tol {
            return Err(domain("w is not tangent to the sphere at s"));
        }
        Ok(())
    }
}

pub fn vector_field_ambient(p: &ProblemParams, x: &AmbientState) -> Result<AmbientState> {
    x.check(1e-9)?;
    let u = u_ambient(p, &x.s)?;
    let grad = covariant_gradient_ambient(p, &x.s)?;
    let w2 = x.w.norm_squared();
    Ok(AmbientState {
        s: x.w,
        v: w2 + p.beta * x.v * x.v - p.alpha * u,
        w: -x.s * w2 + x.w * ((p.beta - 1.0) * x.v) + grad,
    })
}

/// Pushes a chart derivative `dx` at `x` forward to `(s', v', w')`.
pub fn push_derivative(x: &McGeheeState, dx: &McGeheeState) -> AmbientState {
    let c = x.config();
    let (et, ep) = c.tangent_basis();
    let (stt, stp, spp) = c.second_derivatives();
    let ds = et * dx.theta + ep * dx.phi;
    let dw = et * dx.w1 + ep * dx.w2 + (stt * dx.theta + stp * dx.phi) * x.w1 + (stp * dx.theta + spp * dx.phi) * x.w2;
    AmbientState { s: ds, v: dx.v, w: dw }
}
