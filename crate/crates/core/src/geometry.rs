//! Charts on the shape sphere, dihedral orbits and reduction to the
//! fundamental wedge.
//!
//! Space is `C x R` with coordinates `(z, y)`; vectors are stored as
//! `(Re z, Im z, y)`. The shape sphere `|z|^2 + y^2 = 1` is parametrized by
//! longitude `theta` and latitude `phi` through `z = cos(phi) e^{i theta}`,
//! `y = sin(phi)`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::ProblemParams;

/// A point of the shape sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereConfig {
    pub theta: f64,
    pub phi: f64,
}

impl SphereConfig {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn to_cartesian(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(cp * ct, cp * st, sp)
    }

    pub fn from_cartesian(q: &Vector3<f64>) -> Self {
        let n = q.norm();
        let theta = q.y.atan2(q.x).rem_euclid(2.0 * PI);
        let phi = (q.z / n).clamp(-1.0, 1.0).asin();
        Self { theta, phi }
    }

    /// Coordinate tangent vectors `(ds/dtheta, ds/dphi)`.
    pub fn tangent_basis(&self) -> (Vector3<f64>, Vector3<f64>) {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        (
            Vector3::new(-cp * st, cp * ct, 0.0),
            Vector3::new(-sp * ct, -sp * st, cp),
        )
    }

    /// Second derivatives `(s_thth, s_thph, s_phph)` of the embedding.
    pub fn second_derivatives(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        (
            Vector3::new(-cp * ct, -cp * st, 0.0),
            Vector3::new(sp * st, -sp * ct, 0.0),
            Vector3::new(-cp * ct, -cp * st, -sp),
        )
    }
}

/// `(Re z, Im z, y)` of a sphere point.
pub fn sphere_to_cartesian(s: SphereConfig) -> (f64, f64, f64) {
    let q = s.to_cartesian();
    (q.x, q.y, q.z)
}

/// The radial variable `r = (1 - sin phi) / (1 + sin phi)` of the integral
/// representation, defined on the upper hemisphere only.
pub fn r_of_phi(phi: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&phi) {
        return Err(domain(format!("r(phi) needs phi in [0, pi/2), got {phi}")));
    }
    let s = phi.sin();
    Ok((1.0 - s) / (1.0 + s))
}

/// Inverse of [`r_of_phi`]: `sin phi = (1 - r) / (1 + r)`.
pub fn phi_of_r(r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain(format!("r must lie in (0, 1], got {r}")));
    }
    Ok(((1.0 - r) / (1.0 + r)).asin())
}

/// The `2l` elements of D_l as rotation matrices, ordered
/// `zeta^0, ..., zeta^{l-1}, zeta^0 kappa, ..., zeta^{l-1} kappa`.
pub fn group_elements(l: usize) -> Vec<Matrix3<f64>> {
    let kappa = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
    let rotations: Vec<Matrix3<f64>> = (0..l)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / l as f64).sin_cos();
            Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
        })
        .collect();
    let mut out = rotations.clone();
    out.extend(rotations.iter().map(|g| g * kappa));
    out
}

/// Positions of all `2l` bodies for a shape and a size.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyOrbit {
    pub positions: Vec<Vector3<f64>>,
    pub rho: f64,
}

impl BodyOrbit {
    pub fn center_of_mass(&self) -> Vector3<f64> {
        let sum: Vector3<f64> = self.positions.iter().sum();
        sum / self.positions.len() as f64
    }

    /// All pairwise distances `|q_i - q_j|`, `i < j`.
    pub fn pairwise_distances(&self) -> Vec<f64> {
        let n = self.positions.len();
        let mut d = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                d.push((self.positions[i] - self.positions[j]).norm());
            }
        }
        d
    }
}

pub fn dihedral_orbit(p: &ProblemParams, s: SphereConfig, rho: f64) -> Result<BodyOrbit> {
    if !(rho > 0.0) {
        return Err(domain(format!("rho must be positive, got {rho}")));
    }
    let q = s.to_cartesian() * rho;
    let positions = group_elements(p.l).iter().map(|g| g * q).collect();
    Ok(BodyOrbit { positions, rho })
}

/// Representative of `s` in the wedge `theta in [0, pi/(2l)]`, `phi >= 0`,
/// using the rotation `zeta_l` and the reflections `h_phi`, `h_theta`,
/// `h'_theta`.
pub fn canonicalize(p: &ProblemParams, s: SphereConfig) -> SphereConfig {
    let period = p.theta_period();
    let mut theta = s.theta.rem_euclid(period);
    if theta >= period {
        theta = 0.0;
    }
    if theta > 0.5 * period {
        theta = period - theta;
    }
    SphereConfig {
        theta,
        phi: s.phi.abs(),
    }
}
