//! The potential as a function on R^3, `U(q) = sum_{g != 1} |q - g q|^{-alpha}`,
//! evaluated from the explicit group matrices.

use nalgebra::{Matrix3, Vector3};

use crate::error::{collision, Result};
use crate::geometry::group_elements;
use crate::params::ProblemParams;

use super::COLLISION_GUARD;

fn nontrivial(p: &ProblemParams) -> impl Iterator<Item = Matrix3<f64>> {
    group_elements(p.l).into_iter().skip(1)
}

pub fn u_ambient(p: &ProblemParams, q: &Vector3<f64>) -> Result<f64> {
    let mut u = 0.0;
    for g in nontrivial(p) {
        let d = (q - g * q).norm();
        if d < COLLISION_GUARD * q.norm() {
            return Err(collision("two bodies coincide"));
        }
        u += d.powf(-p.alpha);
    }
    Ok(u)
}

/// Euclidean gradient `dU/dq`.
pub fn grad_ambient(p: &ProblemParams, q: &Vector3<f64>) -> Result<Vector3<f64>> {
    let mut grad = Vector3::zeros();
    for g in nontrivial(p) {
        let m = Matrix3::identity() - g;
        let d = m * q;
        let n = d.norm();
        if n < COLLISION_GUARD * q.norm() {
            return Err(collision("two bodies coincide"));
        }
        grad -= m.transpose() * d * (p.alpha * n.powf(-p.alpha - 2.0));
    }
    Ok(grad)
}

/// Covariant gradient on the unit sphere, `dU/dq(s) + alpha U(s) s`.
pub fn covariant_gradient_ambient(p: &ProblemParams, s: &Vector3<f64>) -> Result<Vector3<f64>> {
    Ok(grad_ambient(p, s)? + s * (p.alpha * u_ambient(p, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dihedral_orbit, SphereConfig};
    use crate::params::make_params;
    use crate::potential::{covariant_gradient, u_direct};

    #[test]
    fn matches_sphere_formula() {
        for l in 2..7 {
            let p = make_params(l, 1.1).unwrap();
            let s = SphereConfig::new(0.4, -0.25);
            let a = u_ambient(&p, &s.to_cartesian()).unwrap();
            let b = u_direct(&p, s).unwrap().value();
            assert!((a / b - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn homogeneous_of_degree_minus_alpha() {
        let p = make_params(3, 0.7).unwrap();
        let q = SphereConfig::new(0.2, 0.3).to_cartesian();
        let a = u_ambient(&p, &(q * 2.5)).unwrap();
        let b = u_ambient(&p, &q).unwrap();
        assert!((a / (b * 2.5f64.powf(-0.7)) - 1.0).abs() < 1e-13);
        // Euler: <q, grad U> = -alpha U
        let g = grad_ambient(&p, &q).unwrap();
        assert!((g.dot(&q) + 0.7 * b).abs() < 1e-12);
    }

    #[test]
    fn mass_weighted_pair_sum_equals_reduced_potential() {
        // masses m_i = 1/sqrt(l): sum_{i<j} m_i m_j |q_i - q_j|^{-alpha} = U
        for l in 2..6 {
            let p = make_params(l, 1.0).unwrap();
            let s = SphereConfig::new(0.35, 0.45);
            let orbit = dihedral_orbit(&p, s, 1.0).unwrap();
            let pair: f64 = orbit.pairwise_distances().iter().map(|d| 1.0 / (l as f64 * d)).sum();
            assert!((pair / u_direct(&p, s).unwrap().value() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn covariant_gradient_agrees_with_chart() {
        let p = make_params(4, 1.3).unwrap();
        let s = SphereConfig::new(0.11, 0.72);
        let amb = covariant_gradient_ambient(&p, &s.to_cartesian()).unwrap();
        let (gt, gp) = covariant_gradient(&p, s).unwrap();
        let (et, ep) = s.tangent_basis();
        let chart = et * gt + ep * gp;
        assert!((amb - chart).norm() < 1e-12 * amb.norm().max(1.0));
        assert!(amb.dot(&s.to_cartesian()).abs() < 1e-12);
    }
}
