//! Problem parameters of the dihedral 2l-body problem.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A fixed problem instance: `2l` equal masses, potential homogeneous of
/// degree `-alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    /// Half the number of bodies.
    pub l: usize,
    pub alpha: f64,
    /// `alpha / 2`.
    pub beta: f64,
    /// `sum_{j=1}^{l-1} (2 sin(j pi / l))^{-alpha}`, the constant of the
    /// integral representation.
    pub c_group: f64,
    /// `sum_{j=1}^{l-1} (sin(j pi / l))^{-alpha}`, the constant of the
    /// sphere representation.
    pub c_sphere: f64,
    /// 1 if `l` is even, 0 if odd.
    pub d_l: u32,
}

impl ProblemParams {
    pub fn new(l: usize, alpha: f64) -> Result<Self> {
        if l < 2 {
            return Err(domain(format!("l must be at least 2, got {l}")));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        let lf = l as f64;
        let (mut c_group, mut c_sphere) = (0.0, 0.0);
        for j in 1..l {
            let s = (j as f64 * PI / lf).sin();
            c_group += (2.0 * s).powf(-alpha);
            c_sphere += s.powf(-alpha);
        }
        Ok(Self {
            l,
            alpha,
            beta: 0.5 * alpha,
            c_group,
            c_sphere,
            d_l: u32::from(l.is_multiple_of(2)),
        })
    }

    /// `pi / l`, the period of the reduced potential in `theta`.
    pub fn theta_period(&self) -> f64 {
        PI / self.l as f64
    }

    /// `pi / (2l)`, the half-period; antiprisms and the 2l-gon sit here.
    pub fn half_period(&self) -> f64 {
        PI / (2.0 * self.l as f64)
    }
}

/// Convenience constructor matching the operation name used in docs.
pub fn make_params(l: usize, alpha: f64) -> Result<ProblemParams> {
    ProblemParams::new(l, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn l2_alpha1_constants() {
        let p = make_params(2, 1.0).unwrap();
        assert!((p.c_group - 0.5).abs() < 1e-15);
        assert!((p.c_sphere - 1.0).abs() < 1e-15);
        assert_eq!(p.d_l, 1);
        assert_eq!(p.beta, 0.5);
    }

    #[test]
    fn l3_alpha1_constants() {
        let p = make_params(3, 1.0).unwrap();
        assert!((p.c_group - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(p.d_l, 0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(make_params(2, 2.0), Err(Error::Domain(_))));
        assert!(matches!(make_params(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(make_params(1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(make_params(3, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn sphere_constant_is_scaled_group_constant() {
        for l in 2..=12 {
            for k in 1..=7 {
                let alpha = 0.25 * k as f64;
                let p = make_params(l, alpha).unwrap();
                let rel = (p.c_sphere / (2f64.powf(alpha) * p.c_group) - 1.0).abs();
                assert!(rel < 1e-13, "l={l} alpha={alpha} rel={rel}");
            }
        }
    }
}
