//! Brent's bracketed root finder.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Root of `f` in `[a, b]` by Brent's method (inverse quadratic
/// interpolation and secant steps, safeguarded by bisection). Stops when the
/// bracket is narrower than `tol` or `f` vanishes exactly.
pub fn brent_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket { fa, fb });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Convergence(format!(
        "Brent root finder did not converge in {MAX_ITER} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn sqrt_two() {
        let x = brent_root(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn tangent() {
        let x = brent_root(|x| x.tan() - 1.0, 0.5, 1.0, 1e-14).unwrap();
        assert!((x - FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn unbracketed() {
        assert!(matches!(
            brent_root(|x| x * x + 1.0, 0.0, 1.0, 1e-12),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn residual_is_small_relative_to_scale() {
        // f scale near the root ~ 1e6
        let f = |x: f64| 1e6 * (x.exp() - 3.0);
        let x = brent_root(f, 0.0, 2.0, 1e-14).unwrap();
        assert!(f(x).abs() < 1e-9 * 1e6 * 3.0);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| x.cos() - x;
        let a = brent_root(f, 0.0, 1.0, 1e-13).unwrap();
        let b = brent_root(f, 0.0, 1.0, 1e-13).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
