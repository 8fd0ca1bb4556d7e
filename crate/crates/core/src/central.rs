//! Central configurations of the reduced problem and the stability of the
//! corresponding equilibria of the McGehee flow.
//!
//! Up to the symmetries of the potential there are exactly three critical
//! points of `U` on the shape sphere: the regular 2l-gon on the equator, a
//! prism on the meridian `theta = 0` and an antiprism on the meridian
//! `theta = pi/(2l)`. The meridian latitudes are the unique zeros of
//! `f_theta`.
//!
//! Each critical point `s` gives two equilibria `(v, s, 0)` with
//! `v = +-sqrt(2 U(s))`; `v > 0` is the ejection branch, `v < 0` the
//! collision branch.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SphereConfig;
use crate::numerics::eigen::{eig_dense, max_pairing_distance, sort_eigenvalues};
use crate::numerics::roots::brent_root;
use crate::params::ProblemParams;
use crate::potential::{covariant_gradient_norm, f_theta, jet, Hessian};

/// Inset of the latitude bracket from `0` and `pi/2`.
pub const BRACKET_INSET: f64 = 1e-6;
/// Default tolerance on meridian latitudes.
pub const ROOT_TOL: f64 = 1e-12;
/// Required agreement between the two eigenvalue computations.
pub const EIGEN_AGREEMENT: f64 = 1e-9;
/// Real parts below this are treated as non-hyperbolic.
pub const HYPERBOLICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    NGon2l,
    Prism,
    Antiprism,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::NGon2l, Family::Prism, Family::Antiprism];

    pub fn name(self) -> &'static str {
        match self {
            Family::NGon2l => "ngon",
            Family::Prism => "prism",
            Family::Antiprism => "antiprism",
        }
    }

    /// Number of points of the family on the whole shape sphere.
    pub fn sphere_count(self, l: usize) -> usize {
        match self {
            Family::NGon2l => 2 * l,
            Family::Prism | Family::Antiprism => 4 * l,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ngon" => Ok(Family::NGon2l),
            "prism" => Ok(Family::Prism),
            "antiprism" => Ok(Family::Antiprism),
            other => Err(Error::Domain(format!(
                "unknown family {other:?}; expected ngon, prism or antiprism"
            ))),
        }
    }
}

/// Sign of the radial velocity `v` at an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VSign {
    Plus,
    Minus,
}

impl VSign {
    pub const BOTH: [VSign; 2] = [VSign::Plus, VSign::Minus];

    pub fn value(self) -> f64 {
        match self {
            VSign::Plus => 1.0,
            VSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralConfiguration {
    pub family: Family,
    pub s: SphereConfig,
    pub u_value: f64,
    /// `sqrt(2 U(s))`, always positive.
    pub v_bar: f64,
    /// Hessian in chart coordinates.
    pub hessian: Hessian,
    /// Eigenvalues `gamma_1 >= gamma_2` of the block
    /// `[[U_tt / cos^2 phi, U_tp], [U_pt, U_pp]]` of the linearization.
    pub hessian_eigs: (f64, f64),
}

impl CentralConfiguration {
    fn build(p: &ProblemParams, family: Family, s: SphereConfig) -> Result<Self> {
        let (u, _, h) = jet(p, s)?;
        let c2 = s.phi.cos().powi(2);
        let block = nalgebra::Matrix2::new(h.tt / c2, h.tp, h.tp, h.pp);
        let eig = SymmetricEigen::new(block).eigenvalues;
        let (g1, g2) = if eig[0] >= eig[1] { (eig[0], eig[1]) } else { (eig[1], eig[0]) };
        Ok(Self {
            family,
            s,
            u_value: u,
            v_bar: (2.0 * u).sqrt(),
            hessian: h,
            hessian_eigs: (g1, g2),
        })
    }

    pub fn signed_v(&self, sign: VSign) -> f64 {
        sign.value() * self.v_bar
    }

    pub fn gradient_residual(&self, p: &ProblemParams) -> Result<f64> {
        covariant_gradient_norm(p, self.s)
    }
}

pub fn find_ngon(p: &ProblemParams) -> CentralConfiguration {
    CentralConfiguration::build(p, Family::NGon2l, SphereConfig::new(p.half_period(), 0.0))
        .expect("the 2l-gon is collision free")
}

fn find_meridian_root(p: &ProblemParams, theta: f64, tol: f64) -> Result<f64> {
    let (a, b) = (BRACKET_INSET, FRAC_PI_2 - BRACKET_INSET);
    let f = |phi: f64| f_theta(p, theta, phi).unwrap_or(f64::NAN);
    let (fa, fb) = (f(a), f(b));
    if !(fa < 0.0 && fb > 0.0) {
        return Err(Error::Bracket { fa, fb });
    }
    brent_root(f, a, b, tol)
}

/// The prism on `theta = 0`; `f_0` diverges to `-infinity` as `phi -> 0`.
pub fn find_prism(p: &ProblemParams, tol: f64) -> Result<CentralConfiguration> {
    let phi = find_meridian_root(p, 0.0, tol)?;
    CentralConfiguration::build(p, Family::Prism, SphereConfig::new(0.0, phi))
}

/// The antiprism on `theta = pi/(2l)`.
pub fn find_antiprism(p: &ProblemParams, tol: f64) -> Result<CentralConfiguration> {
    let theta = p.half_period();
    let phi = find_meridian_root(p, theta, tol)?;
    CentralConfiguration::build(p, Family::Antiprism, SphereConfig::new(theta, phi))
}

/// The three representatives in the wedge, ordered 2l-gon, prism, antiprism.
pub fn find_all(p: &ProblemParams) -> Result<Vec<CentralConfiguration>> {
    Ok(vec![find_ngon(p), find_prism(p, ROOT_TOL)?, find_antiprism(p, ROOT_TOL)?])
}

/// Ingredients of the sufficient condition for the antiprism root, with
/// `x_j = (2j - 1) pi / (2l)`:
/// `C_j = sin^{-2(beta+1)} x_j - sin^{-2 beta} x_j - sin^{-2 beta}(j pi / l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntiprismCriterion {
    pub c: Vec<f64>,
    /// `2 sum_{j <= floor(l/2)} C_j`.
    pub twice_sum: f64,
    /// Threshold by the parity rule: 1 for even `l`, 0 for odd `l`.
    pub threshold: f64,
    pub holds: bool,
    /// Threshold that makes the comparison equivalent to `f(0) < 0` on the
    /// antiprism meridian: -1 for even `l` (the `j = l/2` term of the sum
    /// over `j < l` is its own mirror image), 0 for odd `l`.
    pub exact_threshold: f64,
    pub holds_exact: bool,
    /// `f_{pi/(2l)}(0)`; negative exactly when the sum exceeds the
    /// exact threshold.
    pub f_at_equator: f64,
}

pub fn antiprism_criterion(p: &ProblemParams) -> AntiprismCriterion {
    let l = p.l as f64;
    let b = p.beta;
    let c: Vec<f64> = (1..=p.l / 2)
        .map(|j| {
            let jf = j as f64;
            let s2 = ((jf - 0.5) * std::f64::consts::PI / l).sin().powi(2);
            let t2 = (jf * std::f64::consts::PI / l).sin().powi(2);
            s2.powf(-b - 1.0) - s2.powf(-b) - t2.powf(-b)
        })
        .collect();
    let twice_sum = 2.0 * c.iter().sum::<f64>();
    let threshold = f64::from(p.d_l);
    let exact_threshold = -f64::from(p.d_l);
    let f_at_equator = f_theta(p, p.half_period(), 0.0).expect("the antiprism meridian avoids collisions");
    AntiprismCriterion {
        c,
        twice_sum,
        threshold,
        holds: twice_sum > threshold,
        exact_threshold,
        holds_exact: twice_sum > exact_threshold,
        f_at_equator,
    }
}

/// The 5x5 linearization of the McGehee flow at `(v, s, 0)` in the
/// coordinates `(v, theta, phi, w1, w2)`.
pub fn linearization(p: &ProblemParams, cc: &CentralConfiguration, sign: VSign) -> DMatrix<f64> {
    let v = cc.signed_v(sign);
    let h = &cc.hessian;
    let c2 = cc.s.phi.cos().powi(2);
    let mut m = DMatrix::zeros(5, 5);
    m[(0, 0)] = 2.0 * p.beta * v;
    m[(1, 3)] = 1.0;
    m[(2, 4)] = 1.0;
    m[(3, 1)] = h.tt / c2;
    m[(3, 2)] = h.tp;
    m[(3, 3)] = (p.beta - 1.0) * v;
    m[(4, 1)] = h.tp;
    m[(4, 2)] = h.pp;
    m[(4, 4)] = (p.beta - 1.0) * v;
    m
}

/// Roots of `lambda^2 + (1 - beta) v lambda - gamma = 0`.
pub fn quadratic_roots(beta: f64, v: f64, gamma: f64) -> [Complex64; 2] {
    let b = (1.0 - beta) * v;
    let d = b * b + 4.0 * gamma;
    if d >= 0.0 {
        let sq = d.sqrt();
        // cancellation-free pair
        let q = -0.5 * (b + b.signum() * sq);
        let (r1, r2) = if q != 0.0 { (q, -gamma / q) } else { (0.5 * sq, -0.5 * sq) };
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let im = 0.5 * (-d).sqrt();
        [Complex64::new(-0.5 * b, im), Complex64::new(-0.5 * b, -im)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub family: Family,
    pub v_sign: VSign,
    /// Eigenvalues of the linearization, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub dim_stable: usize,
    pub dim_unstable: usize,
    pub dim_stable_in_p: usize,
    pub dim_unstable_in_p: usize,
    /// Largest distance between the quadratic-formula and dense eigenvalues.
    pub dual_path_distance: f64,
}

/// Stable/unstable dimensions of the equilibrium and of its intersection
/// with the parabolic manifold, as tabulated for each family.
pub fn table_dimensions(family: Family, sign: VSign) -> (usize, usize, usize, usize) {
    match (family, sign) {
        (Family::NGon2l | Family::Prism, VSign::Plus) => (3, 2, 3, 1),
        (Family::NGon2l | Family::Prism, VSign::Minus) => (2, 3, 1, 3),
        (Family::Antiprism, VSign::Plus) => (2, 3, 2, 2),
        (Family::Antiprism, VSign::Minus) => (3, 2, 2, 2),
    }
}

pub fn classify(p: &ProblemParams, cc: &CentralConfiguration, sign: VSign) -> Result<StabilityReport> {
    let v = cc.signed_v(sign);
    let radial = Complex64::new(2.0 * p.beta * v, 0.0);
    let (g1, g2) = cc.hessian_eigs;
    let mut quad = vec![radial];
    quad.extend(quadratic_roots(p.beta, v, g1));
    quad.extend(quadratic_roots(p.beta, v, g2));
    sort_eigenvalues(&mut quad);

    let dense = eig_dense(&linearization(p, cc, sign))?;
    let dual_path_distance = max_pairing_distance(&quad, &dense);
    if dual_path_distance > EIGEN_AGREEMENT * cc.v_bar.max(1.0).powi(2) {
        return Err(Error::Convergence(format!(
            "quadratic-formula and dense eigenvalues differ by {dual_path_distance:e}"
        )));
    }

    let min_re = quad.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
    if min_re < HYPERBOLICITY_TOL {
        return Err(Error::Hyperbolicity(min_re));
    }
    let dim_stable = quad.iter().filter(|z| z.re < 0.0).count();
    let dim_unstable = 5 - dim_stable;

    // The radial eigenvector is e_v, normal to the parabolic manifold at
    // the equilibrium; the other four span its tangent space.
    let radial_stable = usize::from(radial.re < 0.0);
    let derived_in_p = (dim_stable - radial_stable, dim_unstable - (1 - radial_stable));
    let (ts, tu, tsp, tup) = table_dimensions(cc.family, sign);
    if (dim_stable, dim_unstable) != (ts, tu) || derived_in_p != (tsp, tup) {
        return Err(Error::Convergence(format!(
            "{} with v sign {:+}: eigenvalue counts ({dim_stable}, {dim_unstable}) in P {derived_in_p:?} \
             disagree with the tabulated ({ts}, {tu}) in P ({tsp}, {tup})",
            cc.family.name(),
            sign.value()
        )));
    }
    Ok(StabilityReport {
        family: cc.family,
        v_sign: sign,
        eigenvalues: quad,
        dim_stable,
        dim_unstable,
        dim_stable_in_p: tsp,
        dim_unstable_in_p: tup,
        dual_path_distance,
    })
}

/// Result of scanning `|grad U|` on a cell-centred grid over the wedge
/// `[0, pi/(2l)] x [0, pi/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessScan {
    pub n_theta: usize,
    pub n_phi: usize,
    pub exclusion_radius: f64,
    /// Smallest gradient norm over grid points outside every exclusion
    /// ball, divided by the largest `|gamma|` among the three
    /// configurations.
    pub min_scaled_norm: f64,
    /// Location of that minimum.
    pub argmin: SphereConfig,
    /// Strict local minima of the scaled norm below [`SUSPICION_LEVEL`]
    /// whose whole 3x3 neighbourhood lies outside the balls.
    pub suspicious: Vec<SphereConfig>,
    pub floor: f64,
}

impl CompletenessScan {
    pub fn passes(&self) -> bool {
        self.suspicious.is_empty() && self.min_scaled_norm > self.floor
    }
}

/// Pinned lower bound for the scaled gradient norm outside the balls. The
/// smallest values sit just outside the prism and antiprism balls, where
/// the latitude curvature is small compared with the largest `|gamma|`.
pub const COMPLETENESS_FLOOR: f64 = 1e-5;
/// Interior local minima of the scaled norm below this are reported.
pub const SUSPICION_LEVEL: f64 = 1e-3;

pub fn completeness_scan(
    p: &ProblemParams,
    ccs: &[CentralConfiguration],
    n_theta: usize,
    n_phi: usize,
    exclusion_radius: f64,
) -> Result<CompletenessScan> {
    let theta_max = p.half_period();
    let phi_max = FRAC_PI_2;
    let scale = ccs
        .iter()
        .flat_map(|c| [c.hessian_eigs.0.abs(), c.hessian_eigs.1.abs()])
        .fold(0.0, f64::max);
    let at = |i: usize, j: usize| {
        SphereConfig::new(
            (i as f64 + 0.5) / n_theta as f64 * theta_max,
            (j as f64 + 0.5) / n_phi as f64 * phi_max,
        )
    };
    let grid: Vec<f64> = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|k| {
            let s = at(k / n_phi, k % n_phi);
            covariant_gradient_norm(p, s).map(|g| g / scale).unwrap_or(f64::INFINITY)
        })
        .collect();
    let excluded = |s: SphereConfig| {
        ccs.iter()
            .any(|c| ((s.theta - c.s.theta).powi(2) + (s.phi - c.s.phi).powi(2)).sqrt() < exclusion_radius)
    };
    let floor = COMPLETENESS_FLOOR;
    let mut min_scaled_norm = f64::INFINITY;
    let mut argmin = at(0, 0);
    let mut suspicious = Vec::new();
    for i in 0..n_theta {
        for j in 0..n_phi {
            let s = at(i, j);
            if excluded(s) {
                continue;
            }
            let g = grid[i * n_phi + j];
            if g < min_scaled_norm {
                min_scaled_norm = g;
                argmin = s;
            }
            let is_interior_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if (di == 0 && dj == 0) || a < 0 || b < 0 || a >= n_theta as i64 || b >= n_phi as i64 {
                        return true;
                    }
                    !excluded(at(a as usize, b as usize)) && grid[a as usize * n_phi + b as usize] > g
                })
            });
            if is_interior_min && g < SUSPICION_LEVEL {
                suspicious.push(s);
            }
        }
    }
    Ok(CompletenessScan {
        n_theta,
        n_phi,
        exclusion_radius,
        min_scaled_norm,
        argmin,
        suspicious,
        floor,
    })
}
