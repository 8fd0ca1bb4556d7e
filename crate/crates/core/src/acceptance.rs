//! End-to-end verification suite: ten criteria, each with a pinned
//! tolerance, an independent reference and (where relevant) a runtime
//! budget.
//!
//! Every criterion returns a [`CriterionOutcome`]; numerical errors inside a
//! criterion count as a failure and are reported in `detail`, never
//! propagated. `quick` shrinks sample counts and sweeps so that the whole
//! suite fits in a short budget; the tolerances never change.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::central::{
    antiprism_criterion, classify, completeness_scan, find_all, find_antiprism, find_prism, quadratic_roots,
    table_dimensions, Family, VSign, ROOT_TOL,
};
use crate::dynamics::{
    homothetic, integrate_partial, lift_with_origin, parabolic_homothetic_rho, project_to_parabolic, McGeheeState,
};
use crate::error::Result;
use crate::geometry::{dihedral_orbit, phi_of_r, SphereConfig};
use crate::numerics::eigen::{eig_dense, max_pairing_distance};
use crate::numerics::quadrature::gauss_jacobi_rule;
use crate::numerics::IntegratorConfig;
use crate::params::{make_params, ProblemParams};
use crate::potential::perron::{binomial_integral, binomial_neg_beta_abs, perron_coefficients, symmetric_series};
use crate::potential::{binary_collision_distance, jet, u_direct, u_integral};

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Measured quantity against its tolerance, or the failure reason.
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// `PASS [ 3] name (0.12 s): detail`.
    pub fn line(&self) -> String {
        format!(
            "{} [{:2}] {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "stability table"),
    (2, "four-body meridian angles"),
    (3, "integral vs direct potential"),
    (4, "eigenvalue dual path"),
    (5, "hyperbolicity"),
    (6, "derivative oracles"),
    (7, "parabolic flow invariants"),
    (8, "homothetic lift"),
    (9, "averaging-operator identities"),
    (10, "completeness scan"),
];

const SWEEP_L: [usize; 5] = [2, 3, 4, 5, 6];
const SWEEP_ALPHA: [f64; 3] = [0.5, 1.0, 1.5];
const SEED: u64 = 20_241_014;

/// Runs every criterion in order.
pub fn run_all(quick: bool) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, quick)).collect()
}

/// Runs criterion `id` (1 to 10). Unknown ids give a failed outcome.
pub fn run(id: u8, quick: bool) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown criterion", |c| c.1)
        .to_string();
    let start = Instant::now();
    let result = match id {
        1 => stability_table(),
        2 => four_body_angles(),
        3 => integral_vs_direct(),
        4 => eigen_dual_path(),
        5 => hyperbolicity(),
        6 => derivative_oracles(if quick { 20 } else { 100 }),
        7 => parabolic_flow(if quick { 4 } else { 20 }),
        8 => homothetic_lift(),
        9 => averaging_identities(),
        10 => completeness(quick),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(budget) = budget(id) {
        if seconds > budget {
            passed = false;
            detail = format!("{detail}; runtime {seconds:.1} s exceeds {budget} s");
        }
    }
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        seconds,
    }
}

fn budget(id: u8) -> Option<f64> {
    match id {
        1 => Some(30.0),
        3 => Some(10.0),
        10 => Some(60.0),
        _ => None,
    }
}

type Check = Result<(bool, String)>;

fn sweep() -> Result<Vec<ProblemParams>> {
    let mut out = Vec::new();
    for &l in &SWEEP_L {
        for &alpha in &SWEEP_ALPHA {
            out.push(make_params(l, alpha)?);
        }
    }
    Ok(out)
}

fn stability_table() -> Check {
    let mut mismatches = Vec::new();
    let mut n = 0;
    for p in sweep()? {
        for cc in find_all(&p)? {
            for sign in VSign::BOTH {
                n += 1;
                let want = table_dimensions(cc.family, sign);
                match classify(&p, &cc, sign) {
                    Ok(r) => {
                        let got = (r.dim_stable, r.dim_unstable, r.dim_stable_in_p, r.dim_unstable_in_p);
                        if got != want {
                            mismatches.push(format!("l={} alpha={} {:?} {:?}: {got:?}", p.l, p.alpha, cc.family, sign));
                        }
                    }
                    Err(e) => mismatches.push(format!("l={} alpha={} {:?} {:?}: {e}", p.l, p.alpha, cc.family, sign)),
                }
            }
        }
    }
    Ok(if mismatches.is_empty() {
        (true, format!("{n} equilibria match the table"))
    } else {
        (false, mismatches.join("; "))
    })
}

/// For `l = 2` the meridian roots are `tan phi = 1` (prism) and
/// `tan^2 phi = 1/2` (antiprism) for every `alpha`.
fn four_body_angles() -> Check {
    let prism_want = FRAC_PI_4;
    let anti_want = (1.0 / 3f64.sqrt()).asin();
    let mut worst_angle: f64 = 0.0;
    let mut worst_dist: f64 = 0.0;
    for &alpha in &SWEEP_ALPHA {
        let p = make_params(2, alpha)?;
        let prism = find_prism(&p, ROOT_TOL)?;
        let anti = find_antiprism(&p, ROOT_TOL)?;
        worst_angle = worst_angle
            .max((prism.s.phi - prism_want).abs())
            .max((anti.s.phi - anti_want).abs());
        let d = dihedral_orbit(&p, anti.s, 1.0)?.pairwise_distances();
        if d.len() != 6 {
            return Ok((false, format!("expected 6 distances, got {}", d.len())));
        }
        worst_dist = d.iter().fold(worst_dist, |m, x| m.max((x / d[0] - 1.0).abs()));
    }
    Ok((
        worst_angle < 1e-10 && worst_dist < 1e-12,
        format!("angle error {worst_angle:.2e} (< 1e-10), tetrahedron spread {worst_dist:.2e} (< 1e-12)"),
    ))
}

fn integral_vs_direct() -> Check {
    let mut worst: f64 = 0.0;
    for l in [2usize, 3, 5] {
        for &alpha in &SWEEP_ALPHA {
            let p = make_params(l, alpha)?;
            let rule = gauss_jacobi_rule(64, p.beta)?;
            for k in 2..=9 {
                let r = 0.1 * k as f64;
                let phi = phi_of_r(r)?;
                let lf = l as f64;
                for theta in [PI / (4.0 * lf), PI / (2.0 * lf)] {
                    let a = u_integral(&p, theta, r, &rule)?.value();
                    let b = u_direct(&p, SphereConfig::new(theta, phi))?.value();
                    worst = worst.max((a / b - 1.0).abs());
                }
            }
        }
    }
    Ok((worst < 1e-8, format!("max relative difference {worst:.2e} (< 1e-8)")))
}

fn eigen_dual_path() -> Check {
    let mut worst: f64 = 0.0;
    for p in sweep()? {
        for cc in find_all(&p)? {
            for sign in VSign::BOTH {
                let v = cc.signed_v(sign);
                let mut quad = vec![Complex64::new(2.0 * p.beta * v, 0.0)];
                for g in [cc.hessian_eigs.0, cc.hessian_eigs.1] {
                    quad.extend(quadratic_roots(p.beta, v, g));
                }
                let dense = eig_dense(&crate::central::linearization(&p, &cc, sign))?;
                worst = worst.max(max_pairing_distance(&quad, &dense));
            }
        }
    }
    Ok((worst < 1e-9, format!("max eigenvalue distance {worst:.2e} (< 1e-9)")))
}

fn hyperbolicity() -> Check {
    let mut worst = f64::INFINITY;
    let mut at = String::new();
    for p in sweep()? {
        for cc in find_all(&p)? {
            for sign in VSign::BOTH {
                let dense = eig_dense(&crate::central::linearization(&p, &cc, sign))?;
                let scale = (2.0 * cc.u_value).sqrt();
                let m = dense.iter().fold(f64::INFINITY, |m, z| m.min(z.re.abs())) / scale;
                if m < worst {
                    worst = m;
                    at = format!("l={} alpha={} {}", p.l, p.alpha, cc.family.name());
                }
            }
        }
    }
    Ok((worst > 1e-6, format!("min |Re lambda| / sqrt(2U) = {worst:.3e} (> 1e-6) at {at}")))
}

/// Two-level Richardson extrapolation of a central difference.
fn richardson(f: impl Fn(f64) -> f64, h: f64, second: bool) -> f64 {
    let d = |h: f64| {
        if second {
            (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
        } else {
            (f(h) - f(-h)) / (2.0 * h)
        }
    };
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

fn random_regular_point(p: &ProblemParams, rng: &mut ChaCha8Rng) -> SphereConfig {
    loop {
        let s = SphereConfig::new(rng.gen_range(0.0..p.theta_period()), rng.gen_range(-1.3..1.3));
        let near_binary = s.phi.abs() < 0.05 && binary_collision_distance(p, s.theta) < 0.05;
        if !near_binary {
            return s;
        }
    }
}

/// Errors are measured relative to the norm of the reference gradient and
/// the Frobenius norm of the reference Hessian.
fn derivative_oracles(n: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_g, mut worst_h): (f64, f64) = (0.0, 0.0);
    for k in 0..n {
        let p = make_params(SWEEP_L[k % 5], rng.gen_range(0.25..1.75))?;
        let s = random_regular_point(&p, &mut rng);
        let (_, (gt, gp), hs) = jet(&p, s)?;
        let u = |dt: f64, dp: f64| u_direct(&p, SphereConfig::new(s.theta + dt, s.phi + dp)).map_or(f64::NAN, |v| v.value());
        let (h1, h2) = (1e-3, 2e-3);
        let fd_t = richardson(|e| u(e, 0.0), h1, false);
        let fd_p = richardson(|e| u(0.0, e), h1, false);
        let fd_tt = richardson(|e| u(e, 0.0), h2, true);
        let fd_pp = richardson(|e| u(0.0, e), h2, true);
        let ut_at = |dp: f64| richardson(|e| u(e, dp), h1, false);
        let fd_tp = richardson(ut_at, h1, false);
        let g_norm = fd_t.hypot(fd_p);
        let g_err = (gt - fd_t).hypot(gp - fd_p) / g_norm;
        let h_norm = (fd_tt * fd_tt + 2.0 * fd_tp * fd_tp + fd_pp * fd_pp).sqrt();
        let h_err = ((hs.tt - fd_tt).powi(2) + 2.0 * (hs.tp - fd_tp).powi(2) + (hs.pp - fd_pp).powi(2)).sqrt() / h_norm;
        worst_g = worst_g.max(g_err);
        worst_h = worst_h.max(h_err);
    }
    Ok((
        worst_g < 1e-6 && worst_h < 1e-5,
        format!("{n} points: gradient {worst_g:.2e} (< 1e-6), Hessian {worst_h:.2e} (< 1e-5)"),
    ))
}

fn random_parabolic_start(p: &ProblemParams, rng: &mut ChaCha8Rng) -> Result<McGeheeState> {
    loop {
        let x = McGeheeState::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.1..p.theta_period() - 0.1),
            rng.gen_range(0.1..1.2),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
        );
        if x.v != 0.0 || x.w_norm_sq() != 0.0 {
            return project_to_parabolic(p, &x);
        }
    }
}

/// Passes only if every run covers the whole span with both invariants.
/// The detail also reports the invariants on the part that was covered.
fn parabolic_flow(n: usize) -> Check {
    let p = make_params(3, 1.0)?;
    let cfg = IntegratorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let tau_end = 20.0;
    let (mut max_e, mut max_drop): (f64, f64) = (0.0, 0.0);
    let mut stop_taus = Vec::new();
    for _ in 0..n {
        let x0 = random_parabolic_start(&p, &mut rng)?;
        let traj = integrate_partial(&p, &x0, (0.0, tau_end), &cfg)?;
        max_e = max_e.max(traj.max_abs_energy());
        for w in traj.samples.windows(2) {
            max_drop = max_drop.max(w[0].1.v - w[1].1.v);
        }
        if traj.stopped.is_some() {
            stop_taus.push(traj.samples.last().map_or(0.0, |s| s.0));
        }
    }
    let complete = n - stop_taus.len();
    let spans = if stop_taus.is_empty() {
        String::new()
    } else {
        let lo = stop_taus.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = stop_taus.iter().cloned().fold(0.0, f64::max);
        format!(", the others approach a collision at tau in [{lo:.2}, {hi:.2}]")
    };
    Ok((
        complete == n && max_e < 1e-6 && max_drop <= 1e-9,
        format!(
            "{complete}/{n} runs reach tau = {tau_end}{spans}; on the computed part max |E| = {max_e:.2e} (< 1e-6), max v decrease = {max_drop:.2e} (<= 1e-9)"
        ),
    ))
}

/// Radial ODE integrated at a frozen central configuration, lifted to
/// `(rho, t)` with `t(0) = 0.1` and compared with
/// `rho(t) = ((1 + beta) sqrt(2U) t)^{1/(1 + beta)}` up to `t = 10`.
fn homothetic_lift() -> Check {
    let mut worst: f64 = 0.0;
    let mut worst_t_end: f64 = 0.0;
    for l in [2usize, 3, 4] {
        let p = make_params(l, 1.0)?;
        for cc in find_all(&p)? {
            let k = 1.0 + p.beta;
            let (t0, t1) = (0.1, 10.0);
            let rho0 = parabolic_homothetic_rho(&p, &cc, t0, 1.0)?;
            let tau_end = (t1 / t0).ln() / (k * cc.v_bar);
            let cfg = IntegratorConfig {
                max_step: 0.005,
                ..IntegratorConfig::default()
            };
            let run = homothetic(&p, &cc, cc.v_bar, (0.0, tau_end), &cfg)?;
            let lifted = lift_with_origin(&p, &run.trajectory, rho0, t0)?;
            for s in lifted.lift.as_deref().unwrap_or_default() {
                let want = parabolic_homothetic_rho(&p, &cc, s.t, 1.0)?;
                worst = worst.max((s.rho / want - 1.0).abs());
            }
            let t_last = lifted.lift.as_ref().and_then(|v| v.last()).map_or(0.0, |s| s.t);
            worst_t_end = worst_t_end.max((t_last / t1 - 1.0).abs());
        }
    }
    Ok((
        worst < 1e-8,
        format!("max relative rho error {worst:.2e} (< 1e-8), relative error of the final t {worst_t_end:.2e}"),
    ))
}

fn averaging_identities() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut binom: f64 = 0.0;
    for beta in [0.25, 0.5, 0.75] {
        let rule = gauss_jacobi_rule(64, beta)?;
        for n in 0..=10 {
            binom = binom.max((binomial_integral(&rule, n) - binomial_neg_beta_abs(beta, n)).abs());
        }
    }
    ok &= binom < 1e-12;
    notes.push(format!("(a) binomial {binom:.1e}"));

    let mut series: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for &alpha in &SWEEP_ALPHA {
        let p = make_params(2, alpha)?;
        let rule = gauss_jacobi_rule(64, p.beta)?;
        let r = 0.5;
        let b = perron_coefficients(&p, r, 60, &rule)?;
        for _ in 0..20 {
            let xi = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
            let want = (Complex64::new(1.0, 0.0) - xi * r).norm().powf(-p.alpha);
            series = series.max((symmetric_series(&b, xi) - want).abs());
        }
    }
    ok &= series < 1e-6;
    notes.push(format!("(b) series {series:.1e}"));

    let mut c1: f64 = 0.0;
    for k in 1..=7 {
        let p = make_params(2, 0.25 * k as f64)?;
        c1 = c1.max((antiprism_criterion(&p).c[0] - (2f64.powf(p.beta) - 1.0)).abs());
    }
    ok &= c1 < 1e-12;
    notes.push(format!("(c) C_1 {c1:.1e}"));

    let mut failing = Vec::new();
    for l in 3..=12 {
        for k in 1..=7 {
            let p = make_params(l, 0.25 * k as f64)?;
            if !antiprism_criterion(&p).holds {
                failing.push(format!("l={l} alpha={}", p.alpha));
            }
        }
    }
    let mut four_body = 0;
    for k in 1..=7 {
        let p = make_params(2, 0.25 * k as f64)?;
        let anti = find_antiprism(&p, ROOT_TOL)?;
        if (anti.s.phi - (1.0 / 3f64.sqrt()).asin()).abs() < 1e-10 && anti.s.phi > 0.0 && anti.s.phi < FRAC_PI_2 {
            four_body += 1;
        }
    }
    ok &= failing.is_empty() && four_body == 7;
    notes.push(if failing.is_empty() {
        format!("(d) inequality holds on 70 cases, four-body roots {four_body}/7")
    } else {
        format!("(d) inequality fails at {}", failing.join(", "))
    });
    Ok((ok, notes.join(", ")))
}

fn completeness(quick: bool) -> Check {
    let cases: Vec<(usize, f64)> = if quick {
        vec![(3, 1.0)]
    } else {
        SWEEP_L.iter().flat_map(|&l| SWEEP_ALPHA.iter().map(move |&a| (l, a))).collect()
    };
    let mut worst = f64::INFINITY;
    let mut problems = Vec::new();
    for &(l, alpha) in &cases {
        let p = make_params(l, alpha)?;
        let ccs = find_all(&p)?;
        if ccs.iter().map(|c| c.family).collect::<Vec<Family>>() != Family::ALL {
            problems.push(format!("l={l} alpha={alpha}: families missing"));
        }
        let scan = completeness_scan(&p, &ccs, 200, 200, 1e-2)?;
        worst = worst.min(scan.min_scaled_norm);
        if !scan.passes() {
            problems.push(format!(
                "l={l} alpha={alpha}: min {:.2e} at ({:.4}, {:.4}), {} suspicious",
                scan.min_scaled_norm,
                scan.argmin.theta,
                scan.argmin.phi,
                scan.suspicious.len()
            ));
        }
    }
    Ok(if problems.is_empty() {
        (
            true,
            format!("{} wedges, min scaled |grad U| outside the balls {worst:.2e}", cases.len()),
        )
    } else {
        (false, problems.join("; "))
    })
}
