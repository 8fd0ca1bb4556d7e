use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use dihedral_core::acceptance::run_all;
use dihedral_core::central::{classify, find_all, CentralConfiguration, Family, VSign};
use dihedral_core::dynamics::{
    energy, homothetic, integrate_partial, lift_with_origin, parabolic_homothetic_rho, project_to_parabolic,
    McGeheeState, Trajectory,
};
use dihedral_core::geometry::r_of_phi;
use dihedral_core::numerics::eigen::sort_eigenvalues;
use dihedral_core::numerics::quadrature::gauss_jacobi_rule;
use dihedral_core::numerics::IntegratorConfig;
use dihedral_core::params::make_params;
use dihedral_core::potential::integral::du_dtheta;
use dihedral_core::potential::perron::{
    binomial_neg_beta_abs, perron_apply, perron_average, perron_b, series_truncation, symmetric_series,
};
use dihedral_core::potential::{binary_collision_distance, gradient, u_direct, u_integral};
use dihedral_core::{Error, ProblemParams, SphereConfig};

use crate::args::{CcArgs, CheckArgs, FlowArgs, Format, PerronArgs, PotentialArgs, Representation};
use crate::output::{sink, Cell, Table};
use crate::CliError;

type Out = Result<(), CliError>;

fn emit(table: &Table, out: &crate::args::OutputArgs) -> Out {
    let mut w = sink(out.output.as_deref()).map_err(CliError::io)?;
    table.write_to(&mut *w, out.format).map_err(CliError::io)?;
    w.flush().map_err(CliError::io)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn params(l: usize, alpha: f64) -> Result<ProblemParams, CliError> {
    make_params(l, alpha).map_err(|e| usage(e.to_string()))
}

const CC_HEADER: [&str; 23] = [
    "l",
    "alpha",
    "family",
    "theta",
    "phi",
    "u",
    "v_bar_sign",
    "gamma1",
    "gamma2",
    "eig0_re",
    "eig0_im",
    "eig1_re",
    "eig1_im",
    "eig2_re",
    "eig2_im",
    "eig3_re",
    "eig3_im",
    "eig4_re",
    "eig4_im",
    "dim_stable",
    "dim_unstable",
    "dim_stable_in_P",
    "dim_unstable_in_P",
];

fn cc_rows(p: &ProblemParams) -> Result<Vec<Vec<Cell>>, Error> {
    let mut rows = Vec::new();
    for cc in find_all(p)? {
        for sign in VSign::BOTH {
            let rep = classify(p, &cc, sign)?;
            let mut eigs = rep.eigenvalues.clone();
            sort_eigenvalues(&mut eigs);
            let mut row = vec![
                Cell::I(p.l as i64),
                Cell::F(p.alpha),
                Cell::S(cc.family.name().into()),
                Cell::F(cc.s.theta),
                Cell::F(cc.s.phi),
                Cell::F(cc.u_value),
                Cell::I(sign.value() as i64),
                Cell::F(cc.hessian_eigs.0),
                Cell::F(cc.hessian_eigs.1),
            ];
            for z in &eigs {
                row.push(Cell::F(z.re));
                row.push(Cell::F(z.im));
            }
            row.extend([
                Cell::I(rep.dim_stable as i64),
                Cell::I(rep.dim_unstable as i64),
                Cell::I(rep.dim_stable_in_p as i64),
                Cell::I(rep.dim_unstable_in_p as i64),
            ]);
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn cmd_cc(a: &CcArgs) -> Out {
    let mut cases = Vec::new();
    for &l in &a.l {
        for &alpha in &a.alpha {
            cases.push(params(l, alpha)?);
        }
    }
    let blocks: Vec<Result<Vec<Vec<Cell>>, Error>> = cases.par_iter().map(cc_rows).collect();
    let mut table = Table::new(CC_HEADER.to_vec());
    for block in blocks {
        for row in block.map_err(CliError::Numerical)? {
            table.push(row);
        }
    }
    emit(&table, &a.out)
}

fn grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()
}

/// `None` if `s` is outside every collision ball of radius `r`; otherwise
/// the nearest point on the edge of the ball it is in.
fn clip_point(p: &ProblemParams, s: SphereConfig, r: f64) -> Option<SphereConfig> {
    if s.phi.abs() > FRAC_PI_2 - r {
        return Some(SphereConfig::new(s.theta, s.phi.signum() * (FRAC_PI_2 - r)));
    }
    let d = binary_collision_distance(p, s.theta);
    if d.hypot(s.phi) < r {
        let lift = (r * r - d * d).max(0.0).sqrt() * (1.0 + 1e-12);
        let sign = if s.phi < 0.0 { -1.0 } else { 1.0 };
        return Some(SphereConfig::new(s.theta, sign * lift));
    }
    None
}

pub fn cmd_potential(a: &PotentialArgs) -> Out {
    let p = params(a.l, a.alpha)?;
    if a.n_theta == 0 || a.n_phi == 0 {
        return Err(usage("grid sizes must be positive"));
    }
    if !(a.inset >= 0.0 && a.clip_radius > 0.0) {
        return Err(usage("--inset must be nonnegative and --clip-radius positive"));
    }
    let theta_min = a.theta_min.unwrap_or(a.inset);
    let theta_max = a.theta_max.unwrap_or(p.half_period());
    let phi_min = a.phi_min.unwrap_or(a.inset);
    let phi_max = a.phi_max.unwrap_or(FRAC_PI_2 - a.inset);
    if !(theta_min <= theta_max && phi_min <= phi_max) || ![theta_min, theta_max, phi_min, phi_max].iter().all(|x| x.is_finite()) {
        return Err(usage("grid bounds must be finite with min <= max"));
    }
    if phi_min < -FRAC_PI_2 || phi_max > FRAC_PI_2 {
        return Err(usage("phi bounds must lie in [-pi/2, pi/2]"));
    }
    let rule = match a.representation {
        Representation::Integral => {
            if phi_min < 0.0 {
                return Err(usage("the integral representation covers phi >= 0 only"));
            }
            Some(gauss_jacobi_rule(a.quad_order, p.beta).map_err(|e| usage(e.to_string()))?)
        }
        Representation::Direct => None,
    };

    let mut points = Vec::with_capacity(a.n_theta * a.n_phi);
    for &theta in &grid(theta_min, theta_max, a.n_theta) {
        for &phi in &grid(phi_min, phi_max, a.n_phi) {
            let s = SphereConfig::new(theta, phi);
            match clip_point(&p, s, a.clip_radius) {
                None => points.push(s),
                Some(moved) if a.allow_clip => points.push(moved),
                Some(_) => {
                    return Err(usage(format!(
                        "grid point (theta = {theta}, phi = {phi}) touches the collision set; pass --allow-clip to move it"
                    )))
                }
            }
        }
    }

    let rows: Vec<Result<Vec<Cell>, Error>> = points
        .par_iter()
        .map(|&s| {
            let (u, ut, up) = match &rule {
                None => {
                    let u = u_direct(&p, s)?.value();
                    let (ut, up) = gradient(&p, s)?;
                    (u, ut, up)
                }
                Some(rule) => {
                    let r = r_of_phi(s.phi)?;
                    let u = u_integral(&p, s.theta, r, rule)?.value();
                    let ut = du_dtheta(&p, s.theta, r, rule)?;
                    // dU/dphi has no integral form here; use the direct sum
                    let (_, up) = gradient(&p, s)?;
                    (u, ut, up)
                }
            };
            Ok(vec![Cell::F(s.theta), Cell::F(s.phi), Cell::F(u), Cell::F(ut), Cell::F(up)])
        })
        .collect();
    let mut table = Table::new(vec!["theta", "phi", "U", "dU_dtheta", "dU_dphi"]);
    for row in rows {
        table.push(row.map_err(CliError::Numerical)?);
    }
    emit(&table, &a.out)
}

fn flow_table(traj: &Trajectory) -> Table {
    let mut header = vec!["tau", "v", "theta", "phi", "w1", "w2", "E"];
    if traj.lift.is_some() {
        header.extend(["rho", "t"]);
    }
    let mut table = Table::new(header);
    for (k, ((tau, x), e)) in traj.samples.iter().zip(&traj.energies).enumerate() {
        let mut row = vec![
            Cell::F(*tau),
            Cell::F(x.v),
            Cell::F(x.theta),
            Cell::F(x.phi),
            Cell::F(x.w1),
            Cell::F(x.w2),
            Cell::F(*e),
        ];
        if let Some(lift) = &traj.lift {
            row.extend([Cell::F(lift[k].rho), Cell::F(lift[k].t)]);
        }
        table.push(row);
    }
    table
}

fn find_family(p: &ProblemParams, family: Family) -> Result<CentralConfiguration, CliError> {
    find_all(p)
        .map_err(CliError::Numerical)?
        .into_iter()
        .find(|c| c.family == family)
        .ok_or_else(|| CliError::Numerical(Error::Convergence(format!("no {} configuration", family.name()))))
}

pub fn cmd_flow(a: &FlowArgs) -> Out {
    let p = params(a.l, a.alpha)?;
    let cfg = IntegratorConfig {
        rel_tol: a.rel_tol,
        abs_tol: a.abs_tol,
        max_step: a.max_step,
        max_steps: a.max_steps,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    if !(a.tau_end.is_finite() && a.tau_end != 0.0) {
        return Err(usage("--tau-end must be finite and nonzero"));
    }
    if let Some(r) = a.rho0 {
        if !(r > 0.0 && r.is_finite()) {
            return Err(usage("--rho0 must be positive"));
        }
    }
    let span = (0.0, a.tau_end);
    let domain_is_usage = |e: Error| match e {
        Error::Domain(_) | Error::Collision(_) => usage(e.to_string()),
        other => CliError::Numerical(other),
    };

    let (traj, closed_form) = if a.homothetic {
        let family = a.family.expect("clap enforces --family with --homothetic").into();
        let cc = find_family(&p, family)?;
        let sign = VSign::from(a.v_sign);
        let v0 = a.v.unwrap_or_else(|| cc.signed_v(sign));
        let run = homothetic(&p, &cc, v0, span, &cfg).map_err(domain_is_usage)?;
        let parabolic = (v0.abs() - cc.v_bar).abs() <= 1e-14 * cc.v_bar;
        (run.trajectory, parabolic.then_some((cc, sign)))
    } else {
        let mut x0 = McGeheeState::new(a.v.unwrap_or(0.0), a.theta, a.phi, a.w1, a.w2);
        if a.parabolic {
            x0 = project_to_parabolic(&p, &x0).map_err(domain_is_usage)?;
        }
        energy(&p, &x0).map_err(domain_is_usage)?;
        (integrate_partial(&p, &x0, span, &cfg).map_err(domain_is_usage)?, None)
    };

    let traj = if a.lift {
        let (rho0, t0) = match (&closed_form, a.rho0) {
            (Some((cc, sign)), None) => {
                let t0 = a.t0.unwrap_or(sign.value());
                let rho = parabolic_homothetic_rho(&p, cc, t0, sign.value()).map_err(domain_is_usage)?;
                (rho, t0)
            }
            (_, rho0) => (rho0.unwrap_or(1.0), a.t0.unwrap_or(0.0)),
        };
        lift_with_origin(&p, &traj, rho0, t0).map_err(domain_is_usage)?
    } else {
        traj
    };

    emit(&flow_table(&traj), &a.out)?;
    match &traj.stopped {
        None => Ok(()),
        Some(e) => {
            let (tau, x) = traj.samples.last().expect("trajectories are never empty");
            eprintln!(
                "integration stopped: {e}\nlast good sample: tau = {tau}, v = {}, theta = {}, phi = {}, w1 = {}, w2 = {}",
                x.v, x.theta, x.phi, x.w1, x.w2
            );
            Err(CliError::Reported)
        }
    }
}

const PERRON_HEADER: [&str; 6] = ["kind", "n", "xi_arg", "value", "reference", "residual"];

/// Rows:
/// * `coefficient`: `b_n` against its small-`r` limit `|binom(-beta, n)| r^n`;
/// * `closed_form`: the integral form of `P_l(|1 - r y|^{-alpha})(xi)`
///   against the direct average over the `l` preimages;
/// * `series`: the truncated series `sum_k b_{lk} xi^k` against the same.
pub fn cmd_perron(a: &PerronArgs) -> Out {
    let p = params(a.l, a.alpha)?;
    if !(a.r > 0.0 && a.r < 1.0) {
        return Err(usage(format!("--r must lie in (0, 1), got {}", a.r)));
    }
    if a.n_xi == 0 {
        return Err(usage("--n-xi must be positive"));
    }
    let rule = gauss_jacobi_rule(a.order, p.beta).map_err(|e| usage(e.to_string()))?;
    let num = |r: Result<f64, Error>| r.map_err(CliError::Numerical);
    let mut table = Table::new(PERRON_HEADER.to_vec());
    for n in 0..=a.n_max {
        let b = num(perron_b(&p, n as i64, a.r, &rule))?;
        let lead = binomial_neg_beta_abs(p.beta, n) * a.r.powi(n as i32);
        table.push(vec![
            Cell::S("coefficient".into()),
            Cell::I(n as i64),
            Cell::F(0.0),
            Cell::F(b),
            Cell::F(lead),
            Cell::F(b - lead),
        ]);
    }
    let terms = series_truncation(p.l, a.r);
    let b_l: Vec<f64> = (0..=terms)
        .map(|k| perron_b(&p, (p.l * k) as i64, a.r, &rule))
        .collect::<Result<_, _>>()
        .map_err(CliError::Numerical)?;
    let mut worst: f64 = 0.0;
    for k in 0..a.n_xi {
        let arg = -PI + 2.0 * PI * (k as f64 + 0.5) / a.n_xi as f64;
        let xi = Complex64::from_polar(1.0, arg);
        let direct = perron_average(&p, a.r, xi);
        let closed = num(perron_apply(&p, a.r, xi, &rule))?;
        let series = symmetric_series(&b_l, xi);
        for (kind, value) in [("closed_form", closed), ("series", series)] {
            worst = worst.max((value - direct).abs());
            table.push(vec![
                Cell::S(kind.into()),
                Cell::I(terms as i64),
                Cell::F(arg),
                Cell::F(value),
                Cell::F(direct),
                Cell::F(value - direct),
            ]);
        }
    }
    emit(&table, &a.out)?;
    if worst > a.warn_above {
        eprintln!(
            "warning: max residual {worst:e} exceeds {:e}; increase --order or lower --r",
            a.warn_above
        );
    } else {
        eprintln!("max residual {worst:e}");
    }
    Ok(())
}

pub fn cmd_check(a: &CheckArgs) -> Out {
    let outcomes = run_all(a.quick);
    let all_pass = outcomes.iter().all(|o| o.passed);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let mut w = sink(a.output.as_deref()).map_err(CliError::io)?;
    if a.json {
        let mut table = Table::new(vec!["id", "name", "passed", "detail"]);
        for o in &outcomes {
            table.push(vec![
                Cell::I(o.id.into()),
                Cell::S(o.name.clone()),
                Cell::B(o.passed),
                Cell::S(o.detail.clone()),
            ]);
        }
        table.write_to(&mut *w, Format::Json).map_err(CliError::io)?;
    } else {
        for o in &outcomes {
            writeln!(w, "{} [{:2}] {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name).map_err(CliError::io)?;
        }
    }
    w.flush().map_err(CliError::io)?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Reported)
    }
}
