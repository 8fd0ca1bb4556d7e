use std::f64::consts::{FRAC_PI_4, PI};

use dihedral_core::central::*;
use dihedral_core::geometry::dihedral_orbit;
use dihedral_core::params::make_params;
use dihedral_core::potential::{covariant_gradient_norm, f_theta, u_direct};
use dihedral_core::{Error, SphereConfig};

const ALPHAS: [f64; 3] = [0.5, 1.0, 1.5];

#[test]
fn square_ngon_values() {
    let p = make_params(2, 1.0).unwrap();
    let cc = find_ngon(&p);
    assert_eq!(cc.s, SphereConfig::new(FRAC_PI_4, 0.0));
    let u = (1.0 + 2.0 * 2f64.sqrt()) / 2.0;
    assert!((cc.u_value - u).abs() < 1e-13);
    assert!((cc.v_bar - (1.0 + 2.0 * 2f64.sqrt()).sqrt()).abs() < 1e-13);
    assert!(cc.gradient_residual(&p).unwrap() < 1e-12);
}

#[test]
fn hexagon_is_critical() {
    let p = make_params(3, 1.0).unwrap();
    let cc = find_ngon(&p);
    assert!((cc.s.theta - PI / 6.0).abs() < 1e-15);
    assert!(cc.gradient_residual(&p).unwrap() < 1e-12);
}

#[test]
fn four_body_meridians_are_alpha_independent() {
    let tetra = (1.0f64 / 3f64.sqrt()).asin();
    for &alpha in &[0.25, 0.5, 1.0, 1.5, 1.75] {
        let p = make_params(2, alpha).unwrap();
        let prism = find_prism(&p, ROOT_TOL).unwrap();
        assert!((prism.s.phi - FRAC_PI_4).abs() < 1e-10, "alpha={alpha}");
        assert_eq!(prism.s.theta, 0.0);
        let anti = find_antiprism(&p, ROOT_TOL).unwrap();
        assert!((anti.s.phi - tetra).abs() < 1e-10, "alpha={alpha}");
        assert!((anti.s.phi - 0.615_479_708_670_387_3).abs() < 1e-10);
    }
}

#[test]
fn four_body_antiprism_is_regular_tetrahedron() {
    let p = make_params(2, 1.0).unwrap();
    let anti = find_antiprism(&p, ROOT_TOL).unwrap();
    let d = dihedral_orbit(&p, anti.s, 1.0).unwrap().pairwise_distances();
    assert_eq!(d.len(), 6);
    for x in &d {
        assert!((x / d[0] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn meridian_roots_have_sign_change() {
    for l in 2..=8 {
        for &alpha in &ALPHAS {
            let p = make_params(l, alpha).unwrap();
            let prism = find_prism(&p, ROOT_TOL).unwrap();
            let phi = prism.s.phi;
            assert!(f_theta(&p, 0.0, 0.9 * phi).unwrap() < 0.0);
            assert!(f_theta(&p, 0.0, (1.1 * phi).min(PI / 2.0 - 1e-6)).unwrap() > 0.0);
            let anti = find_antiprism(&p, ROOT_TOL).unwrap();
            let (t, phi) = (anti.s.theta, anti.s.phi);
            assert!(f_theta(&p, t, 0.9 * phi).unwrap() < 0.0);
            assert!(f_theta(&p, t, (1.1 * phi).min(PI / 2.0 - 1e-6)).unwrap() > 0.0);
        }
    }
}

#[test]
fn all_configurations_are_critical() {
    for l in 2..=8 {
        for &alpha in &[0.25, 0.5, 1.0, 1.5, 1.75] {
            let p = make_params(l, alpha).unwrap();
            let ccs = find_all(&p).unwrap();
            assert_eq!(ccs.len(), 3);
            for cc in &ccs {
                assert!(cc.gradient_residual(&p).unwrap() < 1e-9, "l={l} a={alpha} {:?}", cc.family);
                assert!((cc.v_bar.powi(2) / (2.0 * cc.u_value) - 1.0).abs() < 1e-15);
                assert_eq!(cc.u_value, u_direct(&p, cc.s).unwrap().value());
            }
            assert_eq!(ccs[0].s.phi, 0.0);
            assert_eq!(ccs[1].s.theta, 0.0);
            assert_eq!(ccs[2].s.theta, p.half_period());
            assert!(ccs[2].s.phi > 0.0);
        }
    }
}

#[test]
fn meridian_angles_are_continuous_in_alpha() {
    for l in 2..=6 {
        let mut prev: Option<(f64, f64)> = None;
        for k in 1..40 {
            let p = make_params(l, 0.05 * k as f64).unwrap();
            let a = find_prism(&p, ROOT_TOL).unwrap().s.phi;
            let b = find_antiprism(&p, ROOT_TOL).unwrap().s.phi;
            if let Some((pa, pb)) = prev {
                assert!((a - pa).abs() < 0.1 && (b - pb).abs() < 0.1, "l={l} k={k}");
            }
            prev = Some((a, b));
        }
    }
}

#[test]
fn hessian_is_diagonal_at_configurations() {
    for l in 2..=6 {
        for &alpha in &ALPHAS {
            let p = make_params(l, alpha).unwrap();
            for cc in find_all(&p).unwrap() {
                for sign in VSign::BOTH {
                    let m = linearization(&p, &cc, sign);
                    assert!(m[(3, 2)].abs() < 1e-10 && m[(4, 1)].abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn linearization_layout() {
    let p = make_params(3, 1.0).unwrap();
    let cc = find_prism(&p, ROOT_TOL).unwrap();
    for sign in VSign::BOTH {
        let v = cc.signed_v(sign);
        let m = linearization(&p, &cc, sign);
        assert_eq!(m[(0, 0)], 2.0 * p.beta * v);
        for j in 1..5 {
            assert_eq!(m[(0, j)], 0.0);
            assert_eq!(m[(j, 0)], 0.0);
        }
        assert_eq!(m[(1, 3)], 1.0);
        assert_eq!(m[(2, 4)], 1.0);
        let c2 = cc.s.phi.cos().powi(2);
        assert_eq!(m[(3, 1)], cc.hessian.tt / c2);
        assert_eq!(m[(4, 2)], cc.hessian.pp);
        let trace = 2.0 * p.beta * v + 2.0 * (p.beta - 1.0) * v;
        assert!((m.trace() - trace).abs() < 1e-14 * v.abs().max(1.0));
    }
}

#[test]
fn quadratic_roots_solve_the_equation() {
    for &(beta, v, gamma) in &[(0.5, 2.0, 3.0), (0.5, 2.0, -0.1), (0.25, -1.5, -4.0), (0.75, 1.0, 0.0)] {
        for lam in quadratic_roots(beta, v, gamma) {
            let res = lam * lam + (1.0 - beta) * v * lam - gamma;
            assert!(res.norm() < 1e-13, "{beta} {v} {gamma}: {res}");
        }
    }
}

#[test]
fn table_reproduced_over_sweep() {
    for l in 2..=6 {
        for &alpha in &ALPHAS {
            let p = make_params(l, alpha).unwrap();
            for cc in find_all(&p).unwrap() {
                for sign in VSign::BOTH {
                    let rep = classify(&p, &cc, sign).unwrap();
                    let want = table_dimensions(cc.family, sign);
                    assert_eq!(
                        (rep.dim_stable, rep.dim_unstable, rep.dim_stable_in_p, rep.dim_unstable_in_p),
                        want
                    );
                    assert_eq!(rep.dim_stable + rep.dim_unstable, 5);
                    assert!(rep.dual_path_distance < 1e-9);
                    let min_re = rep.eigenvalues.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
                    assert!(min_re > 1e-6 * cc.v_bar);
                }
            }
        }
    }
}

#[test]
fn table_rows_swap_with_sign() {
    for fam in Family::ALL {
        let (a, b, c, d) = table_dimensions(fam, VSign::Plus);
        assert_eq!(table_dimensions(fam, VSign::Minus), (b, a, d, c));
    }
}

#[test]
fn negative_gamma_gives_decaying_pair_for_ejection() {
    for l in 2..=6 {
        for &alpha in &ALPHAS {
            let p = make_params(l, alpha).unwrap();
            for cc in find_all(&p).unwrap() {
                let v = cc.v_bar;
                for g in [cc.hessian_eigs.0, cc.hessian_eigs.1] {
                    if g < 0.0 {
                        let roots = quadratic_roots(p.beta, v, g);
                        assert!(roots.iter().all(|z| z.re < 0.0));
                        let d = (1.0 - p.beta).powi(2) * v * v + 4.0 * g;
                        if d < 0.0 {
                            assert!((roots[0] - roots[1].conj()).norm() < 1e-14);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn hessian_sign_pattern_per_family() {
    for l in 2..=6 {
        for &alpha in &ALPHAS {
            let p = make_params(l, alpha).unwrap();
            let ccs = find_all(&p).unwrap();
            let h: Vec<_> = ccs.iter().map(|c| c.hessian).collect();
            assert!(h[0].tt > 0.0 && h[0].pp < 0.0);
            assert!(h[1].tt < 0.0 && h[1].pp > 0.0);
            assert!(h[2].tt > 0.0 && h[2].pp > 0.0);
        }
    }
}

#[test]
fn four_body_criterion_constant() {
    for &alpha in &[0.25, 0.5, 1.0, 1.5, 1.75] {
        let p = make_params(2, alpha).unwrap();
        let c = antiprism_criterion(&p);
        assert_eq!(c.c.len(), 1);
        assert!((c.c[0] - (2f64.powf(p.beta) - 1.0)).abs() < 1e-12);
        assert_eq!(c.threshold, 1.0);
        assert_eq!(c.exact_threshold, -1.0);
        assert!(c.holds_exact);
        assert!(c.f_at_equator < 0.0);
    }
    let c = antiprism_criterion(&make_params(2, 1.0).unwrap());
    assert!((c.twice_sum - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-12);
    // the parity threshold is not met for small alpha at l = 2
    assert!(!c.holds);
}

#[test]
fn six_body_criterion_constant() {
    for &alpha in &[0.25, 1.0, 1.75] {
        let p = make_params(3, alpha).unwrap();
        let c = antiprism_criterion(&p);
        let want = 2f64.powf(alpha) * (3.0 - 3f64.powf(-p.beta));
        assert!((c.c[0] - want).abs() < 1e-12);
        assert!(c.c[0] > 2.0);
        assert!(c.holds);
    }
}

#[test]
fn criterion_holds_for_three_or_more_pairs() {
    for l in 3..=12 {
        for k in 1..=7 {
            let p = make_params(l, 0.25 * k as f64).unwrap();
            let c = antiprism_criterion(&p);
            assert!(c.holds, "l={l} alpha={}", p.alpha);
            assert!(c.holds_exact);
            assert!(c.f_at_equator < 0.0);
        }
    }
}

#[test]
fn exact_threshold_matches_equator_sign() {
    // 2 sum C_j - exact_threshold = -f(0) on the antiprism meridian
    for l in 2..=12 {
        for &alpha in &[0.25, 1.0, 1.75] {
            let p = make_params(l, alpha).unwrap();
            let c = antiprism_criterion(&p);
            let gap = c.twice_sum - c.exact_threshold;
            assert!((gap + c.f_at_equator).abs() < 1e-10 * gap.abs().max(1.0), "l={l} alpha={alpha}");
        }
    }
}

#[test]
fn sphere_counts() {
    assert_eq!(Family::NGon2l.sphere_count(3), 6);
    assert_eq!(Family::Prism.sphere_count(3), 12);
    assert_eq!(Family::Antiprism.sphere_count(3), 12);
    assert_eq!("antiprism".parse::<Family>().unwrap(), Family::Antiprism);
    assert!(matches!("cube".parse::<Family>(), Err(Error::Domain(_))));
}

#[test]
fn sphere_count_matches_symmetry_orbit() {
    // images under theta -> theta + pi/l, theta -> -theta, phi -> -phi
    for l in 2..=5 {
        let p = make_params(l, 1.0).unwrap();
        for cc in find_all(&p).unwrap() {
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for k in 0..2 * l {
                for ts in [1.0, -1.0] {
                    for ps in [1.0, -1.0] {
                        let t = (ts * cc.s.theta + k as f64 * PI / l as f64).rem_euclid(2.0 * PI);
                        let q = (t, ps * cc.s.phi);
                        if !pts.iter().any(|x| {
                            let dt = (x.0 - q.0).abs();
                            dt.min(2.0 * PI - dt) < 1e-9 && (x.1 - q.1).abs() < 1e-9
                        }) {
                            pts.push(q);
                        }
                    }
                }
            }
            assert_eq!(pts.len(), cc.family.sphere_count(l), "l={l} {:?}", cc.family);
        }
    }
}

#[test]
fn completeness_scan_small_grid() {
    for l in [2usize, 3, 5] {
        let p = make_params(l, 1.0).unwrap();
        let ccs = find_all(&p).unwrap();
        let scan = completeness_scan(&p, &ccs, 60, 60, 1e-2).unwrap();
        assert!(scan.passes(), "l={l} {scan:?}");
    }
}

#[test]
fn off_meridian_points_are_not_critical() {
    let p = make_params(3, 1.0).unwrap();
    let s = SphereConfig::new(0.3 * p.half_period(), 0.5);
    assert!(covariant_gradient_norm(&p, s).unwrap() > 1e-3);
}
