use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use dihedral_core::central::quadratic_roots;
use dihedral_core::dynamics::{energy, project_to_parabolic, McGeheeState};
use dihedral_core::geometry::{canonicalize, phi_of_r, r_of_phi};
use dihedral_core::numerics::quadrature::gauss_jacobi_rule;
use dihedral_core::params::make_params;
use dihedral_core::potential::ambient::u_ambient;
use dihedral_core::potential::perron::{perron_apply, perron_average};
use dihedral_core::potential::{binary_collision_distance, gradient, u_direct};
use dihedral_core::SphereConfig;

fn regular(l: usize, theta: f64, phi: f64) -> bool {
    let p = make_params(l, 1.0).unwrap();
    phi.abs() > 1e-3 || binary_collision_distance(&p, theta) > 1e-3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn potential_has_dihedral_symmetries(
        l in 2usize..9, alpha in 0.1f64..1.9, theta in 0.0f64..6.3, phi in -1.4f64..1.4
    ) {
        prop_assume!(regular(l, theta, phi));
        let p = make_params(l, alpha).unwrap();
        let u = |t: f64, f: f64| u_direct(&p, SphereConfig::new(t, f)).unwrap().value();
        let base = u(theta, phi);
        assert_relative_eq!(u(theta + p.theta_period(), phi), base, max_relative = 1e-11);
        assert_relative_eq!(u(p.theta_period() - theta, phi), base, max_relative = 1e-11);
        assert_relative_eq!(u(theta, -phi), base, max_relative = 1e-12);
        let c = canonicalize(&p, SphereConfig::new(theta, phi));
        assert_relative_eq!(u(c.theta, c.phi), base, max_relative = 1e-11);
    }

    #[test]
    fn sphere_sum_equals_orbit_pair_sum(
        l in 2usize..9, alpha in 0.1f64..1.9, theta in 0.0f64..6.3, phi in -1.4f64..1.4
    ) {
        prop_assume!(regular(l, theta, phi));
        let p = make_params(l, alpha).unwrap();
        let s = SphereConfig::new(theta, phi);
        let direct = u_direct(&p, s).unwrap().value();
        let pairs = u_ambient(&p, &s.to_cartesian()).unwrap();
        assert_relative_eq!(direct, pairs, max_relative = 1e-11);
    }

    #[test]
    fn potential_is_homogeneous(
        l in 2usize..7, alpha in 0.1f64..1.9, theta in 0.0f64..1.5, phi in -1.4f64..1.4, k in 0.2f64..5.0
    ) {
        prop_assume!(regular(l, theta, phi));
        let p = make_params(l, alpha).unwrap();
        let q = SphereConfig::new(theta, phi).to_cartesian();
        let scaled = u_ambient(&p, &(q * k)).unwrap();
        assert_relative_eq!(scaled, k.powf(-alpha) * u_ambient(&p, &q).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn gradient_is_odd_under_reflections(
        l in 2usize..7, alpha in 0.1f64..1.9, theta in 0.0f64..1.5, phi in 0.01f64..1.4
    ) {
        prop_assume!(regular(l, theta, phi));
        let p = make_params(l, alpha).unwrap();
        let (gt, gp) = gradient(&p, SphereConfig::new(theta, phi)).unwrap();
        let (ht, hp) = gradient(&p, SphereConfig::new(p.theta_period() - theta, -phi)).unwrap();
        let scale = gt.hypot(gp).max(1e-300);
        prop_assert!((gt + ht).abs() < 1e-10 * scale);
        prop_assert!((gp + hp).abs() < 1e-10 * scale);
    }

    #[test]
    fn radial_variable_round_trips(phi in 0.0f64..1.5) {
        let r = r_of_phi(phi).unwrap();
        prop_assert!(r > 0.0 && r <= 1.0);
        assert_relative_eq!(phi_of_r(r).unwrap(), phi, epsilon = 1e-12);
    }

    #[test]
    fn projection_lands_on_zero_energy(
        l in 2usize..7, alpha in 0.1f64..1.9, theta in 0.05f64..0.7, phi in 0.05f64..1.4,
        v in -2.0f64..2.0, w1 in -2.0f64..2.0, w2 in -2.0f64..2.0
    ) {
        prop_assume!(v.abs() + w1.abs() + w2.abs() > 1e-3);
        let p = make_params(l, alpha).unwrap();
        let x = project_to_parabolic(&p, &McGeheeState::new(v, theta, phi, w1, w2)).unwrap();
        let u = u_direct(&p, x.config()).unwrap().value();
        let (e, _) = energy(&p, &x).unwrap();
        prop_assert!(e.abs() < 1e-13 * u);
        prop_assert!(x.v * v >= 0.0);
    }

    #[test]
    fn quadratic_roots_satisfy_characteristic_equation(
        beta in 0.05f64..0.95, v in -5.0f64..5.0, gamma in -20.0f64..20.0
    ) {
        for z in quadratic_roots(beta, v, gamma) {
            let res = z * z + z * ((1.0 - beta) * v) - gamma;
            prop_assert!(res.norm() < 1e-12 * (1.0 + gamma.abs() + v * v));
        }
    }

    #[test]
    fn averaging_closed_form_matches_definition(
        l in 2usize..7, alpha in 0.2f64..1.8, r in 0.05f64..0.8, arg in -PI..PI
    ) {
        let p = make_params(l, alpha).unwrap();
        let rule = gauss_jacobi_rule(64, p.beta).unwrap();
        let xi = Complex64::from_polar(1.0, arg);
        let closed = perron_apply(&p, r, xi, &rule).unwrap();
        assert_relative_eq!(closed, perron_average(&p, r, xi), max_relative = 1e-9);
    }
}
