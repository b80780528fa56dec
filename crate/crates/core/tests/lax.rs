mod common;

use cmc_core::cgrid::RealField;
use cmc_core::lax::{
    build_connection, gauge_check, gauge_check_scaled, linear_problem_residual, mu_lax_residual, su2_transform,
    trace_max, zero_curvature_residual, SU2Element, System,
};
use cmc_core::weierstrass::{derive_geometry, GeometryBundle, SpinorData};
use cmc_core::Error;
use common::{c, cyl, sphere, tol};
use num_complex::Complex64;
use proptest::prelude::*;

fn lambdas() -> [Complex64; 3] {
    [c(1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]
}

/// `q·(1 + 0.1 sin x)`: a 10% perturbation that keeps `H` pinned to 1.
fn perturbed(g: &GeometryBundle) -> GeometryBundle {
    let chart = *g.chart();
    let bump = RealField::from_fn(&chart, |z| 1.0 + 0.1 * z.re.sin());
    let mut g = g.clone();
    g.q = g.q.zip_with(&bump, |q, b| q * b);
    g
}

#[test]
fn zero_curvature_on_exact_families() {
    for s in [cyl(129), sphere(129)] {
        let g = derive_geometry(&s).unwrap();
        let bound = tol(s.chart().h(), 2);
        let closed = build_connection(&g, System::Closed, c(1.0, 0.0)).unwrap();
        assert!(zero_curvature_residual(&closed).max <= bound);
        assert!(linear_problem_residual(&s, &closed).unwrap().max <= bound);
        for lambda in lambdas() {
            for system in [System::Spectral, System::SlTwo] {
                let pair = build_connection(&g, system, lambda).unwrap();
                assert!(zero_curvature_residual(&pair).max <= bound, "{system} at {lambda}");
            }
            assert_eq!(trace_max(&build_connection(&g, System::SlTwo, lambda).unwrap()), 0.0);
        }
        for mu in [c(2.0, 0.0), c(0.0, 3.0)] {
            assert!(mu_lax_residual(&s, mu).unwrap().max <= bound);
        }
        assert!(gauge_check(&s).unwrap().max() <= bound);
    }
}

#[test]
fn perturbed_conformal_factor_breaks_every_connection() {
    for s in [cyl(129), sphere(129)] {
        let g = perturbed(&derive_geometry(&s).unwrap());
        let closed = build_connection(&g, System::Closed, c(1.0, 0.0)).unwrap();
        assert!(zero_curvature_residual(&closed).max >= 1e-2);
        for lambda in lambdas() {
            for system in [System::Spectral, System::SlTwo] {
                let pair = build_connection(&g, system, lambda).unwrap();
                assert!(zero_curvature_residual(&pair).max >= 1e-2, "{system} at {lambda}");
            }
        }
    }
}

#[test]
fn perturbed_spinors_break_mu_lax_and_gauge() {
    for s in [cyl(129), sphere(129)] {
        let bad = s.scale_psi1(1.1).unwrap();
        for mu in [c(2.0, 0.0), c(0.0, 3.0)] {
            assert!(mu_lax_residual(&bad, mu).unwrap().max >= 1e-2);
        }
        assert!(gauge_check_scaled(&s, 2.0).unwrap().max() >= 1e-2);
    }
}

#[test]
fn parameter_preconditions() {
    let s = cyl(17);
    let g = derive_geometry(&s).unwrap();
    assert!(matches!(build_connection(&g, System::Spectral, c(2.0, 0.0)), Err(Error::BadParameter(_))));
    assert!(matches!(build_connection(&g, System::MuLax, c(2.0, 0.0)), Err(Error::LabelMismatch(_))));
    for mu in [c(1.0, 0.0), c(-1.0, 0.0)] {
        assert!(matches!(mu_lax_residual(&s, mu), Err(Error::SingularParameter(_))));
    }
    let sl2 = build_connection(&g, System::SlTwo, c(1.0, 0.0)).unwrap();
    assert!(matches!(linear_problem_residual(&s, &sl2), Err(Error::LabelMismatch(_))));
}

#[test]
fn cmc1_systems_reject_other_mean_curvature() {
    let s = cyl(17);
    let half = s.with_p(s.p().map(|p| 0.5 * p)).unwrap();
    let g = derive_geometry(&half).unwrap();
    assert!(build_connection(&g, System::Closed, c(1.0, 0.0)).is_ok());
    for system in [System::Spectral, System::SlTwo] {
        assert!(matches!(build_connection(&g, system, c(1.0, 0.0)), Err(Error::NotCmc1(_))));
    }
}

#[test]
fn su2_rejects_non_unitary_pairs() {
    assert!(matches!(SU2Element::new(c(1.0, 0.0), c(1.0, 0.0)), Err(Error::NotUnitary(_))));
    let g = SU2Element::normalized(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    assert!((g.alpha().norm_sqr() + g.beta().norm_sqr() - 1.0).abs() < 1e-15);
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn invariants_match(a: &SpinorData, b: &SpinorData) -> Result<(), TestCaseError> {
    let (ga, gb) = (derive_geometry(a).unwrap(), derive_geometry(b).unwrap());
    for (i, j, q) in ga.q.iter_valid() {
        prop_assert!(rel_close(q, gb.q.at(i, j)));
        prop_assert!(rel_close(ga.mean_curvature.at(i, j), gb.mean_curvature.at(i, j)));
        prop_assert!(rel_close(ga.i_coeff.at(i, j), gb.i_coeff.at(i, j)));
        prop_assert!(rel_close(ga.ii_mixed.at(i, j), gb.ii_mixed.at(i, j)));
    }
    for (i, j, v) in ga.hopf.iter_valid() {
        prop_assert!(rel_close(v.norm(), gb.hopf.at(i, j).norm()));
        prop_assert!(rel_close(ga.ii_dz2.at(i, j).norm(), gb.ii_dz2.at(i, j).norm()));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn su2_preserves_invariants(a in (-1.0f64..1.0, -1.0f64..1.0), b in (-1.0f64..1.0, -1.0f64..1.0)) {
        prop_assume!(a.0.hypot(a.1) + b.0.hypot(b.1) > 1e-3);
        let g = SU2Element::normalized(c(a.0, a.1), c(b.0, b.1)).unwrap();
        for s in [cyl(33), sphere(33)] {
            invariants_match(&s, &su2_transform(&s, &g).unwrap())?;
        }
    }
}
