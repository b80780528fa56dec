mod common;

use cmc_core::cgrid::{GridChart, RealField, Vec3Field};
use cmc_core::weierstrass::families::{conformal_cylinder, cylinder, plane};
use cmc_core::weierstrass::{
    derive_geometry, dirac_residual, gauss_codazzi_residual, integrate_surface, normal_equation_residual,
    scalar_product_residuals, SpinorData,
};
use cmc_core::Error;
use common::{c, cyl, cylinder_chart, sphere, tol};
use num_complex::Complex64;

/// Largest distance between `r + s·n` and its mean over the valid points.
fn focal_spread(r: &Vec3Field, n: &Vec3Field, s: f64) -> f64 {
    let pts: Vec<[f64; 3]> = r
        .iter_valid()
        .filter_map(|(i, j, v)| n.get(i, j).map(|m| [v[0] + s * m[0], v[1] + s * m[1], v[2] + s * m[2]]))
        .collect();
    let k = pts.len() as f64;
    let mean = [0, 1, 2].map(|a| pts.iter().map(|p| p[a]).sum::<f64>() / k);
    pts.iter().map(|p| (0..3).map(|a| (p[a] - mean[a]).powi(2)).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

#[test]
fn cylinder_invariants_match_closed_form() {
    for r in [0.5, 1.0, 1.3] {
        let s = cylinder(r, &cylinder_chart(129)).unwrap();
        let g = derive_geometry(&s).unwrap();
        let h = s.chart().h();
        for (_, _, q) in g.q.iter_valid() {
            assert!((q - r * r).abs() < 1e-14);
        }
        assert!(g.cmc1_deviation() < 1e-14);
        let expected_q = 2.0 * r.powi(4);
        for (_, _, v) in g.hopf.iter_valid() {
            assert!((v - c(expected_q, 0.0)).norm() < tol(h, 2), "Q = {v}");
        }
    }
}

#[test]
fn conformal_cylinder_scales_q_and_hopf() {
    let chart = GridChart::square(0.0, 2.0, 129).unwrap();
    let f = |w: Complex64| w + 0.1 * w * w;
    let df = |w: Complex64| 1.0 + 0.2 * w;
    let s = conformal_cylinder(1.0, &chart, f, df).unwrap();
    let g = derive_geometry(&s).unwrap();
    for (i, j, q) in g.q.iter_valid() {
        assert!((q - df(chart.z(i, j)).norm()).abs() < 1e-12);
    }
    assert!(g.cmc1_deviation() < 1e-12);
    let band = 2;
    for (i, j, v) in g.hopf.iter_valid() {
        if chart.edge_distance(i, j) >= band {
            let d = df(chart.z(i, j));
            assert!((v - 2.0 * d * d).norm() < tol(chart.h(), 2));
        }
    }
}

#[test]
fn cylinder_parameter_must_be_positive() {
    for r in [0.0, -1.0, f64::NAN] {
        assert!(matches!(cylinder(r, &cylinder_chart(9)), Err(Error::BadParameter(_))));
    }
}

#[test]
fn plane_is_exact() {
    let s = plane(&GridChart::square(-1.0, 1.0, 17).unwrap());
    assert_eq!(dirac_residual(&s).max(), 0.0);
    let g = derive_geometry(&s).unwrap();
    assert_eq!(g.mean_curvature.max_magnitude(), 0.0);
    for (_, _, n) in g.n.iter_valid() {
        assert_eq!(n, [0.0, 0.0, -1.0]);
    }
}

#[test]
fn dirac_residual_is_second_order() {
    for make in [cyl as fn(usize) -> SpinorData, sphere] {
        let coarse = dirac_residual(&make(65)).max();
        let fine = dirac_residual(&make(129)).max();
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn scaled_spinor_breaks_dirac() {
    let s = cyl(129);
    let h = s.chart().h();
    assert!(dirac_residual(&s).max() <= tol(h, 2));
    assert!(dirac_residual(&s.scale_psi1(1.1).unwrap()).max() > tol(h, 2));
}

#[test]
fn cylinder_surface_has_radius_one_half() {
    let s = cyl(129);
    let surf = integrate_surface(&s, (64, 64)).unwrap();
    assert_eq!(surf.r.get(64, 64), Some([0.0, 0.0, 0.0]));
    let n = s.normal();
    // The focal points r ± n/2 of each y-line collapse onto the axis.
    let chart = *s.chart();
    let worst = (0..chart.ny())
        .map(|j| {
            let row = RealField::from_index_fn(&chart, |_, jj| (jj == j).then_some(0.0));
            let r = surf.r.clone().and_mask(row.mask());
            focal_spread(&r, &n, -0.5).min(focal_spread(&r, &n, 0.5))
        })
        .fold(0.0, f64::max);
    assert!(worst < 5e-3, "axis spread {worst}");
}

#[test]
fn sphere_surface_focal_point_is_its_center() {
    let s = sphere(129);
    let surf = integrate_surface(&s, (64, 64)).unwrap();
    let n = s.normal();
    let spread = focal_spread(&surf.r, &n, 1.0).min(focal_spread(&surf.r, &n, -1.0));
    assert!(spread < 5e-3, "center spread {spread}");
}

#[test]
fn gauss_curvature_of_exact_families() {
    let g = derive_geometry(&sphere(129)).unwrap();
    for (_, _, k) in g.gauss_curvature.iter_valid() {
        assert!((k - 1.0).abs() < 1e-2);
    }
    let g = derive_geometry(&cyl(129)).unwrap();
    assert!(g.gauss_curvature.max_magnitude() < 1e-10);
}

#[test]
fn identities_hold_on_both_families() {
    for s in [cyl(129), sphere(129)] {
        let r = integrate_surface(&s, s.chart().center()).unwrap().r;
        let g = derive_geometry(&s).unwrap().with_surface(r);
        let h = s.chart().h();
        assert!(gauss_codazzi_residual(&g).max() <= tol(h, 2));
        assert!(normal_equation_residual(&g).unwrap().max <= tol(h, 2));
        let sp = scalar_product_residuals(&g, &s);
        for (name, stat) in &sp.entries {
            if name.starts_with("algebraic") {
                assert!(stat.max < 1e-13, "{name}: {}", stat.max);
            }
        }
    }
}

#[test]
fn normal_is_unit_and_tangent() {
    let s = sphere(65);
    for (_, _, v) in s.normal().iter_valid() {
        assert!(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn masked_base_is_rejected() {
    let s = cyl(17);
    let mut mask = s.mask().clone();
    mask[[8, 8]] = false;
    let s = s.and_mask(&mask);
    assert!(matches!(integrate_surface(&s, (8, 8)), Err(Error::MaskedBase(8, 8))));
}

#[test]
fn mismatched_charts_are_rejected() {
    let a = cyl(17);
    let other = GridChart::square(0.0, 1.0, 17).unwrap();
    let p = RealField::constant(&other, 1.0);
    assert!(matches!(SpinorData::new(a.psi1().clone(), a.psi2().clone(), p), Err(Error::ChartMismatch)));
}
