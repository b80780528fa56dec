mod common;

use cmc_core::cgrid::{GridChart, Mask, RealField};
use cmc_core::sigma::{
    charge_identity_residual, cp1_residual, gauss_map, general_h_residual, instanton, instanton_on, qr_from_rho,
    sample_map, sigma_residual, so3_residual, spinors_from_rho, topological_charge, GaussMapField, RationalMap,
};
use cmc_core::weierstrass::families::plane;
use cmc_core::weierstrass::{derive_geometry, dirac_residual, gauss_codazzi_residual};
use cmc_core::{Error, Result};
use common::{c, cyl, sphere, sphere_chart, tol};

fn power(k: usize) -> RationalMap {
    let mut num = vec![c(0.0, 0.0); k + 1];
    num[k] = c(1.0, 0.0);
    RationalMap::polynomial(num).unwrap()
}

fn disk_charge(map: &RationalMap, radius: f64, half_width: f64, n: usize) -> Result<f64> {
    let chart = GridChart::square(-half_width, half_width, n)?;
    let disk = Mask::from_shape_fn(chart.shape(), |(i, j)| chart.z(i, j).norm() <= radius);
    let s = instanton_on(map, &chart, Some(&disk))?;
    topological_charge(&derive_geometry(&s)?.n)
}

#[test]
fn instanton_gauss_map_is_conjugate_rho() {
    let s = sphere(65);
    let gm = gauss_map(&s);
    for (i, j, v) in gm.rho.iter_valid() {
        let z = s.chart().z(i, j);
        assert!((v - c(0.0, 1.0) * z.conj()).norm() < 1e-12 * (1.0 + z.norm()));
    }
    assert!(gm.stereographic.unwrap().max < 1e-12);
}

#[test]
fn instanton_is_a_unit_sphere_with_vanishing_hopf() {
    let s = sphere(129);
    let g = derive_geometry(&s).unwrap();
    let h = s.chart().h();
    assert!(g.cmc1_deviation() < 1e-12);
    assert!(g.max_hopf() <= 10.0 * h * h);
    // q = 1/(1 + |z|²) for ρ = z.
    for (i, j, q) in g.q.iter_valid() {
        assert!((q - 1.0 / (1.0 + s.chart().z(i, j).norm_sqr())).abs() < 1e-14);
    }
}

#[test]
fn charge_on_a_disk_is_the_covered_area_fraction() {
    // Stencils drop the one-cell rim of the disk, so radii are chosen where the
    // density there is small.
    // ρ = z^k maps |z| ≤ R onto a cap of area fraction R^2k/(1 + R^2k), covered k times.
    for (k, radius) in [(1usize, 3.0), (2, 3.0)] {
        let q = disk_charge(&power(k), radius, 4.0, 257).unwrap();
        let r2k = (radius * radius).powi(k as i32);
        let expected = k as f64 * r2k / (1.0 + r2k);
        assert!((q - expected).abs() < 0.02, "k = {k}: {q} vs {expected}");
    }
}

#[test]
fn constant_normal_has_zero_charge() {
    let s = plane(&GridChart::square(-1.0, 1.0, 33).unwrap());
    assert_eq!(topological_charge(&derive_geometry(&s).unwrap().n).unwrap(), 0.0);
}

#[test]
fn charge_densities_agree_pointwise() {
    let s = sphere(129);
    let g = derive_geometry(&s).unwrap();
    let ci = charge_identity_residual(&g.n, &g.q).unwrap();
    assert!(ci.pointwise.max <= tol(s.chart().h(), 1));
}

#[test]
fn sigma_residual_converges_through_the_poles() {
    // ψ₂ = sin(kx) vanishes on interior lines, so ρ has poles there.
    let coarse = sigma_residual(&gauss_map(&cyl(65))).max;
    let s = cyl(129);
    let gm = gauss_map(&s);
    assert!(gm.pole_mask.iter().any(|&p| p));
    let fine = sigma_residual(&gm).max;
    assert!(fine <= tol(s.chart().h(), 2));
    assert!(coarse / fine > 3.0, "ratio {}", coarse / fine);
}

#[test]
fn general_h_equation_holds() {
    for s in [cyl(129), sphere(129)] {
        let g = derive_geometry(&s).unwrap();
        let st = general_h_residual(&gauss_map(&s), &g.mean_curvature).unwrap();
        assert!(st.max <= tol(s.chart().h(), 2));
    }
}

#[test]
fn hopf_and_ratio_from_rho_match_spinors() {
    let s = cyl(129);
    let g = derive_geometry(&s).unwrap();
    let (q, r) = qr_from_rho(&gauss_map(&s));
    let h = s.chart().h();
    for (i, j, v) in q.iter_valid() {
        if s.chart().edge_distance(i, j) >= 2 {
            assert!((v - g.hopf.at(i, j)).norm() <= tol(h, 2));
        }
    }
    for (_, _, v) in r.iter_valid() {
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn from_rho_rebuilds_instanton_invariants() {
    let chart = sphere_chart(129);
    let gm = GaussMapField::from_field(sample_map(&RationalMap::identity(), &chart, None, true).unwrap());
    let rebuilt = spinors_from_rho(&gm, &RealField::constant(&chart, 1.0)).unwrap();
    let a = derive_geometry(&rebuilt).unwrap();
    let b = derive_geometry(&instanton(&RationalMap::identity(), &chart).unwrap()).unwrap();
    let h = chart.h();
    for (i, j, q) in a.q.iter_valid() {
        assert!((q - b.q.at(i, j)).abs() <= tol(h, 2));
    }
    for (i, j, v) in a.hopf.iter_valid() {
        assert!((v.norm() - b.hopf.at(i, j).norm()).abs() <= tol(h, 2));
    }
}

/// `ρ(z) = conj((z − 1)/(z − 2i))`: `∂ρ̄` is not constant, so the stencil
/// derivative behind the spinors has a different error on the chart edge.
#[test]
fn from_rho_with_stencil_derivative_converges() {
    let map = RationalMap::new(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 2.0), c(1.0, 0.0)]).unwrap();
    let gauss = |n: usize| {
        let chart = GridChart::square(-1.5, 1.5, n).unwrap();
        let gm = GaussMapField::from_field(sample_map(&map, &chart, None, true).unwrap());
        let s = spinors_from_rho(&gm, &RealField::constant(&chart, 1.0)).unwrap();
        let g = derive_geometry(&s).unwrap();
        let dirac = dirac_residual(&s).max();
        let gauss = gauss_codazzi_residual(&g).max();
        assert!(dirac <= tol(chart.h(), 2) && gauss <= tol(chart.h(), 2), "n = {n}: {dirac:.3e}, {gauss:.3e}");
        gauss
    };
    assert!(gauss(65) / gauss(129) > 3.5);
}

#[test]
fn sigma_models_hold_on_the_cylinder() {
    let s = cyl(129);
    let h = s.chart().h();
    let so3 = so3_residual(&derive_geometry(&s).unwrap().n).unwrap();
    assert!(so3.residual.max <= tol(h, 1));
    assert!(cp1_residual(&s).max() <= tol(h, 1));
}

#[test]
fn pole_on_a_kept_grid_point_is_reported() {
    let inv = RationalMap::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let chart = sphere_chart(65);
    assert!(matches!(instanton(&inv, &chart), Err(Error::PoleOnGrid(32, 32))));
    let annulus = Mask::from_shape_fn(chart.shape(), |(i, j)| chart.z(i, j).norm() > 0.5);
    let s = instanton_on(&inv, &chart, Some(&annulus)).unwrap();
    assert!(!s.mask()[[32, 32]]);
}
