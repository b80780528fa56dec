use num_complex::Complex64;

use super::RationalMap;
use crate::cgrid::{continue_sqrt, ComplexField, GridChart, Mask, RealField};
use crate::error::{Error, Result};
use crate::weierstrass::SpinorData;

/// CMC-1 data with vanishing Hopf differential built from a holomorphic `ρ`:
/// `ψ₁ = ρ·√(∂̄ρ̄)/(1 + |ρ|²)`, `ψ₂ = √(∂ρ)/(1 + |ρ|²)`, `p = |∂ρ|/(1 + |ρ|²)`.
///
/// `ρ′` comes from the quotient rule, not from stencils. `√(∂ρ)` is
/// branch-continued and `√(∂̄ρ̄)` is its conjugate. The resulting surface is
/// the unit sphere; its Gauss map in the spinor chart is `iρ̄`.
pub fn instanton(map: &RationalMap, chart: &GridChart) -> Result<SpinorData> {
    instanton_on(map, chart, None)
}

/// [`instanton`] restricted to `region` (e.g. an annulus around a pole).
///
/// Grid points closer than one cell to a pole are masked. A pole sitting
/// exactly on a grid point that `region` keeps is reported as `PoleOnGrid`.
pub fn instanton_on(map: &RationalMap, chart: &GridChart, region: Option<&Mask>) -> Result<SpinorData> {
    if let Some(m) = region {
        if m.dim() != chart.shape() {
            return Err(Error::DimensionMismatch { expected: chart.shape(), got: m.dim() });
        }
    }
    let keep = kept_points(map, chart, region, false)?;
    let rho = ComplexField::from_index_fn(chart, |i, j| keep[[i, j]].then(|| map.eval(chart.z(i, j))));
    let drho = ComplexField::from_index_fn(chart, |i, j| keep[[i, j]].then(|| map.derivative_at(chart.z(i, j))));
    let s = continue_sqrt(&drho).root;
    let psi1 = ComplexField::combine(chart, &[&rho, &s], |i, j| {
        let r = rho.at(i, j);
        r * s.at(i, j).conj() / (1.0 + r.norm_sqr())
    });
    let psi2 = ComplexField::combine(chart, &[&rho, &s], |i, j| s.at(i, j) / (1.0 + rho.at(i, j).norm_sqr()));
    let p = RealField::combine(chart, &[&rho, &drho], |i, j| drho.at(i, j).norm() / (1.0 + rho.at(i, j).norm_sqr()));
    SpinorData::new(psi1, psi2, p)
}

/// Points of `region` at least one cell away from every pole; the argument is
/// `z̄` instead of `z` when `conjugate` is set.
///
/// Fails with `PoleOnGrid` when a pole sits on a kept grid point.
fn kept_points(map: &RationalMap, chart: &GridChart, region: Option<&Mask>, conjugate: bool) -> Result<Mask> {
    if let Some(m) = region {
        if m.dim() != chart.shape() {
            return Err(Error::DimensionMismatch { expected: chart.shape(), got: m.dim() });
        }
    }
    let inside = |i: usize, j: usize| region.is_none_or(|m| m[[i, j]]);
    let poles: Vec<Complex64> = map.poles().into_iter().map(|p| if conjugate { p.conj() } else { p }).collect();
    let (hx, hy) = (chart.hx(), chart.hy());
    for pole in &poles {
        if let Some((i, j)) = chart.nearest_index(*pole) {
            let tol = 1e-9 * (1.0 + pole.norm());
            if (chart.z(i, j) - pole).norm() <= tol && inside(i, j) {
                return Err(Error::PoleOnGrid(i, j));
            }
        }
    }
    let near_pole = |z: Complex64| poles.iter().any(|p| (z.re - p.re).abs() < hx && (z.im - p.im).abs() < hy);
    Ok(Mask::from_shape_fn(chart.shape(), |(i, j)| inside(i, j) && !near_pole(chart.z(i, j))))
}

/// Samples `ρ(z̄)` (or `ρ(z)` when `conjugate` is false) on `region`, masking
/// the cells around poles. Fails with `PoleOnGrid` as [`instanton_on`] does.
pub fn sample_map(
    map: &RationalMap,
    chart: &GridChart,
    region: Option<&Mask>,
    conjugate: bool,
) -> Result<ComplexField> {
    let keep = kept_points(map, chart, region, conjugate)?;
    Ok(ComplexField::from_index_fn(chart, |i, j| {
        let z = chart.z(i, j);
        keep[[i, j]].then(|| map.eval(if conjugate { z.conj() } else { z }))
    }))
}
