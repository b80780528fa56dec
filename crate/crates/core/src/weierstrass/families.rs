//! Closed-form Weierstrass data.

use num_complex::Complex64;

use super::SpinorData;
use crate::cgrid::{continue_sqrt, ComplexField, GridChart, RealField};
use crate::error::{Error, Result};

fn check_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::BadParameter(format!("cylinder parameter r must be positive, got {r}")));
    }
    Ok(())
}

/// `ψ₁ = r cos(kx)`, `ψ₂ = r sin(kx)`, `k = −2r²`, `p = r²`.
///
/// An exact CMC-1 solution: `q = r²`, `H = 1`, `Q = 2r⁴`. The surface is a
/// circular cylinder of radius 1/2 whose axis runs along the image of the y-axis.
pub fn cylinder(r: f64, chart: &GridChart) -> Result<SpinorData> {
    check_radius(r)?;
    let k = -2.0 * r * r;
    let psi1 = ComplexField::from_fn(chart, |z| Complex64::new(r * (k * z.re).cos(), 0.0));
    let psi2 = ComplexField::from_fn(chart, |z| Complex64::new(r * (k * z.re).sin(), 0.0));
    let p = RealField::constant(chart, r * r);
    SpinorData::new(psi1, psi2, p)
}

/// The cylinder reparametrized by a holomorphic map `w ↦ f(w)`:
/// `ψ̃₁ = ψ₁(f)·conj(√f′)`, `ψ̃₂ = ψ₂(f)·√f′`, `p̃ = p(f)·|f′|`.
///
/// Still CMC-1, but now with non-constant `q = r²|f′|` and `Q = 2r⁴ f′²`.
/// `√f′` is branch-continued over the grid; points where `f` or `f′` is not
/// finite are masked.
pub fn conformal_cylinder(
    r: f64,
    chart: &GridChart,
    f: impl Fn(Complex64) -> Complex64,
    df: impl Fn(Complex64) -> Complex64,
) -> Result<SpinorData> {
    check_radius(r)?;
    let k = -2.0 * r * r;
    let w = ComplexField::from_fn(chart, f);
    let dw = ComplexField::from_fn(chart, df);
    let s = continue_sqrt(&dw).root;
    let x = w.re();
    let psi1 = ComplexField::combine(chart, &[&x, &s], |i, j| r * (k * x.at(i, j)).cos() * s.at(i, j).conj());
    let psi2 = ComplexField::combine(chart, &[&x, &s], |i, j| r * (k * x.at(i, j)).sin() * s.at(i, j));
    let p = dw.abs().scale(r * r).and_mask(x.mask());
    SpinorData::new(psi1, psi2, p)
}

/// `ψ₁ = 0`, `ψ₂ = 1`, `p = 0`: the flat plane with normal `(0, 0, −1)`.
pub fn plane(chart: &GridChart) -> SpinorData {
    SpinorData::new(
        ComplexField::constant(chart, Complex64::new(0.0, 0.0)),
        ComplexField::constant(chart, Complex64::new(1.0, 0.0)),
        RealField::constant(chart, 0.0),
    )
    .expect("constant fields share the chart")
}
