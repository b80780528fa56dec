//! Complex three-vectors of fields, e.g. `∂r`, `∂n`.
//!
//! Products are bilinear (no conjugation), matching `(a, b) = Σ aₖbₖ`.

use num_complex::Complex64;

use super::field::{ComplexField, Masked, RealField, Vec3Field};

pub type CVec3 = [ComplexField; 3];

pub fn complexify(v: &Vec3Field) -> CVec3 {
    [0, 1, 2].map(|k| v.component(k).to_complex())
}

/// Bilinear dot product.
pub fn dot(a: &CVec3, b: &CVec3) -> ComplexField {
    let chart = *a[0].chart();
    ComplexField::combine(&chart, &[&a[0] as &dyn Masked, &a[1], &a[2], &b[0], &b[1], &b[2]], |i, j| {
        a[0].at(i, j) * b[0].at(i, j) + a[1].at(i, j) * b[1].at(i, j) + a[2].at(i, j) * b[2].at(i, j)
    })
}

pub fn cross(a: &CVec3, b: &CVec3) -> CVec3 {
    let c = |k: usize, l: usize| &(&a[k] * &b[l]) - &(&a[l] * &b[k]);
    [c(1, 2), c(2, 0), c(0, 1)]
}

pub fn add(a: &CVec3, b: &CVec3) -> CVec3 {
    [0, 1, 2].map(|k| &a[k] + &b[k])
}

pub fn sub(a: &CVec3, b: &CVec3) -> CVec3 {
    [0, 1, 2].map(|k| &a[k] - &b[k])
}

/// `s·v` for a scalar field `s`.
pub fn scale(s: &ComplexField, v: &CVec3) -> CVec3 {
    [0, 1, 2].map(|k| s * &v[k])
}

pub fn scale_const(s: Complex64, v: &CVec3) -> CVec3 {
    [0, 1, 2].map(|k| v[k].scale(s))
}

/// Pointwise Hermitian length `sqrt(Σ|vₖ|²)`.
pub fn norm(v: &CVec3) -> RealField {
    let chart = *v[0].chart();
    RealField::combine(&chart, &[&v[0] as &dyn Masked, &v[1], &v[2]], |i, j| {
        (v[0].at(i, j).norm_sqr() + v[1].at(i, j).norm_sqr() + v[2].at(i, j).norm_sqr()).sqrt()
    })
}
