use num_complex::Complex64;

use crate::cgrid::{joint_mask, seam_mask, ComplexField, GridChart, Mask, Masked, RealField, Vec3Field};
use crate::error::{Error, Result};

/// Weierstrass data `(ψ₁, ψ₂, p)` on one chart with one shared mask.
///
/// Spinors are defined up to a global sign, and square-root constructions can
/// flip that sign between neighbouring samples. Quantities quadratic in `ψ`
/// (q, n, ∂r) do not care; derivatives of `ψ` itself do, so [`Self::differentiable`]
/// masks the seam along which such a flip happens.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorData {
    psi1: ComplexField,
    psi2: ComplexField,
    p: RealField,
    seam: Mask,
}

impl SpinorData {
    pub fn new(psi1: ComplexField, psi2: ComplexField, p: RealField) -> Result<Self> {
        let chart = *psi1.chart();
        if *psi2.chart() != chart || *p.chart() != chart {
            return Err(Error::ChartMismatch);
        }
        let mask = joint_mask(&chart, &[&psi1 as &dyn Masked, &psi2, &p]);
        let psi1 = psi1.and_mask(&mask);
        let psi2 = psi2.and_mask(&mask);
        let p = p.and_mask(&mask);
        let seam = seam_mask(&[&psi1, &psi2]);
        Ok(Self { psi1, psi2, p, seam })
    }

    /// CMC-1 data: `p = q = |ψ₁|² + |ψ₂|²`.
    pub fn cmc1(psi1: ComplexField, psi2: ComplexField) -> Result<Self> {
        let p = psi1.zip_with(&psi2, |a, b| a.norm_sqr() + b.norm_sqr());
        Self::new(psi1, psi2, p)
    }

    pub fn chart(&self) -> &GridChart {
        self.psi1.chart()
    }
    pub fn mask(&self) -> &Mask {
        self.psi1.mask()
    }
    pub fn psi1(&self) -> &ComplexField {
        &self.psi1
    }
    pub fn psi2(&self) -> &ComplexField {
        &self.psi2
    }
    pub fn p(&self) -> &RealField {
        &self.p
    }
    /// Samples adjacent to a sign flip of `(ψ₁, ψ₂)`.
    pub fn seam(&self) -> &Mask {
        &self.seam
    }

    /// `(ψ₁, ψ₂)` with the seam masked, safe to feed to stencils.
    pub fn differentiable(&self) -> (ComplexField, ComplexField) {
        if !self.seam.iter().any(|&s| s) {
            return (self.psi1.clone(), self.psi2.clone());
        }
        let off = self.seam.mapv(|s| !s);
        (self.psi1.clone().and_mask(&off), self.psi2.clone().and_mask(&off))
    }

    /// Same spinors with a different potential.
    pub fn with_p(&self, p: RealField) -> Result<Self> {
        Self::new(self.psi1.clone(), self.psi2.clone(), p)
    }

    /// Restricts the data to `mask`.
    pub fn and_mask(&self, mask: &Mask) -> Self {
        let psi1 = self.psi1.clone().and_mask(mask);
        let psi2 = self.psi2.clone().and_mask(mask);
        let p = self.p.clone().and_mask(mask);
        let seam = seam_mask(&[&psi1, &psi2]);
        Self { psi1, psi2, p, seam }
    }

    /// `q = |ψ₁|² + |ψ₂|²`.
    pub fn q(&self) -> RealField {
        self.psi1.zip_with(&self.psi2, |a, b| a.norm_sqr() + b.norm_sqr())
    }

    /// `∂r = (i(ψ₂² + ψ̄₁²), ψ̄₁² − ψ₂², −2ψ₂ψ̄₁)`.
    pub fn dr(&self) -> [ComplexField; 3] {
        // g receives (ψ̄₁, ψ₂)
        let f = |g: fn(Complex64, Complex64) -> Complex64| self.psi1.zip_with(&self.psi2, |a, b| g(a.conj(), b));
        [f(|a, b| Complex64::i() * (b * b + a * a)), f(|a, b| a * a - b * b), f(|a, b| -2.0 * b * a)]
    }

    /// `∂̄r`, the complex conjugate of [`Self::dr`] since `r` is real.
    pub fn dbar_r(&self) -> [ComplexField; 3] {
        self.dr().map(|c| c.conj())
    }

    /// Unit normal `(1/q)(i(ψ̄₁ψ̄₂ − ψ₁ψ₂), ψ̄₁ψ̄₂ + ψ₁ψ₂, |ψ₁|² − |ψ₂|²)`; masked where `q = 0`.
    pub fn normal(&self) -> Vec3Field {
        let chart = *self.chart();
        Vec3Field::from_index_fn(&chart, |i, j| {
            let (a, b) = (self.psi1.get(i, j)?, self.psi2.get(i, j)?);
            let q = a.norm_sqr() + b.norm_sqr();
            if q == 0.0 {
                return None;
            }
            let ab = a * b;
            let abc = ab.conj();
            Some([(Complex64::i() * (abc - ab)).re / q, (abc + ab).re / q, (a.norm_sqr() - b.norm_sqr()) / q])
        })
    }

    /// `ψ₁` multiplied by `factor`; used for negative controls.
    pub fn scale_psi1(&self, factor: f64) -> Result<Self> {
        Self::new(self.psi1.scale(Complex64::new(factor, 0.0)), self.psi2.clone(), self.p.clone())
    }
}
