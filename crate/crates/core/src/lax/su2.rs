use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weierstrass::SpinorData;

/// Unit pair `(α, β)` acting by `ζ₁ = αψ₁ + βψ̄₂`, `ζ₂ = −βψ̄₁ + αψ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Element {
    alpha: Complex64,
    beta: Complex64,
}

impl SU2Element {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitary(n));
        }
        Ok(Self { alpha, beta })
    }

    pub fn identity() -> Self {
        Self { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    /// Normalizes an arbitrary non-zero pair onto the unit sphere.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotUnitary(n * n));
        }
        Self::new(alpha / n, beta / n)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }
    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// Applies `g` to the spinors; `p` is unchanged.
pub fn su2_transform(s: &SpinorData, g: &SU2Element) -> Result<SpinorData> {
    let (a, b) = (g.alpha, g.beta);
    let z1 = s.psi1().zip_with(s.psi2(), |p1, p2| a * p1 + b * p2.conj());
    let z2 = s.psi1().zip_with(s.psi2(), |p1, p2| -b * p1.conj() + a * p2);
    SpinorData::new(z1, z2, s.p().clone())
}
