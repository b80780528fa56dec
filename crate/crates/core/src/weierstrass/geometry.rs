use super::SpinorData;
use crate::cgrid::{d_dbar_real, wirtinger_d, ComplexField, GridChart, RealField, Vec3Field};
use crate::error::{Error, Result};

/// Relative floor below which `q` counts as degenerate.
pub const Q_FLOOR: f64 = 1e-12;

/// Everything the identities need about the surface behind a [`SpinorData`].
#[derive(Debug, Clone)]
pub struct GeometryBundle {
    /// Conformal factor `q = |ψ₁|² + |ψ₂|²`, masked below the floor.
    pub q: RealField,
    /// Mean curvature `H = p/q`.
    pub mean_curvature: RealField,
    /// Hopf differential coefficient `Q = 2(ψ₂∂ψ̄₁ − ψ̄₁∂ψ₂)`.
    pub hopf: ComplexField,
    /// Unit normal from the closed spinor formula.
    pub n: Vec3Field,
    /// Radius vector, present once integrated.
    pub r: Option<Vec3Field>,
    /// Gaussian curvature `−(1/q²)∂∂̄ ln q`, masked on a two-point edge band.
    pub gauss_curvature: RealField,
    /// First fundamental form `4q² dz dz̄`.
    pub i_coeff: RealField,
    /// `dz²` coefficient of the second fundamental form (equals `Q`).
    pub ii_dz2: ComplexField,
    /// `dz dz̄` coefficient of the second fundamental form, `4Hq²`.
    pub ii_mixed: RealField,
}

impl GeometryBundle {
    pub fn chart(&self) -> &GridChart {
        self.q.chart()
    }

    pub fn with_surface(mut self, r: Vec3Field) -> Self {
        self.r = Some(r);
        self
    }

    /// `max |H − 1|` over unmasked points.
    pub fn cmc1_deviation(&self) -> f64 {
        self.mean_curvature.map(|h| h - 1.0).max_magnitude()
    }

    /// `max |Q|` over unmasked points.
    pub fn max_hopf(&self) -> f64 {
        self.hopf.max_magnitude()
    }
}

/// Derives `q`, `H`, `Q`, `n`, `K` and the fundamental forms from spinor data.
pub fn derive_geometry(s: &SpinorData) -> Result<GeometryBundle> {
    let q_raw = s.q();
    let floor = Q_FLOOR * q_raw.max_magnitude();
    if q_raw.max_magnitude() == 0.0 {
        return Err(Error::EmptyGeometry);
    }
    let q = q_raw.mask_where(|_, _, v| v < floor || v == 0.0);
    if q.is_empty() {
        return Err(Error::EmptyGeometry);
    }
    let mean_curvature = s.p() / &q;

    let (psi1, psi2) = s.differentiable();
    let d_psi1_bar = wirtinger_d(&psi1.conj());
    let d_psi2 = wirtinger_d(&psi2);
    let hopf = ComplexField::combine(s.chart(), &[&psi1, &psi2, &d_psi1_bar, &d_psi2, &q], |i, j| {
        2.0 * (psi2.at(i, j) * d_psi1_bar.at(i, j) - psi1.at(i, j).conj() * d_psi2.at(i, j))
    });

    let n = s.normal().and_mask(q.mask());
    let lap = d_dbar_real(&q.ln());
    let gauss_curvature = lap.zip_with(&q, |l, q| -l / (q * q)).trimmed(2);
    let i_coeff = q.map(|q| 4.0 * q * q);
    let ii_mixed = mean_curvature.zip_with(&q, |h, q| 4.0 * h * q * q);
    let ii_dz2 = hopf.clone();
    Ok(GeometryBundle { q, mean_curvature, hopf, n, r: None, gauss_curvature, i_coeff, ii_dz2, ii_mixed })
}
