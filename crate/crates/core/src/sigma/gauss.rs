use num_complex::Complex64;

use crate::cgrid::{
    continue_sqrt, d_dbar, wirtinger_d, wirtinger_d_real, wirtinger_dbar, ComplexField, Field, Mask, RealField,
    ResidualStat, Sample,
};
use crate::error::{Error, Result};
use crate::weierstrass::{SpinorData, COMPOSED_BAND};

/// Relative floor on `|ψ₂|` below which the stereographic chart is dropped.
pub const POLE_FLOOR: f64 = 1e-8;

/// Centres of the rotated stereographic charts: the octahedron vertices
/// `0, ±1, ±i` and `∞` of the Riemann sphere.
///
/// Chart `p` is `ρ ↦ (ρ − p)/(1 + p̄ρ)` (`1/ρ` for `∞`), a rotation of S². The
/// sigma-model equations are covariant under rotations and `Q`, `R` are
/// invariant, so every identity can be evaluated in the chart where the point
/// sits closest to the centre (`|ρ_c| < 0.52` everywhere). This keeps
/// derivatives of `ρ` bounded even where the north-pole chart blows up.
pub const CHART_CENTERS: [Option<Complex64>; 6] = [
    Some(Complex64::new(0.0, 0.0)),
    Some(Complex64::new(1.0, 0.0)),
    Some(Complex64::new(-1.0, 0.0)),
    Some(Complex64::new(0.0, 1.0)),
    Some(Complex64::new(0.0, -1.0)),
    None,
];

/// Rotated chart values are masked beyond this modulus.
const CHART_RADIUS: f64 = 1.0;

/// Complex Gauss map `ρ` in the stereographic chart from the north pole, with
/// its image `1/ρ` in the chart from the south pole.
#[derive(Debug, Clone)]
pub struct GaussMapField {
    pub rho: ComplexField,
    /// `1/ρ`; finite where `ρ` has a pole.
    pub south: ComplexField,
    /// Points where the north chart degenerates (`|ψ₂|` below the pole floor).
    pub pole_mask: Mask,
    /// `|iψ̄₁/ψ₂ − (n₁ + in₂)/(1 − n₃)|` where `|ρ| ≤ 1`, when built from spinors.
    pub stereographic: Option<ResidualStat>,
}

impl GaussMapField {
    /// Wraps an arbitrary `ρ` field; `1/ρ` is masked where `ρ = 0`.
    pub fn from_field(rho: ComplexField) -> Self {
        let pole_mask = Mask::from_elem(rho.chart().shape(), false);
        let south = rho.map(|v| Complex64::new(1.0, 0.0) / v);
        Self { rho, south, pole_mask, stereographic: None }
    }

    /// `ρ` in the chart centred at `center`, masked beyond [`CHART_RADIUS`].
    fn rotated(&self, center: Option<Complex64>) -> ComplexField {
        let one = Complex64::new(1.0, 0.0);
        ComplexField::from_index_fn(self.rho.chart(), |i, j| {
            let north = self.rho.get(i, j).filter(|v| v.norm() <= 1.0);
            let v = match (center, north) {
                (None, _) => self.south.get(i, j)?,
                (Some(p), Some(r)) => (r - p) / (one + p.conj() * r),
                (Some(p), None) => {
                    let s = self.south.get(i, j)?;
                    (one - p * s) / (s + p.conj())
                }
            };
            (v.norm() <= CHART_RADIUS).then_some(v)
        })
    }

    /// For each point, `f` evaluated in the chart where `|ρ_c|` is smallest.
    fn in_best_chart<T: Sample>(&self, f: impl Fn(&ComplexField) -> Field<T>) -> Field<T> {
        let charts: Vec<(ComplexField, Field<T>)> = CHART_CENTERS
            .iter()
            .map(|&c| {
                let r = self.rotated(c);
                let v = f(&r);
                (r, v)
            })
            .collect();
        Field::from_index_fn(self.rho.chart(), |i, j| {
            charts
                .iter()
                .filter_map(|(r, v)| Some((r.get(i, j)?.norm(), v.get(i, j)?)))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, v)| v)
        })
    }
}

/// `ρ = iψ̄₁/ψ₂`, cross-checked against `(n₁ + in₂)/(1 − n₃)`.
pub fn gauss_map(s: &SpinorData) -> GaussMapField {
    let floor = POLE_FLOOR * s.psi2().max_magnitude();
    let floor1 = POLE_FLOOR * s.psi1().max_magnitude();
    let i = Complex64::i();
    let nan = Complex64::new(f64::NAN, 0.0);
    let pole_mask =
        Mask::from_shape_fn(s.chart().shape(), |(a, b)| s.mask()[[a, b]] && s.psi2().at(a, b).norm() < floor);
    let rho = s.psi1().zip_with(s.psi2(), |a, b| if b.norm() < floor { nan } else { i * a.conj() / b });
    let south = s.psi1().zip_with(s.psi2(), |a, b| if a.norm() < floor1 { nan } else { -i * b / a.conj() });
    let n = s.normal();
    let stereo = RealField::combine(s.chart(), &[&rho, &n], |a, b| {
        let [n1, n2, n3] = n.at(a, b);
        (rho.at(a, b) - Complex64::new(n1, n2) / (1.0 - n3)).norm()
    });
    let stereographic = Some(ResidualStat::of(&stereo.mask_where(|a, b, _| rho.at(a, b).norm() > 1.0), 0));
    GaussMapField { rho, south, pole_mask, stereographic }
}

fn sigma_expr(rho: &ComplexField) -> ComplexField {
    let d = wirtinger_d(rho);
    let db = wirtinger_dbar(rho);
    let dd = d_dbar(rho);
    ComplexField::combine(rho.chart(), &[rho, &d, &db, &dd], |i, j| {
        let r = rho.at(i, j);
        dd.at(i, j) - 2.0 * r.conj() * d.at(i, j) * db.at(i, j) / (1.0 + r.norm_sqr())
    })
}

/// `|∂∂̄ρ − 2ρ̄∂ρ∂̄ρ/(1 + |ρ|²)|`, each point in its best chart.
pub fn sigma_residual(rho: &GaussMapField) -> ResidualStat {
    ResidualStat::of(&rho.in_best_chart(sigma_expr), COMPOSED_BAND)
}

/// `|(∂∂̄ρ − 2ρ̄∂ρ∂̄ρ/(1 + |ρ|²))H − ∂H ∂̄ρ|`, each point in its best chart.
pub fn general_h_residual(rho: &GaussMapField, h: &RealField) -> Result<ResidualStat> {
    if rho.rho.chart() != h.chart() {
        return Err(Error::ChartMismatch);
    }
    let dh = wirtinger_d_real(h);
    let hc = h.to_complex();
    let res = rho.in_best_chart(|r| &(&sigma_expr(r) * &hc) - &(&dh * &wirtinger_dbar(r)));
    Ok(ResidualStat::of(&res, COMPOSED_BAND))
}

fn q_chart(r: &ComplexField) -> ComplexField {
    let d = wirtinger_d(r);
    let d_bar = wirtinger_d(&r.conj());
    ComplexField::combine(r.chart(), &[r, &d, &d_bar], |i, j| {
        let den = 1.0 + r.at(i, j).norm_sqr();
        2.0 * d.at(i, j) * d_bar.at(i, j) / (den * den)
    })
}

fn r_chart(r: &ComplexField) -> RealField {
    let d = wirtinger_d(r);
    let d_bar = wirtinger_d(&r.conj());
    let floor = 1e-12 * d.max_magnitude().max(d_bar.max_magnitude());
    d_bar.zip_with(&d, |a, b| if b.norm() <= floor { f64::NAN } else { a.norm() / b.norm() })
}

/// `Q = 2∂ρ∂ρ̄/(1 + |ρ|²)²` and `R = |∂ρ̄/∂ρ|`; `R` is masked where `∂ρ` vanishes.
///
/// Both are invariant under rotations of the sphere and are evaluated in each
/// point's best chart, so they stay defined across the pole of `ρ`.
pub fn qr_from_rho(rho: &GaussMapField) -> (ComplexField, RealField) {
    (rho.in_best_chart(q_chart), rho.in_best_chart(r_chart))
}

/// Spinors with Gauss map `ρ` and mean curvature `H`:
/// `ψ₂ = √(i∂ρ̄)/(√H(1 + |ρ|²))`, `ψ₁ = ρ̄·√(i∂̄ρ)/(√H(1 + |ρ|²))`, `p = |∂ρ̄|/(1 + |ρ|²)`.
///
/// `∂ρ̄` comes from the stencil. The edge row, where it is one-sided, is
/// dropped: its error differs from the interior one, and the jump would
/// surface as an O(h) error in every derivative of the spinors. Use
/// [`spinors_from_rho_with`] when `∂ρ̄` is known exactly.
pub fn spinors_from_rho(rho: &GaussMapField, h: &RealField) -> Result<SpinorData> {
    let d_bar = wirtinger_d(&rho.rho.conj()).trimmed(1);
    spinors_from_rho_with(rho, &d_bar, h)
}

/// [`spinors_from_rho`] with a given `∂ρ̄`.
///
/// `√(i∂ρ̄)` is branch-continued; `√(i∂̄ρ)` is taken as `i·conj(√(i∂ρ̄))`, the
/// root that makes `iψ̄₁/ψ₂ = ρ` hold exactly. Fails with `BranchAmbiguity`
/// when the continuation jumps, which happens where `∂ρ̄` winds around zero.
pub fn spinors_from_rho_with(rho: &GaussMapField, d_bar: &ComplexField, h: &RealField) -> Result<SpinorData> {
    let r = &rho.rho;
    if r.chart() != h.chart() || r.chart() != d_bar.chart() {
        return Err(Error::ChartMismatch);
    }
    if h.iter_valid().any(|(_, _, v)| v <= 0.0) {
        return Err(Error::BadParameter("mean curvature must be positive".into()));
    }
    let w = d_bar.scale(Complex64::i());
    let branch = continue_sqrt(&w);
    if let Some((a, b)) = branch.ambiguous {
        return Err(Error::BranchAmbiguity(a, b));
    }
    let s = branch.root;
    let i = Complex64::i();
    let psi2 = ComplexField::combine(r.chart(), &[r, &s, h], |a, b| {
        s.at(a, b) / (h.at(a, b).sqrt() * (1.0 + r.at(a, b).norm_sqr()))
    });
    let psi1 = ComplexField::combine(r.chart(), &[r, &s, h], |a, b| {
        let rv = r.at(a, b);
        rv.conj() * i * s.at(a, b).conj() / (h.at(a, b).sqrt() * (1.0 + rv.norm_sqr()))
    });
    let p = RealField::combine(r.chart(), &[r, d_bar], |a, b| d_bar.at(a, b).norm() / (1.0 + r.at(a, b).norm_sqr()));
    SpinorData::new(psi1, psi2, p)
}
