//! Reciprocal change of variables `dη = √Q dz` and the decoupled
//! sinh-Gordon form `(ln R)_{ηη̄} = 1/R − R` with `R = 2q²/|Q|`.
//!
//! The sinh-Gordon residual is evaluated in `z`: because `∂̄Q = 0`,
//! `(ln R)_{ηη̄} = (1/|Q|)∂∂̄ ln R`, so no resampling onto an `η` grid is needed.

use num_complex::Complex64;
use serde::Serialize;

use crate::cgrid::{
    continue_sqrt, d_dbar_real, sweep_antiderivative, wirtinger_d, wirtinger_dbar, ComplexField, GridChart, Mask,
    RealField, ResidualReport, ResidualStat,
};
use crate::error::{Error, Result};
use crate::weierstrass::{GeometryBundle, COMPOSED_BAND};

/// `|Q|` below `UMBILIC_FLOOR·max|Q|` counts as umbilic.
pub const UMBILIC_FLOOR: f64 = 1e-6;

/// Largest `max |H − 1|` accepted as CMC-1.
pub const CMC1_TOLERANCE: f64 = 1e-6;

/// Edge band trimmed from residuals that take two derivatives of `Q`-dependent
/// fields; `Q` itself is already one stencil deep.
pub const DECOUPLE_BAND: usize = COMPOSED_BAND + 1;

/// Output of the reciprocal transformation.
#[derive(Debug, Clone)]
pub struct DecoupledData {
    /// `η(z)` with `η(base) = 0`.
    pub eta: ComplexField,
    /// `R = 2q²/|Q|`.
    pub r: RealField,
    /// The branch of `√Q` that was integrated.
    pub sqrt_q: ComplexField,
    /// `true` where `|Q|` fell below the umbilic floor.
    pub umbilic_mask: Mask,
    pub loop_defect: f64,
    pub base: (usize, usize),
    /// Points where the square-root continuation started on the principal branch.
    pub seeds: Vec<(usize, usize)>,
}

fn umbilic_floor(q: &ComplexField) -> f64 {
    UMBILIC_FLOOR * q.max_magnitude()
}

/// Points where `|Q|` is below the umbilic floor (masked points are not umbilic).
pub fn umbilic_mask(q: &ComplexField) -> Mask {
    let floor = umbilic_floor(q);
    Mask::from_shape_fn(q.chart().shape(), |(i, j)| q.is_valid(i, j) && q.at(i, j).norm() < floor)
}

/// Continuous `√Q` with umbilic points masked.
///
/// Fails with `Umbilic` when `Q ≡ 0` and with `BranchAmbiguity` when a
/// neighbour step changes the root by at least its own size.
pub fn branch_sqrt(q: &ComplexField) -> Result<(ComplexField, Vec<(usize, usize)>)> {
    if q.max_magnitude() == 0.0 {
        return Err(Error::Umbilic("Q = 0".into()));
    }
    let floor = umbilic_floor(q);
    let b = continue_sqrt(&q.clone().mask_where(|_, _, v| v.norm() < floor));
    if let Some((i, j)) = b.ambiguous {
        return Err(Error::BranchAmbiguity(i, j));
    }
    Ok((b.root, b.seeds))
}

/// `|∂̄Q|` away from the edge band.
pub fn hopf_holomorphy(q: &ComplexField) -> ResidualStat {
    ResidualStat::of(&wirtinger_dbar(q), COMPOSED_BAND)
}

/// `η = ∫ √Q dz` from `base`, after checking `|∂̄Q| ≤ tol_holo`.
pub fn build_eta(q: &ComplexField, base: (usize, usize), tol_holo: f64) -> Result<DecoupledData> {
    let holo = hopf_holomorphy(q);
    if holo.max > tol_holo {
        return Err(Error::NotHolomorphic { residual: holo.max, tolerance: tol_holo });
    }
    let (sqrt_q, seeds) = branch_sqrt(q)?;
    let zero = ComplexField::constant(q.chart(), Complex64::new(0.0, 0.0));
    let a = sweep_antiderivative(&sqrt_q, &zero, base)?;
    let umbilic = umbilic_mask(q);
    Ok(DecoupledData {
        eta: a.value,
        r: RealField::constant(q.chart(), f64::NAN),
        sqrt_q,
        umbilic_mask: umbilic,
        loop_defect: a.loop_defect,
        base,
        seeds,
    })
}

/// `R = 2q²/|Q|`, masked at umbilic points.
pub fn build_r(g: &GeometryBundle) -> RealField {
    let floor = umbilic_floor(&g.hopf);
    g.q.zip_with(&g.hopf, |q, h| if h.norm() < floor || h.norm() == 0.0 { f64::NAN } else { 2.0 * q * q / h.norm() })
}

fn shgordon_field(g: &GeometryBundle, r: &RealField) -> RealField {
    let lap = d_dbar_real(&r.ln());
    let abs_q = g.hopf.abs();
    RealField::combine(r.chart(), &[&lap, &abs_q, r], |i, j| {
        let rv = r.at(i, j);
        lap.at(i, j) / abs_q.at(i, j) - 1.0 / rv + rv
    })
}

/// `|(1/|Q|)∂∂̄ ln R − 1/R + R|`.
pub fn shgordon_residual(g: &GeometryBundle, d: &DecoupledData) -> ResidualStat {
    ResidualStat::of(&shgordon_field(g, &d.r), DECOUPLE_BAND)
}

fn liouville_field(g: &GeometryBundle) -> RealField {
    let q = &g.q;
    let lap = d_dbar_real(&q.map(|v| (v * v).ln()));
    RealField::combine(q.chart(), &[&lap, &g.hopf, q], |i, j| {
        let qv = q.at(i, j);
        lap.at(i, j) - 0.5 * g.hopf.at(i, j).norm_sqr() / (qv * qv) + 2.0 * qv * qv
    })
}

fn require_cmc1(g: &GeometryBundle, tol: f64) -> Result<()> {
    let dev = g.cmc1_deviation();
    if dev > tol {
        return Err(Error::NotCmc1(dev));
    }
    Ok(())
}

/// CMC-1 system in `(q, Q)`: `∂∂̄ ln q² = ½|Q|²/q² − 2q²` and `∂̄Q = ∂Q̄ = 0`.
pub fn eq12_residual(g: &GeometryBundle, cmc1_tol: f64) -> Result<ResidualReport> {
    require_cmc1(g, cmc1_tol)?;
    let mut report = ResidualReport::new();
    report.push("liouville", ResidualStat::of(&liouville_field(g), COMPOSED_BAND));
    report.push("dbar Q", ResidualStat::of(&wirtinger_dbar(&g.hopf), COMPOSED_BAND));
    report.push("d Qbar", ResidualStat::of(&wirtinger_d(&g.hopf.conj()), COMPOSED_BAND));
    Ok(report)
}

/// `|Q|·(sinh-Gordon residual) − (Liouville residual)`.
///
/// Expanding `ln R = ln 2 + ln q² − ln|Q|` shows the difference is exactly
/// `−∂∂̄ ln|Q|`, which vanishes for holomorphic, non-vanishing `Q`.
pub fn decoupling_consistency(g: &GeometryBundle, d: &DecoupledData) -> ResidualStat {
    let sh = shgordon_field(g, &d.r);
    let l = liouville_field(g);
    let abs_q = g.hopf.abs();
    let diff = RealField::combine(sh.chart(), &[&sh, &l, &abs_q], |i, j| sh.at(i, j) * abs_q.at(i, j) - l.at(i, j));
    ResidualStat::of(&diff, DECOUPLE_BAND)
}

/// Summary of a full decoupling run.
#[derive(Debug, Clone, Serialize)]
pub struct DecoupleSummary {
    pub shgordon: ResidualStat,
    pub consistency: ResidualStat,
    pub holomorphy: ResidualStat,
    pub loop_defect: f64,
    pub base: (usize, usize),
    pub seeds: Vec<(usize, usize)>,
    pub umbilic_points: usize,
}

/// Runs the whole transformation on CMC-1 geometry.
///
/// `c` scales the `c·h²` holomorphy tolerance. Fails with `NotCmc1`,
/// `Umbilic` (when `max|Q| ≤ 10h²`), `NotHolomorphic` or `BranchAmbiguity`.
pub fn decouple(g: &GeometryBundle, base: (usize, usize), c: f64) -> Result<(DecoupledData, DecoupleSummary)> {
    require_cmc1(g, CMC1_TOLERANCE)?;
    let chart: &GridChart = g.chart();
    let h2 = chart.h() * chart.h();
    let max_q = g.max_hopf();
    if max_q <= 10.0 * h2 {
        return Err(Error::Umbilic(format!("Q = 0 (max |Q| = {max_q:.3e} <= 10 h^2)")));
    }
    let mut d = build_eta(&g.hopf, base, c * h2)?;
    d.r = build_r(g);
    let summary = DecoupleSummary {
        shgordon: shgordon_residual(g, &d),
        consistency: decoupling_consistency(g, &d),
        holomorphy: hopf_holomorphy(&g.hopf),
        loop_defect: d.loop_defect,
        base,
        seeds: d.seeds.clone(),
        umbilic_points: d.umbilic_mask.iter().filter(|&&u| u).count(),
    };
    Ok((d, summary))
}
