//! Residuals of the identities satisfied by Weierstrass data and its surface.
//!
//! Checks built from one stencil use the whole chart; checks that compose two
//! stencils skip a two-point edge band (see the calculus module notes).

use num_complex::Complex64;
use serde::Serialize;

use super::{GeometryBundle, SpinorData};
use crate::cgrid::vector::{self, complexify, CVec3};
use crate::cgrid::{
    d_dbar, d_dbar_real, wirtinger_d, wirtinger_d_real, wirtinger_d_vec, wirtinger_dbar, wirtinger_dbar_real,
    wirtinger_dbar_vec, ComplexField, ResidualReport, ResidualStat, Vec3Field,
};
use crate::error::{Error, Result};

/// Edge band skipped by residuals built from composed stencils.
pub const COMPOSED_BAND: usize = 2;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Residuals of `∂ψ₁ = pψ₂` and `∂̄ψ₂ = −pψ₁`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiracResidual {
    pub first: ResidualStat,
    pub second: ResidualStat,
    /// `p = q` pointwise (relative to `max q`), i.e. the data is CMC-1.
    pub cmc1: bool,
}

impl DiracResidual {
    pub fn max(&self) -> f64 {
        self.first.max.max(self.second.max)
    }
}

pub fn dirac_residual(s: &SpinorData) -> DiracResidual {
    let (psi1, psi2) = s.differentiable();
    let p = s.p().to_complex();
    let first = &wirtinger_d(&psi1) - &(&p * &psi2);
    let second = &wirtinger_dbar(&psi2) + &(&p * &psi1);
    let q = s.q();
    let scale = q.max_magnitude().max(f64::MIN_POSITIVE);
    let cmc1 = (s.p() - &q).max_magnitude() <= 1e-10 * scale;
    DiracResidual { first: ResidualStat::of(&first, 0), second: ResidualStat::of(&second, 0), cmc1 }
}

fn push_products(
    report: &mut ResidualReport,
    prefix: &str,
    n: &CVec3,
    dr: &CVec3,
    dbr: &CVec3,
    q: &ComplexField,
    band: usize,
) {
    let one = ComplexField::constant(q.chart(), c(1.0));
    let stat = |f: ComplexField| ResidualStat::of(&f, band);
    report.push(format!("{prefix}(n,n) - 1"), stat(&vector::dot(n, n) - &one));
    report.push(format!("{prefix}(n,dr)"), stat(vector::dot(n, dr)));
    report.push(format!("{prefix}(n,dbar r)"), stat(vector::dot(n, dbr)));
    report.push(format!("{prefix}(dr,dr)"), stat(vector::dot(dr, dr)));
    report.push(format!("{prefix}(dbar r,dbar r)"), stat(vector::dot(dbr, dbr)));
    let two_q2 = q.map(|v| 2.0 * v * v);
    report.push(format!("{prefix}(dr,dbar r) - 2q^2"), stat(&vector::dot(dr, dbr) - &two_q2));
}

/// Scalar products of the frame `(∂r, ∂̄r, n)`.
///
/// Entries prefixed `algebraic:` use the closed spinor formulas and sit at
/// rounding level. Entries prefixed `end-to-end:` differentiate the integrated
/// `r` and are only present when the bundle carries a surface.
pub fn scalar_product_residuals(g: &GeometryBundle, s: &SpinorData) -> ResidualReport {
    let mut report = ResidualReport::new();
    let n = complexify(&g.n);
    let q = g.q.to_complex();
    push_products(&mut report, "algebraic: ", &n, &s.dr(), &s.dbar_r(), &q, 0);
    if let Some(r) = &g.r {
        push_products(&mut report, "end-to-end: ", &n, &wirtinger_d_vec(r), &wirtinger_dbar_vec(r), &q, 0);
    }
    report
}

/// The three Gauss–Codazzi equations:
/// `∂∂̄ ln q² = ½QQ̄/q² − 2H²q²`, `∂̄Q = 2q²∂H`, `∂Q̄ = 2q²∂̄H`.
pub fn gauss_codazzi_residual(g: &GeometryBundle) -> ResidualReport {
    let q = &g.q;
    let h = &g.mean_curvature;
    let lap = d_dbar_real(&q.map(|v| (v * v).ln()));
    let hq = h.zip_with(q, |h, q| 2.0 * h * h * q * q);
    let hopf_term = g.hopf.zip_with(q, |qq, q| 0.5 * qq.norm_sqr() / (q * q));
    let gauss = &(&lap - &hopf_term) + &hq;

    let two_q2 = q.map(|v| 2.0 * v * v).to_complex();
    let codazzi = &wirtinger_dbar(&g.hopf) - &(&two_q2 * &wirtinger_d_real(h));
    let codazzi_bar = &wirtinger_d(&g.hopf.conj()) - &(&two_q2 * &wirtinger_dbar_real(h));

    let mut report = ResidualReport::new();
    report.push("gauss", ResidualStat::of(&gauss, COMPOSED_BAND));
    report.push("codazzi", ResidualStat::of(&codazzi, COMPOSED_BAND));
    report.push("codazzi conjugate", ResidualStat::of(&codazzi_bar, COMPOSED_BAND));
    report
}

fn surface(g: &GeometryBundle) -> Result<&Vec3Field> {
    g.r.as_ref().ok_or_else(|| Error::MissingField("r".into()))
}

/// Unit normal `(1/i)(∂r × ∂̄r)/|∂r × ∂̄r|` recomputed from the integrated surface.
pub fn normal_from_surface(r: &Vec3Field) -> CVec3 {
    let cr = vector::cross(&wirtinger_d_vec(r), &wirtinger_dbar_vec(r));
    let w = cr.map(|f| f.map(|v| Complex64::new(v.im, 0.0)));
    let len = vector::norm(&w).to_complex();
    w.map(|f| &f / &len)
}

fn rows(g: &GeometryBundle, dr: &CVec3, dbr: &CVec3, n: &CVec3) -> [CVec3; 6] {
    let q = g.q.to_complex();
    let h = g.mean_curvature.to_complex();
    let hopf = &g.hopf;
    let hopf_bar = g.hopf.conj();
    let two_hq2 = g.mean_curvature.zip_with(&g.q, |h, q| c(2.0 * h * q * q));
    let q_over = hopf.zip_with(&g.q, |v, q| v / (2.0 * q * q));
    let qbar_over = q_over.conj();
    let dlog = &wirtinger_d(&q) / &q;
    let dbarlog = &wirtinger_dbar(&q) / &q;
    let d = |v: &CVec3| v.clone().map(|f| wirtinger_d(&f));
    let db = |v: &CVec3| v.clone().map(|f| wirtinger_dbar(&f));
    let two = |f: &ComplexField| f.scale(c(2.0));
    [
        vector::sub(&vector::sub(&d(dr), &vector::scale(&two(&dlog), dr)), &vector::scale(hopf, n)),
        vector::sub(&d(dbr), &vector::scale(&two_hq2, n)),
        vector::add(&vector::add(&d(n), &vector::scale(&h, dr)), &vector::scale(&q_over, dbr)),
        vector::sub(&db(dr), &vector::scale(&two_hq2, n)),
        vector::sub(&vector::sub(&db(dbr), &vector::scale(&two(&dbarlog), dbr)), &vector::scale(&hopf_bar, n)),
        vector::add(&vector::add(&db(n), &vector::scale(&qbar_over, dr)), &vector::scale(&h, dbr)),
    ]
}

/// The six rows of the frame equations for `(∂r, ∂̄r, n)`, all recomputed from
/// the integrated surface.
///
/// Both orientations of `n` are tried; the note `orientation` records which
/// one matched (`cross-product` for `n = (1/i)∂r×∂̄r/|…|`, `reversed` otherwise).
pub fn frame_residual(g: &GeometryBundle) -> Result<ResidualReport> {
    let r = surface(g)?;
    let dr = wirtinger_d_vec(r);
    let dbr = wirtinger_dbar_vec(r);
    let n = normal_from_surface(r);
    let stats = |n: &CVec3| -> Vec<ResidualStat> {
        rows(g, &dr, &dbr, n).iter().map(|row| ResidualStat::of(&vector::norm(row), COMPOSED_BAND)).collect()
    };
    let forward = stats(&n);
    let reversed = stats(&vector::scale_const(c(-1.0), &n));
    let worst = |v: &[ResidualStat]| v.iter().map(|s| s.max).fold(0.0, f64::max);
    let (chosen, label) =
        if worst(&forward) <= worst(&reversed) { (forward, "cross-product") } else { (reversed, "reversed") };
    let mut report = ResidualReport::new();
    let names = ["d(dr)", "d(dbar r)", "d(n)", "dbar(dr)", "dbar(dbar r)", "dbar(n)"];
    for (name, stat) in names.iter().zip(chosen) {
        report.push(*name, stat);
    }
    report.note("orientation", label);
    Ok(report)
}

/// `|∂∂̄n + (∂n, ∂̄n)n + ∂̄H·∂r + ∂H·∂̄r|` with the closed-form normal and `∂r`
/// from the integrated surface.
pub fn normal_equation_residual(g: &GeometryBundle) -> Result<ResidualStat> {
    let r = surface(g)?;
    let n = complexify(&g.n);
    let dn = n.clone().map(|f| wirtinger_d(&f));
    let dbn = n.clone().map(|f| wirtinger_dbar(&f));
    let ddn = n.clone().map(|f| d_dbar(&f));
    let dh = wirtinger_d_real(&g.mean_curvature);
    let dbh = wirtinger_dbar_real(&g.mean_curvature);
    let lhs = vector::add(
        &vector::add(&ddn, &vector::scale(&vector::dot(&dn, &dbn), &n)),
        &vector::add(&vector::scale(&dbh, &wirtinger_d_vec(r)), &vector::scale(&dh, &wirtinger_dbar_vec(r))),
    );
    Ok(ResidualStat::of(&vector::norm(&lhs), COMPOSED_BAND))
}
