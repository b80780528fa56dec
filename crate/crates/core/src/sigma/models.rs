use num_complex::Complex64;
use serde::Serialize;

use super::charge::require_unit;
use crate::cgrid::vector::{self, complexify};
use crate::cgrid::{
    d_dbar, wirtinger_d, wirtinger_dbar, ComplexField, Masked, ResidualReport, ResidualStat, Vec3Field,
};
use crate::weierstrass::{SpinorData, COMPOSED_BAND};

/// Residual of the SO(3) model together with the unit-length deviation of `n`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct So3Residual {
    /// `|∂̄∂n + (∂n, ∂̄n)n|`.
    pub residual: ResidualStat,
    /// `max ||n| − 1|`.
    pub unit_deviation: f64,
}

pub fn so3_residual(n: &Vec3Field) -> crate::Result<So3Residual> {
    let unit_deviation = require_unit(n)?;
    let nc = complexify(n);
    let dn = nc.clone().map(|f| wirtinger_d(&f));
    let dbn = nc.clone().map(|f| wirtinger_dbar(&f));
    let ddn = nc.clone().map(|f| d_dbar(&f));
    let lhs = vector::add(&ddn, &vector::scale(&vector::dot(&dn, &dbn), &nc));
    Ok(So3Residual { residual: ResidualStat::of(&vector::norm(&lhs), COMPOSED_BAND), unit_deviation })
}

/// `Σ conj(aₖ)·bₖ` over the two components.
fn hdot(a: &[ComplexField; 2], b: &[ComplexField; 2]) -> ComplexField {
    &(&a[0].conj() * &b[0]) + &(&a[1].conj() * &b[1])
}

/// The CP¹ model for `N = (ψ₁/√q, ψ̄₂/√q)`:
/// `∂∂̄N = (N̄, ∂̄N)∂N + (N̄, ∂N)∂̄N − kN` with
/// `k = −2(N̄, ∂N)(N, ∂̄N̄) + ½(∂N, ∂̄N̄) + ½(∂̄N, ∂N̄)`.
///
/// Entries: `(N,N̄) - 1` and `cp1 equation`. The note `multiplier sign` records
/// the sign of the `kN` term used, and `opposite sign residual` the max residual
/// with the other sign, for comparison.
pub fn cp1_residual(s: &SpinorData) -> ResidualReport {
    let (psi1, psi2) = s.differentiable();
    let chart = *s.chart();
    let q = psi1.zip_with(&psi2, |a, b| a.norm_sqr() + b.norm_sqr()).mask_where(|_, _, v| v == 0.0);
    let root = q.map(|v| Complex64::new(1.0 / v.sqrt(), 0.0));
    let n: [ComplexField; 2] = [&psi1 * &root, &psi2.conj() * &root];
    let dn = n.clone().map(|f| wirtinger_d(&f));
    let dbn = n.clone().map(|f| wirtinger_dbar(&f));
    let ddn = n.clone().map(|f| d_dbar(&f));

    let norm = &hdot(&n, &n) - &ComplexField::constant(&chart, Complex64::new(1.0, 0.0));
    let nbar_dn = hdot(&n, &dn);
    let nbar_dbn = hdot(&n, &dbn);
    // (N, ∂̄N̄) = Σ Nₖ conj(∂Nₖ) = conj((N̄, ∂N))
    let n_dbnbar = nbar_dn.conj();
    let half_dn = hdot(&dn, &dn).scale(Complex64::new(0.5, 0.0));
    let half_dbn = hdot(&dbn, &dbn).scale(Complex64::new(0.5, 0.0));
    let k = &(&(&nbar_dn * &n_dbnbar).scale(Complex64::new(-2.0, 0.0)) + &half_dn) + &half_dbn;

    let residual = |sign: f64| {
        let comp = |c: usize| {
            let lhs = &(&ddn[c] - &(&nbar_dbn * &dn[c])) - &(&nbar_dn * &dbn[c]);
            &lhs + &(&k * &n[c]).scale(Complex64::new(sign, 0.0))
        };
        let (a, b) = (comp(0), comp(1));
        let len = crate::cgrid::RealField::combine(&chart, &[&a as &dyn Masked, &b], |i, j| {
            (a.at(i, j).norm_sqr() + b.at(i, j).norm_sqr()).sqrt()
        });
        ResidualStat::of(&len, COMPOSED_BAND)
    };
    let printed = residual(1.0);
    let opposite = residual(-1.0);

    let mut report = ResidualReport::new();
    report.push("(N,N̄) - 1", ResidualStat::of(&norm, 0));
    report.push("cp1 equation", printed);
    report.note("multiplier sign", "-kN");
    report.note("opposite sign residual", format!("{:.3e}", opposite.max));
    report
}
