use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::cgrid::{wirtinger_d, wirtinger_dbar, ComplexField, GridChart, Masked, RealField, ResidualStat};
use crate::decouple::CMC1_TOLERANCE;
use crate::error::{Error, Result};
use crate::weierstrass::{derive_geometry, GeometryBundle, SpinorData, COMPOSED_BAND};

/// Which linear problem a [`ConnectionPair`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum System {
    /// `∂ψ = Aψ`, `∂̄ψ = Bψ` closing the Dirac system for any `H`.
    Closed,
    /// CMC-1 problem with unit-modulus spectral parameter `λ`.
    Spectral,
    /// Its trace-free gauge, acting on `(ψ₁, ψ₂/q)`.
    SlTwo,
    /// First-order Lax pair in `ψ` with parameter `μ ≠ ±1`.
    MuLax,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Closed => "closed",
            System::Spectral => "spectral",
            System::SlTwo => "sl2",
            System::MuLax => "mu-lax",
        })
    }
}

/// A 2×2 matrix of fields, row-major.
pub type MatrixField = [ComplexField; 4];

/// Coefficient matrices of `∂Ψ = AΨ`, `∂̄Ψ = BΨ`.
#[derive(Debug, Clone)]
pub struct ConnectionPair {
    pub a: MatrixField,
    pub b: MatrixField,
    pub system: System,
    pub parameter: Complex64,
}

fn zero(chart: &GridChart) -> ComplexField {
    ComplexField::constant(chart, Complex64::new(0.0, 0.0))
}

fn mat_mul(x: &MatrixField, y: &MatrixField) -> MatrixField {
    let e = |r: usize, c: usize| &(&x[2 * r] * &y[c]) + &(&x[2 * r + 1] * &y[2 + c]);
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

/// Frobenius norm of a matrix field.
fn frobenius(m: &MatrixField) -> RealField {
    let chart = *m[0].chart();
    RealField::combine(&chart, &[&m[0] as &dyn Masked, &m[1], &m[2], &m[3]], |i, j| {
        m.iter().map(|f| f.at(i, j).norm_sqr()).sum::<f64>().sqrt()
    })
}

fn check_unit(lambda: Complex64) -> Result<()> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::BadParameter(format!("|lambda| must be 1, got {}", lambda.norm())));
    }
    Ok(())
}

/// Builds the matrices of `system` from derived geometry.
///
/// `parameter` is `λ` for `Spectral` and `SlTwo` (must have modulus 1) and is
/// ignored for `Closed`. `MuLax` needs the spinors; use [`mu_lax_connection`].
pub fn build_connection(g: &GeometryBundle, system: System, parameter: Complex64) -> Result<ConnectionPair> {
    let chart = *g.chart();
    let q = g.q.to_complex();
    let hopf = &g.hopf;
    let dlog = &wirtinger_d(&q) / &q;
    let dbarlog = &wirtinger_dbar(&q) / &q;
    let c = |v: f64| Complex64::new(v, 0.0);
    match system {
        System::Closed => {
            let qh = (&g.q * &g.mean_curvature).to_complex();
            let q_over = hopf.zip_with(&g.q, |v, q| v / (2.0 * q));
            let a = [zero(&chart), qh.clone(), q_over.scale(c(-1.0)), dlog];
            let b = [dbarlog, q_over.conj(), qh.scale(c(-1.0)), zero(&chart)];
            Ok(ConnectionPair { a, b, system, parameter: c(1.0) })
        }
        System::Spectral | System::SlTwo => {
            check_unit(parameter)?;
            let dev = g.cmc1_deviation();
            if dev > CMC1_TOLERANCE {
                return Err(Error::NotCmc1(dev));
            }
            let lambda = parameter;
            let (a, b) = if system == System::Spectral {
                let q_over = hopf.zip_with(&g.q, |v, q| v / (2.0 * q));
                (
                    [zero(&chart), q.clone(), q_over.scale(-lambda), dlog],
                    [dbarlog, q_over.conj().scale(1.0 / lambda), q.scale(c(-1.0)), zero(&chart)],
                )
            } else {
                let q2 = g.q.map(|v| v * v).to_complex();
                let q_over = hopf.zip_with(&g.q, |v, q| v / (2.0 * q * q));
                (
                    [zero(&chart), q2, q_over.scale(-lambda), zero(&chart)],
                    [
                        dbarlog.clone(),
                        hopf.conj().scale(1.0 / (2.0 * lambda)),
                        ComplexField::constant(&chart, c(-1.0)).and_mask(g.q.mask()),
                        dbarlog.scale(c(-1.0)),
                    ],
                )
            };
            Ok(ConnectionPair { a, b, system, parameter })
        }
        System::MuLax => Err(Error::LabelMismatch("the mu-lax pair is built from spinors".into())),
    }
}

/// `|∂̄A − ∂B + [A, B]|` (Frobenius).
pub fn zero_curvature_residual(c: &ConnectionPair) -> ResidualStat {
    let dba = c.a.clone().map(|f| wirtinger_dbar(&f));
    let db = c.b.clone().map(|f| wirtinger_d(&f));
    let ab = mat_mul(&c.a, &c.b);
    let ba = mat_mul(&c.b, &c.a);
    let m: MatrixField = [0, 1, 2, 3].map(|k| &(&(&dba[k] - &db[k]) + &ab[k]) - &ba[k]);
    ResidualStat::of(&frobenius(&m), COMPOSED_BAND)
}

/// `max |trace|` of both matrices; exactly zero for the SL(2) form.
pub fn trace_max(c: &ConnectionPair) -> f64 {
    let ta = &c.a[0] + &c.a[3];
    let tb = &c.b[0] + &c.b[3];
    ta.max_magnitude().max(tb.max_magnitude())
}

fn apply_residual(psi: [&ComplexField; 2], c: &ConnectionPair) -> ResidualStat {
    let chart = *psi[0].chart();
    let dpsi = psi.map(wirtinger_d);
    let dbpsi = psi.map(wirtinger_dbar);
    let row = |m: &MatrixField, r: usize| &(&m[2 * r] * psi[0]) + &(&m[2 * r + 1] * psi[1]);
    let ea = [&dpsi[0] - &row(&c.a, 0), &dpsi[1] - &row(&c.a, 1)];
    let eb = [&dbpsi[0] - &row(&c.b, 0), &dbpsi[1] - &row(&c.b, 1)];
    let len = RealField::combine(&chart, &[&ea[0] as &dyn Masked, &ea[1], &eb[0], &eb[1]], |i, j| {
        let a = (ea[0].at(i, j).norm_sqr() + ea[1].at(i, j).norm_sqr()).sqrt();
        let b = (eb[0].at(i, j).norm_sqr() + eb[1].at(i, j).norm_sqr()).sqrt();
        a.max(b)
    });
    ResidualStat::of(&len, 0)
}

/// `max(|∂ψ − Aψ|, |∂̄ψ − Bψ|)` for the spinors `c` was derived from.
///
/// Only the closed system and the spectral one at `λ = 1` are solved by `ψ`
/// itself; any other label is a `LabelMismatch`.
pub fn linear_problem_residual(s: &SpinorData, c: &ConnectionPair) -> Result<ResidualStat> {
    let ok = match c.system {
        System::Closed => true,
        System::Spectral => (c.parameter - Complex64::new(1.0, 0.0)).norm() <= 1e-12,
        _ => false,
    };
    if !ok {
        return Err(Error::LabelMismatch(format!(
            "spinors solve the closed system or the spectral one at lambda = 1, not {} at {}",
            c.system, c.parameter
        )));
    }
    let (psi1, psi2) = s.differentiable();
    Ok(apply_residual([&psi1, &psi2], c))
}

/// Result of [`gauge_check`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaugeCheck {
    /// `(ψ₁, ψ₂/q)` against the SL(2) problem at `λ = 1`.
    pub linear: ResidualStat,
    /// `|∂q − (ψ₁∂ψ̄₁ + ψ̄₂∂ψ₂)|`.
    pub dq: ResidualStat,
}

impl GaugeCheck {
    pub fn max(&self) -> f64 {
        self.linear.max.max(self.dq.max)
    }
}

/// Checks that `(ψ₁, ψ₂/q)` solves the SL(2) problem at `λ = 1`, and the
/// identity `∂q = ψ₁∂ψ̄₁ + ψ̄₂∂ψ₂`.
pub fn gauge_check(s: &SpinorData) -> Result<GaugeCheck> {
    gauge_check_scaled(s, 1.0)
}

/// [`gauge_check`] with the gauge `ψ̃₂ = scale·ψ₂/q`; any `scale ≠ 1` must fail.
pub fn gauge_check_scaled(s: &SpinorData, scale: f64) -> Result<GaugeCheck> {
    let g = derive_geometry(s)?;
    let c = build_connection(&g, System::SlTwo, Complex64::new(1.0, 0.0))?;
    let (psi1, psi2) = s.differentiable();
    let q = g.q.to_complex();
    let tilde2 = (&psi2 / &q).scale(Complex64::new(scale, 0.0));
    let linear = apply_residual([&psi1, &tilde2], &c);
    let rhs = &(&psi1 * &wirtinger_d(&psi1.conj())) + &(&psi2.conj() * &wirtinger_d(&psi2));
    let dq = ResidualStat::of(&(&wirtinger_d(&q) - &rhs), 0);
    Ok(GaugeCheck { linear, dq })
}

/// Matrices of the first-order Lax pair with parameter `μ`:
/// `A = 2/(μ+1)·[[−ψ̄₁ψ₂ + cψ₁ψ̄₂, −ψ̄₁² − cψ̄₂²], [ψ₂² + cψ₁², ψ̄₁ψ₂ − cψ₁ψ̄₂]]`,
/// `B = 2/(μ−1)·[[−ψ₁ψ̄₂ + c̄ψ̄₁ψ₂, ψ̄₂² + c̄ψ̄₁²], [−ψ₁² − c̄ψ₂², ψ₁ψ̄₂ − c̄ψ̄₁ψ₂]]`
/// with `c = Q/(2q²)`.
pub fn mu_lax_connection(s: &SpinorData, mu: Complex64) -> Result<ConnectionPair> {
    let one = Complex64::new(1.0, 0.0);
    if (mu - one).norm() <= 1e-12 || (mu + one).norm() <= 1e-12 {
        return Err(Error::SingularParameter(mu.to_string()));
    }
    let g = derive_geometry(s)?;
    let chart = *s.chart();
    let cf = g.hopf.zip_with(&g.q, |v, q| v / (2.0 * q * q));
    let (p1, p2) = (s.psi1(), s.psi2());
    let ka = 2.0 / (mu + one);
    let kb = 2.0 / (mu - one);
    let entry = |k: Complex64, f: &dyn Fn(Complex64, Complex64, Complex64) -> Complex64, coef: &ComplexField| {
        ComplexField::combine(&chart, &[p1 as &dyn Masked, p2, coef], |i, j| {
            k * f(p1.at(i, j), p2.at(i, j), coef.at(i, j))
        })
    };
    let cb = cf.conj();
    let a = [
        entry(ka, &|a, b, c| -a.conj() * b + c * a * b.conj(), &cf),
        entry(ka, &|a, b, c| -a.conj() * a.conj() - c * b.conj() * b.conj(), &cf),
        entry(ka, &|a, b, c| b * b + c * a * a, &cf),
        entry(ka, &|a, b, c| a.conj() * b - c * a * b.conj(), &cf),
    ];
    let b = [
        entry(kb, &|a, b, c| -a * b.conj() + c * a.conj() * b, &cb),
        entry(kb, &|a, b, c| b.conj() * b.conj() + c * a.conj() * a.conj(), &cb),
        entry(kb, &|a, b, c| -a * a - c * b * b, &cb),
        entry(kb, &|a, b, c| a * b.conj() - c * a.conj() * b, &cb),
    ];
    Ok(ConnectionPair { a, b, system: System::MuLax, parameter: mu })
}

/// Zero-curvature residual of the `μ` Lax pair built from `s`.
pub fn mu_lax_residual(s: &SpinorData, mu: Complex64) -> Result<ResidualStat> {
    Ok(zero_curvature_residual(&mu_lax_connection(s, mu)?))
}
