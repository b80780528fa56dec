//! Charge and energy quadratures.
//!
//! Convention: `dz ∧ dz̄ = −2i dx ∧ dy`. With `∂n × ∂̄n = (i/2) n_x × n_y`
//! the charge `(1/4π)∫∫(n, ∂n × ∂̄n) dz∧dz̄` becomes `(1/4π)∫∫(n, n_x × n_y) dx dy`,
//! which is `+1` for the instanton `ρ = z` over the whole plane. The `q` form
//! `(1/2πi)∫∫ ∂∂̄ ln q dz∧dz̄` becomes `−(1/π)∫∫ ∂∂̄ ln q dx dy`.

use std::f64::consts::PI;

use serde::Serialize;

use super::GaussMapField;
use crate::cgrid::{
    d_dbar_real, integrate, joint_mask, partial_x, partial_y, wirtinger_d, wirtinger_dbar, ComplexField, Masked,
    RealField, ResidualStat, Vec3Field,
};
use crate::error::{Error, Result};
use crate::weierstrass::COMPOSED_BAND;

/// Largest `||n| − 1|` accepted by the charge and SO(3) checks.
pub const UNIT_TOLERANCE: f64 = 1e-3;

pub(crate) fn unit_deviation(n: &Vec3Field) -> f64 {
    n.norm().map(|v| v - 1.0).max_magnitude()
}

pub(crate) fn require_unit(n: &Vec3Field) -> Result<f64> {
    let dev = unit_deviation(n);
    if dev > UNIT_TOLERANCE {
        return Err(Error::NotUnit(dev));
    }
    Ok(dev)
}

/// `(n, n_x × n_y)/4π`, the real-area form of the charge density.
pub fn charge_density(n: &Vec3Field) -> RealField {
    let nx = n.components().clone().map(|c| partial_x(&c));
    let ny = n.components().clone().map(|c| partial_y(&c));
    let chart = *n.chart();
    let sources: Vec<&dyn Masked> = vec![n, &nx[0], &nx[1], &nx[2], &ny[0], &ny[1], &ny[2]];
    RealField::combine(&chart, &sources, |i, j| {
        let v = n.at(i, j);
        let a = [nx[0].at(i, j), nx[1].at(i, j), nx[2].at(i, j)];
        let b = [ny[0].at(i, j), ny[1].at(i, j), ny[2].at(i, j)];
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        (v[0] * cross[0] + v[1] * cross[1] + v[2] * cross[2]) / (4.0 * PI)
    })
}

/// `−(1/π)∂∂̄ ln q`, the same density written through the conformal factor.
pub fn q_charge_density(q: &RealField) -> RealField {
    d_dbar_real(&q.ln()).scale(-1.0 / PI).trimmed(COMPOSED_BAND)
}

/// Trapezoidal quadrature of [`charge_density`] over the unmasked samples.
pub fn topological_charge(n: &Vec3Field) -> Result<f64> {
    require_unit(n)?;
    Ok(integrate(&charge_density(n)))
}

/// Agreement of the two charge densities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChargeIdentity {
    /// Pointwise `|density(n) − density(q)|`.
    pub pointwise: ResidualStat,
    /// Integral of the normal form over the points where both are defined.
    pub normal_charge: f64,
    /// Integral of the `q` form over the same points.
    pub q_charge: f64,
    pub difference: f64,
}

pub fn charge_identity_residual(n: &Vec3Field, q: &RealField) -> Result<ChargeIdentity> {
    if n.chart() != q.chart() {
        return Err(Error::ChartMismatch);
    }
    let a = charge_density(n);
    let b = q_charge_density(q);
    let both = joint_mask(a.chart(), &[&a, &b]);
    let a = a.and_mask(&both);
    let b = b.and_mask(&both);
    let (normal_charge, q_charge) = (integrate(&a), integrate(&b));
    Ok(ChargeIdentity {
        pointwise: ResidualStat::of(&(&a - &b), 0),
        normal_charge,
        q_charge,
        difference: (normal_charge - q_charge).abs(),
    })
}

/// Energy quadratures. Each value is `|E| = 2∫∫ f dx dy` for its density `f`.
///
/// `holomorphic_*` uses `|∂ρ|²`, `antiholomorphic_*` uses `|∂̄ρ|²`. The
/// `printed` variants divide by `1 + |ρ|²`, the `squared` variants by
/// `(1 + |ρ|²)²` (the usual sigma-model energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy {
    pub holomorphic_printed: f64,
    pub holomorphic_squared: f64,
    pub antiholomorphic_printed: f64,
    pub antiholomorphic_squared: f64,
}

pub fn energy(rho: &GaussMapField) -> Energy {
    let r = &rho.rho;
    let d = wirtinger_d(r);
    let db = wirtinger_dbar(r);
    let part = |g: &ComplexField, power: i32| {
        let f = RealField::combine(r.chart(), &[r, g], |i, j| {
            g.at(i, j).norm_sqr() / (1.0 + r.at(i, j).norm_sqr()).powi(power)
        });
        2.0 * integrate(&f)
    };
    Energy {
        holomorphic_printed: part(&d, 1),
        holomorphic_squared: part(&d, 2),
        antiholomorphic_printed: part(&db, 1),
        antiholomorphic_squared: part(&db, 2),
    }
}
