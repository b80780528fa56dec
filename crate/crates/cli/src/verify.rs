//! Runs every applicable identity on a spinor data set and grades each residual
//! against `C·h^order`.

use std::collections::BTreeMap;
use std::fmt::Write;

use cmc_core::cgrid::{Mask, ResidualReport, ResidualStat};
use cmc_core::decouple::{decouple, eq12_residual, CMC1_TOLERANCE};
use cmc_core::lax::{
    build_connection, gauge_check, linear_problem_residual, mu_lax_residual, trace_max, zero_curvature_residual, System,
};
use cmc_core::sigma::{
    charge_identity_residual, cp1_residual, gauss_map, general_h_residual, qr_from_rho, sigma_residual, so3_residual,
};
use cmc_core::weierstrass::{
    derive_geometry, dirac_residual, frame_residual, gauss_codazzi_residual, integrate_surface,
    normal_equation_residual, scalar_product_residuals, GeometryBundle, SpinorData,
};
use cmc_core::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Tolerance constant `C` in `C·h^order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// `C = 50`.
    Strict,
    /// `C = 500`.
    Loose,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Strict => "strict",
            Profile::Loose => "loose",
        }
    }

    pub fn constant(self) -> f64 {
        match self {
            Profile::Strict => 50.0,
            Profile::Loose => 500.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub h: f64,
    /// Expected convergence order; `None` for exact (rounding-level) checks.
    pub order: Option<u32>,
    pub tolerance: Option<f64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub profile: Profile,
    pub c: f64,
    pub h: f64,
    pub checks: Vec<Check>,
    pub notes: BTreeMap<String, String>,
    pub passed: bool,
}

/// Largest value accepted by exact checks.
const EXACT: f64 = 0.0;

struct Builder {
    c: f64,
    h: f64,
    checks: Vec<Check>,
    notes: BTreeMap<String, String>,
}

impl Builder {
    fn push(&mut self, group: &str, name: &str, max: f64, mean: f64, order: Option<u32>) {
        let tolerance = order.map_or(EXACT, |k| self.c * self.h.powi(k as i32));
        let finite = max.is_finite() && mean.is_finite();
        let status = if finite && max <= tolerance { Status::Pass } else { Status::Fail };
        self.checks.push(Check {
            group: group.into(),
            name: name.into(),
            max: finite.then_some(max),
            mean: finite.then_some(mean),
            h: self.h,
            order,
            tolerance: Some(tolerance),
            status,
            reason: (!finite).then(|| "non-finite residual".into()),
        });
    }

    fn stat(&mut self, group: &str, name: &str, s: ResidualStat, order: u32) {
        self.push(group, name, s.max, s.mean, Some(order));
    }

    fn report(&mut self, group: &str, r: &ResidualReport, order: impl Fn(&str) -> u32) {
        for (name, s) in &r.entries {
            self.stat(group, name, *s, order(name));
        }
        for (k, v) in &r.notes {
            self.notes.insert(format!("{group}: {k}"), v.clone());
        }
    }

    fn outcome(&mut self, group: &str, name: &str, status: Status, reason: String) {
        self.checks.push(Check {
            group: group.into(),
            name: name.into(),
            max: None,
            mean: None,
            h: self.h,
            order: None,
            tolerance: None,
            status,
            reason: Some(reason),
        });
    }

    fn skip(&mut self, group: &str, name: &str, reason: impl Into<String>) {
        self.outcome(group, name, Status::Skipped, reason.into());
    }

    fn fail(&mut self, group: &str, name: &str, err: &Error) {
        self.outcome(group, name, Status::Fail, err.to_string());
    }
}

/// The grid center if it is valid, else the first valid point in row-major order.
pub fn default_base(mask: &Mask) -> Option<(usize, usize)> {
    let (nx, ny) = mask.dim();
    let center = (nx / 2, ny / 2);
    if mask[center] {
        return Some(center);
    }
    (0..ny).flat_map(|j| (0..nx).map(move |i| (i, j))).find(|&(i, j)| mask[[i, j]])
}

fn order_of_scalar_product(name: &str) -> u32 {
    if name.starts_with("end-to-end") {
        1
    } else {
        2
    }
}

/// Runs all applicable checks on `s`.
pub fn verify_spinors(s: &SpinorData, profile: Profile) -> Result<VerificationReport> {
    let chart = *s.chart();
    let mut b = Builder { c: profile.constant(), h: chart.h(), checks: Vec::new(), notes: BTreeMap::new() };
    let mut g = derive_geometry(s)?;

    let d = dirac_residual(s);
    b.stat("dirac", "first equation", d.first, 2);
    b.stat("dirac", "second equation", d.second, 2);

    let base = default_base(s.mask()).ok_or(Error::EmptyGeometry)?;
    match integrate_surface(s, base) {
        Ok(surf) => {
            b.notes.insert("surface: base".into(), format!("{:?}", surf.base));
            b.notes.insert("surface: loop defect".into(), format!("{:.3e}", surf.loop_defect));
            b.push("surface", "imaginary residue", surf.imaginary_residue, surf.imaginary_residue, Some(2));
            g = g.with_surface(surf.r);
        }
        Err(e) => b.fail("surface", "imaginary residue", &e),
    }

    b.report("scalar products", &scalar_product_residuals(&g, s), order_of_scalar_product);
    b.report("gauss-codazzi", &gauss_codazzi_residual(&g), |_| 2);
    if g.r.is_some() {
        match frame_residual(&g) {
            Ok(r) => b.report("frame", &r, |_| 1),
            Err(e) => b.fail("frame", "frame equations", &e),
        }
    } else {
        b.skip("frame", "frame equations", "surface integration failed");
    }
    match normal_equation_residual(&g) {
        Ok(st) => b.stat("normal", "normal equation", st, 2),
        Err(e) => b.fail("normal", "normal equation", &e),
    }

    let dev = g.cmc1_deviation();
    let not_cmc1 = (dev > CMC1_TOLERANCE).then(|| format!("not CMC-1: max |H - 1| = {dev:.3e}"));
    sigma_checks(&mut b, s, &g, not_cmc1.as_deref());
    cmc1_checks(&mut b, s, &g, base, not_cmc1.as_deref());

    let passed = b.checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerificationReport { profile, c: b.c, h: b.h, checks: b.checks, notes: b.notes, passed })
}

fn sigma_checks(b: &mut Builder, s: &SpinorData, g: &GeometryBundle, not_cmc1: Option<&str>) {
    let gm = gauss_map(s);
    if let Some(st) = gm.stereographic {
        b.stat("gauss map", "spinor form vs normal form", st, 2);
    }
    match general_h_residual(&gm, &g.mean_curvature) {
        Ok(st) => b.stat("gauss map", "general mean curvature equation", st, 2),
        Err(e) => b.fail("gauss map", "general mean curvature equation", &e),
    }
    let (q_rho, r_rho) = qr_from_rho(&gm);
    b.stat("gauss map", "Q from rho vs spinor Q", ResidualStat::of(&(&q_rho - &g.hopf), 2), 2);
    let h2 = b.h * b.h;
    if g.max_hopf() > 10.0 * h2 {
        let r_spinor = g.q.zip_with(&g.hopf, |q, h| 2.0 * q * q / h.norm());
        b.stat("gauss map", "R from rho vs spinor R", ResidualStat::of(&(&r_rho - &r_spinor), 2), 2);
    } else {
        b.skip("gauss map", "R from rho vs spinor R", "umbilic: Q = 0");
    }

    match charge_identity_residual(&g.n, &g.q) {
        Ok(ci) => {
            b.stat("charge", "density identity", ci.pointwise, 1);
            b.notes.insert("charge: from normal".into(), format!("{:.6}", ci.normal_charge));
            b.notes.insert("charge: from ln q".into(), format!("{:.6}", ci.q_charge));
        }
        Err(e) => b.fail("charge", "density identity", &e),
    }

    if let Some(reason) = not_cmc1 {
        for name in ["sigma model", "so3 model", "cp1 equation"] {
            b.skip("sigma models", name, reason);
        }
        return;
    }
    b.stat("sigma models", "sigma model", sigma_residual(&gm), 2);
    match so3_residual(&g.n) {
        Ok(r) => {
            b.stat("sigma models", "so3 model", r.residual, 1);
            b.notes.insert("sigma models: unit deviation of n".into(), format!("{:.3e}", r.unit_deviation));
        }
        Err(e) => b.fail("sigma models", "so3 model", &e),
    }
    b.report("sigma models", &cp1_residual(s), |_| 1);
}

fn cmc1_checks(b: &mut Builder, s: &SpinorData, g: &GeometryBundle, base: (usize, usize), not_cmc1: Option<&str>) {
    let one = Complex64::new(1.0, 0.0);
    match build_connection(g, System::Closed, one) {
        Ok(c) => {
            b.stat("linear problems", "closed system zero curvature", zero_curvature_residual(&c), 2);
            match linear_problem_residual(s, &c) {
                Ok(st) => b.stat("linear problems", "closed system solved by spinors", st, 2),
                Err(e) => b.fail("linear problems", "closed system solved by spinors", &e),
            }
        }
        Err(e) => b.fail("linear problems", "closed system zero curvature", &e),
    }

    let reason = not_cmc1.unwrap_or_default().to_string();
    let cmc1 = not_cmc1.is_none();
    let lambdas =
        [("1", one), ("i", Complex64::i()), ("exp(i pi/4)", Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))];
    for (label, lambda) in lambdas {
        for (system, tag) in [(System::Spectral, "spectral"), (System::SlTwo, "sl2")] {
            let name = format!("{tag} zero curvature, lambda = {label}");
            if !cmc1 {
                b.skip("linear problems", &name, reason.clone());
                continue;
            }
            match build_connection(g, system, lambda) {
                Ok(c) => {
                    b.stat("linear problems", &name, zero_curvature_residual(&c), 2);
                    if system == System::SlTwo {
                        let t = trace_max(&c);
                        b.push("linear problems", &format!("sl2 trace, lambda = {label}"), t, t, None);
                    }
                }
                Err(e) => b.fail("linear problems", &name, &e),
            }
        }
    }
    for (label, mu) in [("2", Complex64::new(2.0, 0.0)), ("3i", Complex64::new(0.0, 3.0))] {
        let name = format!("mu-lax zero curvature, mu = {label}");
        if !cmc1 {
            b.skip("linear problems", &name, reason.clone());
            continue;
        }
        match mu_lax_residual(s, mu) {
            Ok(st) => b.stat("linear problems", &name, st, 2),
            Err(e) => b.fail("linear problems", &name, &e),
        }
    }
    if cmc1 {
        match gauge_check(s) {
            Ok(gc) => {
                b.stat("linear problems", "gauge (psi1, psi2/q) solves sl2 system", gc.linear, 2);
                b.stat("linear problems", "dq = psi1 d(conj psi1) + conj(psi2) d psi2", gc.dq, 2);
            }
            Err(e) => b.fail("linear problems", "gauge (psi1, psi2/q) solves sl2 system", &e),
        }
    } else {
        b.skip("linear problems", "gauge (psi1, psi2/q) solves sl2 system", reason.clone());
    }

    if !cmc1 {
        b.skip("cmc-1 system", "liouville", reason.clone());
        b.skip("sinh-gordon", "sinh-gordon", reason);
        return;
    }
    match eq12_residual(g, CMC1_TOLERANCE) {
        Ok(r) => b.report("cmc-1 system", &r, |_| 2),
        Err(e) => b.fail("cmc-1 system", "liouville", &e),
    }
    match decouple(g, base, b.c) {
        Ok((_, sum)) => {
            b.stat("sinh-gordon", "sinh-gordon", sum.shgordon, 2);
            b.stat("sinh-gordon", "consistency with cmc-1 system", sum.consistency, 2);
            b.notes.insert("sinh-gordon: umbilic points".into(), sum.umbilic_points.to_string());
        }
        Err(Error::Umbilic(_)) => b.skip("sinh-gordon", "sinh-gordon", "umbilic: Q = 0"),
        Err(e) => b.fail("sinh-gordon", "sinh-gordon", &e),
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "profile {}: C = {}, h = {:.4e}", self.profile.name(), self.c, self.h).ok();
        writeln!(out, "{:<16} {:<46} {:>11} {:>11} {:>7}", "group", "check", "max", "tolerance", "status").ok();
        let num = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            writeln!(out, "{:<16} {:<46} {:>11} {:>11} {:>7}", c.group, c.name, num(c.max), num(c.tolerance), status)
                .ok();
            if let Some(r) = &c.reason {
                writeln!(out, "{:<16}   {r}", "").ok();
            }
        }
        for (k, v) in &self.notes {
            writeln!(out, "note {k}: {v}").ok();
        }
        writeln!(out, "overall: {}", if self.passed { "pass" } else { "FAIL" }).ok();
        out
    }

    pub fn check(&self, group: &str, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.group == group && c.name == name)
    }
}
