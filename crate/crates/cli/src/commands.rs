//! The pipeline stages behind each subcommand, independent of argument parsing.

use std::collections::BTreeMap;

use cmc_core::cgrid::{ComplexField, GridChart, Mask, RealField};
use cmc_core::decouple::{decouple, DecoupleSummary};
use cmc_core::sigma::{
    charge_identity_residual, instanton, sample_map, spinors_from_rho_with, topological_charge, ChargeIdentity,
    GaussMapField,
};
use cmc_core::weierstrass::families::{conformal_cylinder, cylinder};
use cmc_core::weierstrass::{derive_geometry, integrate_surface, SpinorData};
use cmc_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::dataset::{standard_conventions, DatasetFile, Provenance, Role};
use crate::expr::parse_rational;
use crate::mesh::{build_mesh, TriMesh};
use crate::verify::{default_base, verify_spinors, Profile, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    /// Weierstrass data of a holomorphic map `ρ` (always CMC-1).
    Instanton,
    /// The closed-form cylinder, optionally composed with a holomorphic `--map`.
    Cylinder,
    /// Spinors rebuilt from a Gauss map `ρ` and a constant `H`.
    #[value(name = "from_rho")]
    FromRho,
}

impl Generator {
    fn name(self) -> &'static str {
        match self {
            Generator::Instanton => "instanton",
            Generator::Cylinder => "cylinder",
            Generator::FromRho => "from_rho",
        }
    }
}

/// Everything `generate` needs; unused fields are ignored by the chosen generator.
#[derive(Debug, Clone)]
pub struct GenerateParams {
    pub kind: Generator,
    pub rho: Option<String>,
    pub h: Option<f64>,
    pub r: Option<f64>,
    pub map: Option<String>,
    /// `[x0, x1, y0, y1]`.
    pub domain: [f64; 4],
    pub n: usize,
}

fn required<T: Clone>(v: &Option<T>, flag: &str, kind: Generator) -> Result<T> {
    v.clone().ok_or_else(|| Error::BadParameter(format!("generate {} needs {flag}", kind.name())))
}

/// Builds a data set holding `ψ₁`, `ψ₂`, `p` (and `ρ` for `from_rho`).
pub fn generate(params: &GenerateParams) -> Result<DatasetFile> {
    let [x0, x1, y0, y1] = params.domain;
    let chart = GridChart::new(x0, x1, y0, y1, params.n, params.n)?;
    let mut parameters = BTreeMap::new();
    parameters.insert("domain".to_string(), Value::from(params.domain.to_vec()));
    parameters.insert("n".to_string(), Value::from(params.n));
    let mut rho_field = None;
    let spinors = match params.kind {
        Generator::Instanton => {
            let map = parse_rational(&required(&params.rho, "--rho", params.kind)?)?;
            parameters.insert("rho".into(), Value::from(map.to_string()));
            instanton(&map, &chart)?
        }
        Generator::Cylinder => {
            let r = required(&params.r, "--r", params.kind)?;
            parameters.insert("r".into(), Value::from(r));
            match &params.map {
                None => cylinder(r, &chart)?,
                Some(text) => {
                    let map = parse_rational(text)?;
                    parameters.insert("map".into(), Value::from(map.to_string()));
                    conformal_cylinder(r, &chart, |w| map.eval(w), |w| map.derivative_at(w))?
                }
            }
        }
        Generator::FromRho => {
            let map = parse_rational(&required(&params.rho, "--rho", params.kind)?)?;
            let h = required(&params.h, "--H", params.kind)?;
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::BadParameter(format!("--H must be positive, got {h}")));
            }
            parameters.insert("rho".into(), Value::from(map.to_string()));
            parameters.insert("H".into(), Value::from(h));
            let gm = GaussMapField::from_field(sample_map(&map, &chart, None, true)?);
            // ρ(z) = map(z̄), so ∂ρ̄ = conj(map′(z̄)) exactly.
            let d_bar = ComplexField::from_index_fn(&chart, |i, j| {
                gm.rho.is_valid(i, j).then(|| map.derivative_at(chart.z(i, j).conj()).conj())
            });
            let s = spinors_from_rho_with(&gm, &d_bar, &RealField::constant(&chart, h))?;
            rho_field = Some(gm.rho);
            s
        }
    };
    let provenance = Provenance {
        generator: params.kind.name().into(),
        parameters,
        conventions: standard_conventions(),
        results: BTreeMap::new(),
    };
    let mut file = DatasetFile::new(&chart, provenance);
    push_spinors(&mut file, &spinors);
    if let Some(rho) = rho_field {
        file.push_complex(Role::Rho, &rho);
    }
    Ok(file)
}

fn push_spinors(file: &mut DatasetFile, s: &SpinorData) {
    file.push_complex(Role::Psi1, s.psi1());
    file.push_complex(Role::Psi2, s.psi2());
    file.push_real(Role::P, s.p());
}

pub fn verify(file: &DatasetFile, profile: Profile) -> Result<VerificationReport> {
    verify_spinors(&file.spinors()?, profile)
}

fn base_or_default(mask: &Mask, base: Option<(usize, usize)>) -> Result<(usize, usize)> {
    match base {
        Some(b) => Ok(b),
        None => default_base(mask).ok_or(Error::EmptyGeometry),
    }
}

/// Outcome of [`decouple_file`].
#[derive(Debug, Clone, Serialize)]
pub struct DecoupleOutcome {
    pub summary: DecoupleSummary,
    pub c: f64,
    pub h: f64,
    /// `C·h²`, the bound applied to the sinh-Gordon residual.
    pub tolerance: f64,
    pub passed: bool,
}

/// Adds `η`, `R`, `√Q` and `Q` to `file` and records the summary under
/// `provenance.results["decouple"]`.
pub fn decouple_file(
    file: &mut DatasetFile,
    base: Option<(usize, usize)>,
    profile: Profile,
) -> Result<DecoupleOutcome> {
    let s = file.spinors()?;
    let g = derive_geometry(&s)?;
    let base = base_or_default(s.mask(), base)?;
    let c = profile.constant();
    let (d, summary) = decouple(&g, base, c)?;
    let h = s.chart().h();
    let tolerance = c * h * h;
    let passed = summary.shgordon.max <= tolerance && summary.consistency.max <= tolerance;
    file.push_complex(Role::Eta, &d.eta);
    file.push_real(Role::ConformalRatio, &d.r);
    file.push_complex(Role::SqrtHopf, &d.sqrt_q);
    file.push_complex(Role::Hopf, &g.hopf);
    let outcome = DecoupleOutcome { summary, c, h, tolerance, passed };
    file.provenance.results.insert("decouple".into(), serde_json::to_value(&outcome)?);
    Ok(outcome)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChargeReport {
    pub charge: f64,
    pub identity: ChargeIdentity,
    /// Disk radius about the origin, if one restricted the domain.
    pub radius: Option<f64>,
    pub convention: Value,
}

/// Topological charge of the normal field, optionally restricted to `|z| ≤ radius`.
pub fn charge(file: &DatasetFile, radius: Option<f64>) -> Result<ChargeReport> {
    let mut s = file.spinors()?;
    if let Some(rad) = radius {
        if !(rad.is_finite() && rad > 0.0) {
            return Err(Error::BadParameter(format!("--radius must be positive, got {rad}")));
        }
        let chart = *s.chart();
        let disk = Mask::from_shape_fn(chart.shape(), |(i, j)| chart.z(i, j).norm() <= rad);
        s = s.and_mask(&disk);
    }
    let g = derive_geometry(&s)?;
    let convention = file.provenance.conventions.get("charge").cloned().unwrap_or(Value::Null);
    Ok(ChargeReport {
        charge: topological_charge(&g.n)?,
        identity: charge_identity_residual(&g.n, &g.q)?,
        radius,
        convention,
    })
}

/// Mesh of the stored `r` and `n`; missing fields are derived from the spinors,
/// integrating from the default base point.
pub fn export_mesh(file: &DatasetFile) -> Result<TriMesh> {
    if file.has(Role::Position) && file.has(Role::Normal) {
        return build_mesh(&file.vec3(Role::Position)?, &file.vec3(Role::Normal)?);
    }
    let s = file.spinors()?;
    let n = if file.has(Role::Normal) { file.vec3(Role::Normal)? } else { s.normal() };
    let r = if file.has(Role::Position) {
        file.vec3(Role::Position)?
    } else {
        integrate_surface(&s, base_or_default(s.mask(), None)?)?.r
    };
    build_mesh(&r, &n)
}
