//! Self-describing JSON container for grid fields.
//!
//! Floats are written as `{:.16e}` (17 significant digits), so reading a file
//! and writing it again reproduces the same bytes.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use cmc_core::cgrid::{ComplexField, GridChart, Mask, RealField, Vec3Field};
use cmc_core::weierstrass::SpinorData;
use cmc_core::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

pub const FORMAT: &str = "cmc-dataset";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "psi1")]
    Psi1,
    #[serde(rename = "psi2")]
    Psi2,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "rho")]
    Rho,
    #[serde(rename = "H")]
    MeanCurvature,
    #[serde(rename = "n")]
    Normal,
    #[serde(rename = "r")]
    Position,
    #[serde(rename = "Q")]
    Hopf,
    #[serde(rename = "R")]
    ConformalRatio,
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "sqrtQ")]
    SqrtHopf,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Psi1 => "psi1",
            Role::Psi2 => "psi2",
            Role::P => "p",
            Role::Rho => "rho",
            Role::MeanCurvature => "H",
            Role::Normal => "n",
            Role::Position => "r",
            Role::Hopf => "Q",
            Role::ConformalRatio => "R",
            Role::Eta => "eta",
            Role::SqrtHopf => "sqrtQ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartMeta {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl From<&GridChart> for ChartMeta {
    fn from(c: &GridChart) -> Self {
        Self { x_min: c.x_min(), x_max: c.x_max(), y_min: c.y_min(), y_max: c.y_max(), nx: c.nx(), ny: c.ny() }
    }
}

impl ChartMeta {
    pub fn chart(&self) -> Result<GridChart> {
        GridChart::new(self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny)
    }
}

/// One stored array. Rows are indexed by `iy`, columns by `ix`; `mask` is 1
/// where the sample is invalid (its stored value is then 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    pub mask: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub conventions: BTreeMap<String, Value>,
    /// Summaries appended by later pipeline stages.
    #[serde(default)]
    pub results: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format: String,
    pub version: u32,
    pub chart: ChartMeta,
    pub fields: Vec<FieldRecord>,
    pub provenance: Provenance,
}

/// Compact JSON with every float as `{:.16e}`.
struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Conventions every generator records.
pub fn standard_conventions() -> BTreeMap<String, Value> {
    let mut c = BTreeMap::new();
    c.insert("dz^dzbar".into(), Value::from("-2i dx dy"));
    c.insert("wirtinger".into(), Value::from("d = (d/dx - i d/dy)/2, dbar = (d/dx + i d/dy)/2"));
    c.insert("charge".into(), Value::from("(1/4pi) * integral of (n, n_x x n_y) dx dy"));
    c.insert("layout".into(), Value::from("arrays indexed [iy][ix]; mask 1 = invalid"));
    c
}

fn split<T>(chart: &GridChart, f: impl Fn(usize, usize) -> Option<T>, part: impl Fn(&T) -> f64) -> Vec<Vec<f64>> {
    (0..chart.ny()).map(|j| (0..chart.nx()).map(|i| f(i, j).map_or(0.0, |v| part(&v))).collect()).collect()
}

fn mask_rows(chart: &GridChart, valid: impl Fn(usize, usize) -> bool) -> Vec<Vec<u8>> {
    (0..chart.ny()).map(|j| (0..chart.nx()).map(|i| u8::from(!valid(i, j))).collect()).collect()
}

fn finite(v: Complex64) -> Option<Complex64> {
    (v.re.is_finite() && v.im.is_finite()).then_some(v)
}

impl DatasetFile {
    pub fn new(chart: &GridChart, provenance: Provenance) -> Self {
        Self { format: FORMAT.into(), version: VERSION, chart: chart.into(), fields: Vec::new(), provenance }
    }

    pub fn grid_chart(&self) -> Result<GridChart> {
        self.chart.chart()
    }

    fn replace(&mut self, rec: FieldRecord) {
        self.fields.retain(|f| !(f.role == rec.role && f.component == rec.component));
        self.fields.push(rec);
    }

    pub fn push_complex(&mut self, role: Role, f: &ComplexField) {
        let chart = *f.chart();
        let get = |i, j| f.get(i, j).and_then(finite);
        self.replace(FieldRecord {
            role,
            component: None,
            re: split(&chart, get, |v| v.re),
            im: Some(split(&chart, get, |v| v.im)),
            mask: mask_rows(&chart, |i, j| get(i, j).is_some()),
        });
    }

    pub fn push_real(&mut self, role: Role, f: &RealField) {
        self.push_real_component(role, None, f);
    }

    fn push_real_component(&mut self, role: Role, component: Option<usize>, f: &RealField) {
        let chart = *f.chart();
        let get = |i, j| f.get(i, j).filter(|v| v.is_finite());
        self.replace(FieldRecord {
            role,
            component,
            re: split(&chart, get, |v| *v),
            im: None,
            mask: mask_rows(&chart, |i, j| get(i, j).is_some()),
        });
    }

    pub fn push_vec3(&mut self, role: Role, f: &Vec3Field) {
        for k in 0..3 {
            self.push_real_component(role, Some(k), f.component(k));
        }
    }

    pub fn has(&self, role: Role) -> bool {
        self.fields.iter().any(|f| f.role == role)
    }

    fn record(&self, role: Role, component: Option<usize>) -> Result<&FieldRecord> {
        self.fields.iter().find(|f| f.role == role && f.component == component).ok_or_else(|| {
            Error::MissingField(match component {
                Some(k) => format!("{}[{k}]", role.name()),
                None => role.name().into(),
            })
        })
    }

    fn arrays(&self, rec: &FieldRecord) -> Result<(GridChart, Mask)> {
        let chart = self.grid_chart()?;
        let (nx, ny) = chart.shape();
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == ny && rows.iter().all(|r| r.len() == nx);
        let mask_ok = rec.mask.len() == ny && rec.mask.iter().all(|r| r.len() == nx);
        if !rows_ok(&rec.re) || !rec.im.as_ref().is_none_or(rows_ok) || !mask_ok {
            return Err(Error::Format(format!("field '{}' does not match the {nx}x{ny} chart", rec.role.name())));
        }
        Ok((chart, Mask::from_shape_fn((nx, ny), |(i, j)| rec.mask[j][i] == 0)))
    }

    pub fn complex(&self, role: Role) -> Result<ComplexField> {
        let rec = self.record(role, None)?;
        let (chart, mask) = self.arrays(rec)?;
        let im =
            rec.im.as_ref().ok_or_else(|| Error::Format(format!("field '{}' has no imaginary part", role.name())))?;
        let values = Array2::from_shape_fn(chart.shape(), |(i, j)| Complex64::new(rec.re[j][i], im[j][i]));
        ComplexField::new(chart, values, mask)
    }

    fn real_component(&self, role: Role, component: Option<usize>) -> Result<RealField> {
        let rec = self.record(role, component)?;
        let (chart, mask) = self.arrays(rec)?;
        let values = Array2::from_shape_fn(chart.shape(), |(i, j)| rec.re[j][i]);
        RealField::new(chart, values, mask)
    }

    pub fn real(&self, role: Role) -> Result<RealField> {
        self.real_component(role, None)
    }

    pub fn vec3(&self, role: Role) -> Result<Vec3Field> {
        let [a, b, c] = [0, 1, 2].map(|k| self.real_component(role, Some(k)));
        Vec3Field::new([a?, b?, c?])
    }

    /// `ψ₁`, `ψ₂` and `p`.
    pub fn spinors(&self) -> Result<SpinorData> {
        SpinorData::new(self.complex(Role::Psi1)?, self.complex(Role::Psi2)?, self.real(Role::P)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
        self.serialize(&mut ser).expect("dataset serializes");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text)?;
        match raw.get("format").and_then(Value::as_str) {
            Some(FORMAT) => {}
            Some(other) => return Err(Error::Format(format!("format is '{other}', expected '{FORMAT}'"))),
            None => return Err(Error::MissingField("format".into())),
        }
        match raw.get("version") {
            Some(v) if v.as_u64() == Some(VERSION as u64) => {}
            Some(v) => return Err(Error::UnknownVersion(v.to_string())),
            None => return Err(Error::MissingField("version".into())),
        }
        let file: DatasetFile = serde_json::from_value(raw)?;
        file.grid_chart()?;
        for rec in &file.fields {
            file.arrays(rec)?;
            if matches!(rec.role, Role::Normal | Role::Position) != rec.component.is_some() {
                return Err(Error::Format(format!("field '{}' has the wrong component layout", rec.role.name())));
            }
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
