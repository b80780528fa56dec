use thiserror::Error;

/// Errors raised by the grid calculus, the geometry pipeline and the file layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },

    #[error("fields live on different charts")]
    ChartMismatch,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path passes through masked grid point ({0}, {1})")]
    PathThroughMask(usize, usize),

    #[error("base point ({0}, {1}) is masked or outside the chart")]
    MaskedBase(usize, usize),

    #[error("every grid point is masked: no geometry to derive")]
    EmptyGeometry,

    #[error("integrated radius vector has imaginary residue {residue:.3e} above {limit:.3e}")]
    ImaginaryResidueTooLarge { residue: f64, limit: f64 },

    #[error("square-root branch is ambiguous near grid point ({0}, {1})")]
    BranchAmbiguity(usize, usize),

    #[error("umbilic data: {0}")]
    Umbilic(String),

    #[error("Hopf differential is not holomorphic: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotHolomorphic { residual: f64, tolerance: f64 },

    #[error("data is not CMC-1: max |H - 1| = {0:.3e}")]
    NotCmc1(f64),

    #[error("normal field is not unit: max ||n| - 1| = {0:.3e}")]
    NotUnit(f64),

    #[error("pole of the rational map lies on unmasked grid point ({0}, {1})")]
    PoleOnGrid(usize, usize),

    #[error("SU(2) element is not unitary: |alpha|^2 + |beta|^2 = {0}")]
    NotUnitary(f64),

    #[error("bad spectral parameter: {0}")]
    BadParameter(String),

    #[error("linear problem mismatch: {0}")]
    LabelMismatch(String),

    #[error("spectral parameter {0} is singular (mu = 1 or mu = -1)")]
    SingularParameter(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("expression is not a rational function of z: {0}")]
    NonRational(String),

    #[error("degree {0} exceeds the cap of 64")]
    DegreeCap(usize),

    #[error("unknown dataset version {0}")]
    UnknownVersion(String),

    #[error("dataset is missing field '{0}'")]
    MissingField(String),

    #[error("malformed dataset: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
