use thiserror::Error;

/// Errors raised by the geometry pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian: anti-Hermitian part has max-norm {0:e}")]
    NotHermitian(f64),

    #[error("eigen-solver did not converge for a {dim}x{dim} matrix (max |entry| {max_entry:e}, finite: {finite})")]
    EigenNonConvergence {
        dim: usize,
        max_entry: f64,
        finite: bool,
    },

    #[error("singular value decomposition did not converge for a {0}x{0} matrix")]
    SvdNonConvergence(usize),

    #[error("function undefined on eigenvalue {eigenvalue:e}")]
    FunctionDomain { eigenvalue: f64 },

    #[error("parameter {coordinate} = {value} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain {
        coordinate: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid differentiation plan: {0}")]
    InvalidPlan(String),

    #[error("parameter index {index} out of range for {count} parameters")]
    ParameterIndex { index: usize, count: usize },

    #[error("invalid parameter point: {0}")]
    InvalidPoint(String),

    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("model has no temperature; mixed-state quantities need one")]
    MissingTemperature,

    #[error("density matrix trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("state is not normalized: <psi|psi> = {0}")]
    NotNormalized(f64),

    #[error("density matrix is rank deficient (min eigenvalue {min_eigenvalue:e} <= tolerance {tolerance:e}); rank-deficient purifications have no unique polar decomposition and are not supported")]
    RankDeficient { min_eigenvalue: f64, tolerance: f64 },

    #[error("matrix is not unitary: |U^dag U - I|_max = {0:e}")]
    NotUnitary(f64),

    #[error("matrix is not anti-Hermitian: |A^dag + A|_max = {0:e}")]
    NotAntiHermitian(f64),

    #[error("unsupported dimension {0}; only N = 2 is supported here")]
    UnsupportedDimension(usize),

    #[error("Bloch vector length {0} reaches the purity boundary 1/2")]
    PurityBoundary(f64),

    #[error("spectral gap {gap:e} below threshold {threshold:e}")]
    Degenerate { gap: f64, threshold: f64 },

    #[error("loop is under-resolved: {0}")]
    UnderResolvedLoop(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
