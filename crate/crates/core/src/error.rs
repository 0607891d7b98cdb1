use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // probability vectors
    #[error("probability vector needs at least 3 entries, got {0}")]
    TooShort(usize),
    #[error("entry p{index} = {value} is negative or not finite")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entries sum to {sum}, expected 1")]
    SumNotOne { sum: f64 },
    #[error("mean-zero condition violated: sum (1-j) p_j = {mean}")]
    MeanNotZero { mean: f64 },
    #[error("p1 must be exactly 0, got {0}")]
    P1NonZero(f64),
    #[error("p0 must be positive")]
    P0Zero,
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("invalid mixing weights: {0}")]
    WeightsInvalid(String),
    #[error("cannot parse probability vector: {0}")]
    ParseProb(String),

    // polynomial family
    #[error("|P_{index}| exceeded 1e300")]
    Overflow { index: usize },
    #[error("root finder did not converge, best residual {residual:e}")]
    NoConvergence { residual: f64 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    // solvers
    #[error("iterate collapsed to zero at iteration {iteration}")]
    ZeroVector { iteration: usize },
    #[error("non-finite iterate at iteration {iteration}")]
    NonFiniteIterate { iteration: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    // matrices
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad Matrix Market header: {0}")]
    BadHeader(String),
    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("Matrix Market parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),

    // analysis
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("gamma is enclosed by the ellipse")]
    GammaInside,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
