use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry buffer has {found} elements, expected {expected}")]
    BadShape { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid dimension {0}: need at least 2")]
    InvalidDimension(usize),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("observable has (near) zero variance {variance:e}; Pearson coefficient undefined")]
    DegenerateObservable { variance: f64 },

    #[error("observable eigenvalues are not distinct")]
    DegenerateSpectrum,

    #[error("conditional probability undefined: outcome {outcome} has probability {probability:e}")]
    UndefinedConditional { outcome: usize, probability: f64 },

    #[error("pairing is not a permutation of 0..{0}")]
    InvalidPairing(usize),

    #[error("need at least {needed} basis pairs, report has {found}")]
    NotEnoughPairs { needed: usize, found: usize },

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("unknown state family '{0}'")]
    UnknownFamily(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
