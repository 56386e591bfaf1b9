use thiserror::Error;

/// All failure modes across the crate. Messages name the violated invariant
/// so CLI consumers can surface them directly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix must be Hermitian within {tol:e}, max deviation {deviation:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not density-like: {reason}")]
    NotDensityLike { reason: String },

    #[error(
        "eigenvalue of the spin-flip product is not real nonnegative within tolerance: {value}"
    )]
    NumericalInstability { value: num_complex::Complex64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit count must be at least {min}, got {n}")]
    InvalidQubitCount { n: usize, min: usize },

    #[error("coefficient vector must have unit norm within {tol:e}, got squared norm {norm_sq}")]
    NormViolation { norm_sq: f64, tol: f64 },

    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("full-space representation needs n <= {cap}, got n = {n}")]
    CapExceeded { n: usize, cap: usize },

    #[error("qubit index out of range or repeated: {index} (n = {n})")]
    IndexError { index: usize, n: usize },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state must be pure: trace of rho^2 is {purity}, need >= 1 - {tol:e}")]
    NotPure { purity: f64, tol: f64 },

    #[error("operation requires exactly {expected} qubits, got {got}")]
    WrongQubitCount { expected: usize, got: usize },

    #[error("normalization constant Z must be positive, got {z}")]
    InvalidZ { z: f64 },

    #[error("sequence of measure values must be nonempty")]
    EmptySequence,

    #[error("excitation coherence between qubits {s} and {r} must vanish, |B| = {magnitude:e}")]
    CoherencesNotZero { s: usize, r: usize, magnitude: f64 },

    #[error("excitation population {i} is zero but its vacuum coherence |X| = {x_abs:e} is not; no positive semidefinite state has this form")]
    SylvesterViolation { i: usize, x_abs: f64 },

    #[error("ensemble weight p0 = {p0:e} is negative beyond tolerance; the input is not a valid density matrix")]
    NegativeWeight { p0: f64 },

    #[error("dephasing strength must lie in [0, 1], got {strength}")]
    StrengthOutOfRange { strength: f64 },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("JSON error: {0}")]
    Json(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("linear algebra backend failure: {0}")]
    Backend(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
