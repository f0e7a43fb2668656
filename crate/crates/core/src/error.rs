use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("{n_qubits} qubits exceeds the supported maximum of {max}")]
    DimensionOverflow { n_qubits: usize, max: usize },

    #[error("total Hilbert-space dimension {dim} exceeds the limit of {max}")]
    HilbertSpaceOverflow { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid spin value {value} at position {index}; expected ±1")]
    InvalidSpin { index: usize, value: f64 },

    #[error("unsupported number of qubits: {0}")]
    UnsupportedQubitCount(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step-size guard violated: dt·‖H‖ = {value:.4} > {limit}")]
    StepSizeGuard { value: f64, limit: f64 },

    #[error("state invariant violated at t = {time}: {what} = {value:e}")]
    InvariantViolation { what: &'static str, value: f64, time: f64 },

    #[error("unknown basis group '{0}'")]
    UnknownGroup(String),

    #[error("Jacobi eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
