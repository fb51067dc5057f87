use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported derivative order {0}; compose calls for higher orders")]
    UnsupportedOrder(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("lambda = {re}{im:+}i lies outside the sector |arg| < pi - {epsilon}")]
    OutsideSector { re: f64, im: f64, epsilon: f64 },
    #[error("singular mode system at tangential wavenumber {wavenumber:?} (pivot {pivot})")]
    SingularMode { wavenumber: Vec<f64>, pivot: usize },
    #[error("contour quadrature did not converge: node-doubling change {change:.3e} > {tolerance:.3e}")]
    QuadratureNotConverged { change: f64, tolerance: f64 },
    #[error("blow-up at t = {time}: norm grew by factor {growth:.3e}")]
    BlowUp { time: f64, growth: f64 },
    #[error("trajectory too short: {0} stored states (need at least 2)")]
    TrajectoryTooShort(usize),
    #[error("snapshot format: {0}")]
    Snapshot(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
