use thiserror::Error;

/// Errors raised by the simulation and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("grid too small for mode: support {support:.3e} m needs extent > {needed:.3e} m")]
    GridTooSmall { support: f64, needed: f64 },
    #[error("invalid topological charge {0}")]
    InvalidCharge(i32),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("least-squares fit is degenerate: {0}")]
    FitDegenerate(String),
    #[error("no counts in either basis")]
    NoCounts,
    #[error("basis `{0}` missing from transmittance table")]
    MissingBasis(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix is not a valid density matrix: {0}")]
    NotPsd(String),
    #[error("projection data do not determine the state: {0}")]
    InsufficientData(String),
    #[error("no nodal line below {threshold} of peak")]
    NodalLineNotFound { threshold: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidGrid(_) | Error::Io(_) | Error::Csv(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
