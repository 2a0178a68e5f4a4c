use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition (bad sizes, inadmissible
    /// parameters, parity mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Basis parameter sits on or beyond a singularity of the matrix elements.
    #[error("inadmissible basis parameter: {0}")]
    Inadmissible(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("no interior minimum found: {0}")]
    NoMinimum(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("root search incomplete: found {found} of {expected} roots")]
    MissingRoots { found: usize, expected: usize },

    /// Quasi-exact solution fails its termination or residual check.
    #[error("quasi-exact solution rejected: {0}")]
    QesViolation(String),

    /// Energy gap smaller than the arithmetic can resolve.
    #[error("level splitting unresolved: {0}")]
    Unresolved(String),
}

impl Error {
    /// True for failures caused by the caller's input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Inadmissible(_))
    }
}
