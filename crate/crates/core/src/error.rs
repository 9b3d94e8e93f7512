use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("no sign change of J_{nu} found up to x = {searched_to}")]
    ZeroNotBracketed { nu: f64, searched_to: f64 },

    #[error("non-finite integrand value {value} at rho = {rho}, theta = {theta}")]
    NonFinite { rho: f64, theta: f64, value: f64 },

    #[error("quadrature did not converge at {nodes}x{nodes} nodes (last values {previous}, {last})")]
    QuadratureNotConverged { nodes: usize, previous: f64, last: f64 },

    #[error("exponential factor overflows: |beta| * d = {0}")]
    Overflow(f64),

    #[error("failed to bracket the energy minimum within |beta| <= {limit}")]
    BracketFailed { limit: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNotConverged { iterations: usize, residual: f64 },

    #[error("singular pivot at row {0} in banded factorization")]
    SingularPivot(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
