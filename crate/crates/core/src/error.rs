use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("series did not converge after {terms} terms: {what}")]
    NoConvergence { what: String, terms: usize },
    #[error("argument outside supported region: {0}")]
    Region(String),
    #[error("k_y must be nonzero")]
    ZeroWavenumber,
    #[error("singular transformation frame at x = {x}: |det u| = {det:e}")]
    SingularFrame { x: f64, det: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("integrator step failure at x = {x}: {reason}")]
    StepFailure { x: f64, reason: String },
    #[error("bad grid: {0}")]
    Grid(String),
    #[error("sign precondition violated: {0}")]
    Sign(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("invalid input: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
