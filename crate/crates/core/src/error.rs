//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quadrature request: {0}")]
    InvalidRule(String),

    #[error("cutoff radius {radius} too small for target degree {degree} (needs {required:.2})")]
    CutoffTooSmall {
        radius: f64,
        degree: usize,
        required: f64,
    },

    #[error("sample length {got} does not match rule length {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("fiber Hessian is not strictly positive at (t, z) = ({t}, {z}): phi_zz = {value}")]
    FiberDegenerate { t: String, z: String, value: f64 },

    #[error("finite-difference stencil leaves the weight domain: {0}")]
    StencilDomain(String),

    #[error("Gram matrix is not usable: {0}")]
    BadGram(String),

    #[error("Gram matrix condition number {cond:.3e} exceeds limit {limit:.3e}")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("curvature assembly is not Hermitian within tolerance: defect {0:.3e}")]
    NonHermitian(f64),

    #[error("hypothesis failure: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown check name `{0}`")]
    UnknownCheck(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
