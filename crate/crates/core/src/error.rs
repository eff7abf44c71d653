use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("profile error: {0}")]
    Profile(String),

    #[error("curvature undefined at r = {r}: profile vanishes there and no closed-form limit is available")]
    CurvatureAtApex { r: f64 },

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("profile is non-positive inside the mesh domain at r = {r} (f = {value})")]
    NonPositiveProfile { r: f64, value: f64 },

    #[error("cochain degree {got} not valid here: {context}")]
    Degree { got: u8, context: &'static str },

    #[error("cochain length {got} does not match cell count {expected} for degree {degree}")]
    CochainLength { degree: u8, got: usize, expected: usize },

    #[error("input 1-cochain is not closed: |d alpha| / |alpha| = {ratio:.3e} exceeds {limit:.1e}")]
    NotClosed { ratio: f64, limit: f64 },

    #[error("linear solver failed: {0}")]
    Solver(String),

    #[error("criterion input error: {0}")]
    Criterion(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
