use thiserror::Error;

use crate::bipoly::BiDegree;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live on different surfaces: delta {0} vs delta {1}")]
    DeltaMismatch(u32, u32),

    #[error("polynomial is not bi-homogeneous")]
    NotBihomogeneous,

    #[error("expected bidegree {expected} for {what}, found {found}")]
    WrongBidegree {
        what: String,
        expected: BiDegree,
        found: BiDegree,
    },

    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("torus scalars must be nonzero")]
    ZeroScalar,

    #[error("Chern class ({a}, {b}) has no integral bidegree for delta {delta}")]
    NonIntegralClass { a: i64, b: i64, delta: u32 },

    #[error("colon or saturation by the zero polynomial")]
    ZeroDivisor,

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("singular scheme is not isolated")]
    NotIsolated,

    #[error("the zero form does not define a foliation")]
    ZeroForm,

    #[error("1-form violates the Euler conditions")]
    EulerViolation,

    #[error("({delta}, {d1}, {d2}) lies outside the required region: {why}")]
    RegionViolation {
        delta: u32,
        d1: i64,
        d2: i64,
        why: String,
    },

    #[error("invalid endomorphism data: {0}")]
    InvalidEndomorphism(String),

    #[error("inconsistent cohomology: h1 = {0} < 0")]
    NegativeH1(i64),

    #[error("invalid section file: {0}")]
    Section(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
