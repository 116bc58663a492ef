use thiserror::Error;

/// Errors raised by the algebra, field, correlation and registration layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A spinor with zero scalar and bivector parts has no argument.
    #[error("spinor argument undefined: scalar and bivector parts are both zero")]
    DegenerateSpinor,

    #[error("expected a pure vector, found grade-0/2 parts (s = {s:e}, e12 = {b:e})")]
    NotAVector { s: f64, b: f64 },

    #[error("expected a spinor, found vector part (e1 = {x:e}, e2 = {y:e})")]
    NotASpinor { x: f64, y: f64 },

    #[error("fields live on different domains: {0} vs {1}")]
    DomainMismatch(String, String),

    #[error("sampled fields have incompatible grids: {0}")]
    ShapeMismatch(String),

    /// The reference field (or its correlation with the pattern) vanishes identically.
    #[error("field is identically zero; no rotation can be recovered")]
    DegenerateZeroField,

    #[error("saddle part of the pattern is zero; known-pattern detection needs a nonzero saddle component")]
    ZeroSaddlePart,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
