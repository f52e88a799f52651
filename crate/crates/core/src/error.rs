use thiserror::Error;

use crate::symexpr::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("insufficient domain: {rejects} sample points rejected after {accepted} accepted")]
    InsufficientDomain { accepted: usize, rejects: usize },

    #[error("invalid equality configuration: {0}")]
    InvalidConfig(String),

    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: Box<Rational>, right: Box<Rational> },

    #[error("radicand gamma^2 - theta vanishes identically")]
    DegenerateRadicand,

    #[error("phi is not in the kernel of d^2 + p*d + q")]
    KernelMismatch,

    #[error("operator does not have the monic second-order shape: {reason}")]
    ShapeMismatch { reason: String, keys: Vec<(u32, u32)> },

    #[error("coordinate map has identically vanishing derivative")]
    DegenerateMap,

    #[error("coordinate change requires an inverse map")]
    MissingInverse,

    #[error("supplied inverse does not invert the coordinate map")]
    InverseMismatch,

    #[error("coordinate map is not orientation preserving on the sampling domain")]
    OrientationReversing,

    #[error("singular weight {weight}: {denominator} vanishes")]
    SingularWeight { weight: Rational, denominator: String },

    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Stable identifier used in JSON error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier { .. } => "unknown_identifier",
            Error::InsufficientDomain { .. } => "insufficient_domain",
            Error::InvalidConfig(_) => "invalid_config",
            Error::WeightMismatch { .. } => "weight_mismatch",
            Error::DegenerateRadicand => "degenerate_radicand",
            Error::KernelMismatch => "kernel_mismatch",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::DegenerateMap => "degenerate_map",
            Error::MissingInverse => "missing_inverse",
            Error::InverseMismatch => "inverse_mismatch",
            Error::OrientationReversing => "orientation_reversing",
            Error::SingularWeight { .. } => "singular_weight",
            Error::Input(_) => "input",
        }
    }
}
