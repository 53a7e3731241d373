use thiserror::Error;

use crate::model::ClassId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    BadRational(String),

    #[error("unknown class id {0}")]
    UnknownClass(ClassId),

    #[error("duplicate class id {0}")]
    DuplicateClass(ClassId),

    #[error("dual map is not an involution at {0}")]
    DualNotInvolutive(ClassId),

    #[error("model has no unramified class `u`")]
    MissingUnit,

    #[error("class {0}: {1}")]
    BadClass(ClassId, String),

    #[error("pairing entry for ({0}, {1}) is missing and not forced by the unit or max rule")]
    MissingPairing(ClassId, ClassId),

    #[error("pairing entry for ({0}, {1}) given twice with different values")]
    ConflictingPairing(ClassId, ClassId),

    #[error("{0} is not a character class of the model")]
    NotACharacter(ClassId),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent of the zero representation is undefined")]
    ZeroRepresentation,

    #[error("non-integral exponent {0}; the model violates integrality")]
    NonIntegral(String),

    #[error("{0}")]
    Precondition(String),

    #[error("generator failed after {rounds} rounds: {reason}")]
    Generation { rounds: usize, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
