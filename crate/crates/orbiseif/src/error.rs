use thiserror::Error;

/// Errors raised by the library. Each variant has a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("no consistent boundary invariant: {0}")]
    NoConsistentXi(String),
    #[error("out of classification scope: {0}")]
    Scope(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("closure failed: {0}")]
    Closure(String),
    #[error("direction not invariant: {0}")]
    NotInvariant(String),
    #[error("no vertical translation: {0}")]
    NoVerticalTranslation(String),
    #[error("stabilizer lift not found: {0}")]
    LiftNotFound(String),
    #[error("unsupported corner pattern: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Geometry(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::Semantic(_) => "semantic",
            Error::InvalidSymbol(_) => "invalid_symbol",
            Error::NoConsistentXi(_) => "no_consistent_xi",
            Error::Scope(_) => "scope",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::Closure(_) => "closure",
            Error::NotInvariant(_) => "not_invariant",
            Error::NoVerticalTranslation(_) => "no_vertical_translation",
            Error::LiftNotFound(_) => "lift_not_found",
            Error::Unsupported(_) => "unsupported",
            Error::Geometry(_) => "geometry",
        }
    }

    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax { offset, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
