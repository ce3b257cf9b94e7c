use alloc::string::String;

/// Errors raised by structural checks across the engine.
///
/// Budget exhaustion is never an error: it is reported as an `Unknown`
/// verdict by the operations that search.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("context mismatch: expected ({expected}), found ({found})")]
    ContextMismatch { expected: String, found: String },
    #[error("ill-sorted: {0}")]
    IllSorted(String),
    #[error("fragment error: {0}")]
    Fragment(String),
    #[error("theory is not universal: {0}")]
    NonUniversal(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("refusing to enumerate: {0}")]
    Refused(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
