use std::path::PathBuf;

use crate::model::ModelError;
use crate::syntax::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] doctrina_core::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown goal `{0}`")]
    UnknownGoal(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}
