//! Theory files, model files and the command-line front end over
//! `doctrina_core`.

pub mod commands;
pub mod config;
mod error;
pub mod laws;
pub mod model;
pub mod report;
pub mod syntax;
pub mod validate;

pub use config::RunConfig;
pub use error::Error;
