//! Campaign harness, file formats and command-line front end for `detlab-core`.

pub mod cli;
pub mod emit;
pub mod encode;
pub mod error;
pub mod formats;
pub mod harness;
pub mod runner;

pub use error::{LabError, LabResult};
