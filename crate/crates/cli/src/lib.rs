//! Report assembly, batch processing and built-in checks for the `shl` binary.

pub mod batch;
pub mod checks;
pub mod error;
pub mod json;
pub mod report;

pub use error::CliError;
pub use report::{analyze, render_text, AnalysisReport, Options};
