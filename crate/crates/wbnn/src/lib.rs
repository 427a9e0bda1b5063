//! Experiment harness around `wbnn-core`: parallel runners, CSV and SVG
//! emitters, run manifests and the `wbnn` command line.

pub mod cli;
pub mod error;
pub mod output;
pub mod parallel;
pub mod stats;
pub mod svg;

pub use error::{AppError, AppResult};
