//! File formats, parallel drivers and the `iterstbc` command line.

pub mod checks;
pub mod cli;
pub mod config;
pub mod error;
pub mod json;
pub mod parallel;
pub mod report;

pub use cli::run;
