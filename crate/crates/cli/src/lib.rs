//! Scenario runner around the timeless-universe simulator: named pipelines
//! that build a universe, score a fixed set of checks against pinned
//! thresholds, and emit machine- and human-readable reports.

pub mod config;
pub mod report;
pub mod scenarios;

mod error;

pub use error::{Error, Result};
