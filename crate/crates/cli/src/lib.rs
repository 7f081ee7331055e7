//! Experiment harness for cooperative LMS over agent networks: presets,
//! JSON experiment configs, trial orchestration and CSV emission.

pub mod config;
pub mod edgelist;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

pub use error::{HarnessError, Result};
