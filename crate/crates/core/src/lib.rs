//! Domain-adaptive decision trees: information gain with target-domain
//! knowledge, shift diagnostics, fairness metrics and an experiment harness.

pub mod data;
pub mod error;
pub mod harness;
pub mod knowledge;
pub mod metrics;
pub mod par;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
