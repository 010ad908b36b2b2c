//! Experiment harness: instance generation, exhaustive optima, seeded trials and summaries.

pub mod brute;
pub mod generate;
pub mod runner;
pub mod schema;
pub mod summary;
