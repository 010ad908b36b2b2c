//! Submodular maximization with exact oracle-query accounting.
//!
//! Every algorithm in this crate talks to the objective through a [`ValueOracle`] and to the
//! constraint through a [`Matroid`] handle. Both handles charge a shared [`QueryLedger`], so a
//! run's value-oracle and independence-oracle costs can be read off after it finishes.
//!
//! The algorithms are grouped by constraint:
//!
//! * [`algos`]: matroid constraints (thresholding greedy, random lazy greedy, the combined
//!   algorithm with its value/independence tradeoff knob `lambda`).
//! * [`cardinality`]: cardinality constraints (random sampling, lazy greedy variants and the
//!   standard/random greedy baselines).
//! * [`multilinear`]: multilinear-extension estimator, continuous greedy and swap rounding.

pub mod algos;
pub mod cardinality;
mod error;
pub mod functions;
mod ledger;
pub mod matroid;
pub mod multilinear;
pub mod oracle;

pub use error::{Error, Result};
pub use ledger::{LedgerSnapshot, QueryLedger};
pub use matroid::{IndependenceSystem, Matroid};
pub use oracle::{ElementId, SetFunction, Subset, ValueOracle};
