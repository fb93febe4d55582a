//! Discrete Bayesian networks that connect project-management maturity
//! assessments to the probability of cost overrun.
//!
//! The crate is organized bottom-up:
//!
//! - [`network`]: variables, CPTs, validation, JSON and XMLBIF formats, and an
//!   enumeration oracle.
//! - [`inference`]: exact posteriors by variable elimination.
//! - [`maturity`]: the chronology × invariant maturity grid, drift-factor
//!   nodes and network assembly.
//! - [`learning`]: overcost event ingestion, binning, naive-Bayes learning
//!   and compilation of the overcost CPT.
//! - [`simulation`]: what-if queries, maturity sweeps and action ranking.
//! - [`server`] and [`cli`]: HTTP and command-line front ends.

pub mod cli;
pub mod error;
pub mod inference;
pub mod learning;
pub mod maturity;
pub mod network;
pub mod server;
pub mod simulation;

pub use error::{Error, Result};
