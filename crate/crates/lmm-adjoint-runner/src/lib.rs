//! Experiment runner for multistep adjoint convergence studies and
//! relaxation-system control: configuration, result tables, built-in problems.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod keys;
pub mod problems;
pub mod table;

pub use error::CliError;
pub use experiments::{run, write_output, Experiment, Output, Overrides, RouteSel};
