//! Initial-data control of relaxation systems: tracking functionals, adjoint
//! gradients, a TV-diminishing smoother and Barzilai–Borwein steepest descent.

mod bb;
mod descent;
mod filter;
mod functional;

pub use bb::{bb_step, BbVariant, SIGMA_MAX, SIGMA_MIN};
pub use descent::{
    gradient_from_adjoint, optimize, optimize_with, DescentState, FilterPlacement, IterationRecord,
    OptimizeConfig, OptimizeResult, StepRule,
};
pub use filter::{total_variation, tv_filter};
pub use functional::TrackingFunctional;

use crate::relax::RelaxError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("grid mismatch: expected {expected} values, got {got}")]
    GridMismatch { expected: usize, got: usize },
    #[error("adjoint field is at step {0}, not at t = 0")]
    AdjointNotAtStart(usize),
    #[error("invalid optimizer setting: {0}")]
    InvalidConfig(&'static str),
    #[error("iteration {iteration}: {source}")]
    Solver {
        iteration: usize,
        #[source]
        source: RelaxError,
    },
}
