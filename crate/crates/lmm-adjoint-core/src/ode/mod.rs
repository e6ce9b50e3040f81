//! Controlled ODEs `y' = f(y, u, t)` with terminal cost `j(y(T))` and optional
//! running cost `(α/2)∫|u|²`.
//!
//! Adjoint sign convention: every multiplier returned here approximates the
//! continuous adjoint `−p' = f_yᵀ p`, `p(T) = j_y(y(T))`, so the gradient of the
//! discrete cost is `+Δt f_uᵀ (Bᵀp)_i`.

mod adjoint;
mod forward;
mod problem;
mod residual;
mod trajectory;

pub use adjoint::{
    solve_adjoint, solve_adjoint_dto, solve_adjoint_otd, AdjointRoute, AdjointTrajectory,
    TerminalData,
};
pub use forward::{bootstrap_history, solve_forward, InitMode};
pub use problem::OdeControlProblem;
pub use residual::{discrete_cost, discrete_gradient, optimality_residual};
pub use trajectory::Trajectory;

use crate::lmm::LmmError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("invalid problem: {0}")]
    InvalidProblem(&'static str),
    #[error("expected {expected} control values, got {got}")]
    ControlLength { expected: usize, got: usize },
    #[error("exact initialization requested but the problem has no exact solution")]
    MissingExactState,
    #[error("exact terminal data requested but the problem has no exact adjoint")]
    MissingExactAdjoint,
    #[error("grid has {steps} steps, fewer than the {stages} stages of the scheme")]
    TooFewSteps { steps: usize, stages: usize },
    #[error("step {step}: {source}")]
    Step { step: usize, source: LmmError },
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("singular adjoint solve at index {index}")]
    SingularAdjoint { index: usize },
    #[error("terminal data {terminal:?} is not defined for route {route:?}")]
    TerminalRoute {
        terminal: TerminalData,
        route: AdjointRoute,
    },
    #[error("trajectory and adjoint do not share a grid")]
    GridMismatch,
}
