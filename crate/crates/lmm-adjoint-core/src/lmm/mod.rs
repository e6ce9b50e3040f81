//! Linear multistep tableaus and the generic s-step recurrence
//!
//! ```text
//! y_{n+1} = -Σ_l a_l y_{n-l} + Δt (b_{-1} f_{n+1} + Σ_l b_l f_{n-l}),   l = 0..s-1
//! ```

mod grid;
mod history;
mod step;
mod tableau;

pub use grid::TimeGrid;
pub use history::History;
pub use step::{advance, step, FnRhs, Rhs, SolverOptions};
pub use tableau::{
    tableau, tableau_with, AmDenominator, MultistepTableau, Ratio, SchemeClass, SCHEME_NAMES,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LmmError {
    #[error("unknown scheme `{0}`")]
    UnknownScheme(alloc::string::String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),
    #[error("history not warm: have {have} of {need} entries")]
    ColdHistory { have: usize, need: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(
        "implicit solve did not converge: residual {residual:e} after {iterations} iterations"
    )]
    NoConvergence { residual: f64, iterations: usize },
    #[error("singular Newton matrix")]
    SingularJacobian,
}
