//! Semi-Lagrangian BDF scheme for discrete-velocity relaxation systems and its adjoint.
//!
//! Fields are stored in the Eulerian frame; each step gathers the history of
//! velocity `j` from the characteristic feet `x_i − v_j (l+1) Δt`. The new
//! conserved state follows explicitly from the moments of the gathered history
//! (the equilibrium term cancels because `Q E(u) = u`), after which every
//! kinetic component is an affine point update.

mod adjoint;
mod field;
mod forward;
mod grid;
mod limit;
mod model;

pub use adjoint::{adjoint_step, solve_adjoint, AdjointField, AdjointRun};
pub use field::{reconstruct_macroscopic, KineticField};
pub use forward::{forward_step, solve_forward, ForwardRun};
pub use grid::{Boundary, FootMode, LagrangianGrid};
pub use limit::viscous_limit_check;
pub use model::{
    lift_equilibrium, make_broadwell, make_jin_xin, moments_of, Broadwell, BurgersFlux, JinXin,
    LinearFlux, RelaxationModel, ScalarFlux,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelaxError {
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("CFL violated: |v| dt/dx = {courant} > 1")]
    Cfl { courant: f64 },
    #[error("velocity {velocity} gives a non-integer foot offset {offset} in aligned mode")]
    Misaligned { velocity: f64, offset: f64 },
    #[error("non-positive density {0} in equilibrium evaluation")]
    NonPositiveDensity(f64),
    #[error("subcharacteristic condition violated: a = {speed} < max|F'(u0)| = {max_slope}")]
    Subcharacteristic { speed: f64, max_slope: f64 },
    #[error("scheme {0} is not of BDF class")]
    NotBdf(&'static str),
    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },
    #[error("history age {age} exceeds stored depth {depth}")]
    HistoryDepth { age: usize, depth: usize },
    #[error("field length mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("forward run does not match the adjoint grid")]
    MissingForward,
}
