//! Linear multistep time integration with adjoints.
//!
//! * [`lmm`]: tableaus (BDF, Adams–Bashforth, Adams–Moulton), time grids and the
//!   generic s-step recurrence.
//! * [`ode`]: controlled ODEs, forward solves and the two adjoint constructions
//!   (discretize-then-optimize and optimize-then-discretize).
//! * [`relax`]: semi-Lagrangian BDF solver for discrete-velocity relaxation
//!   systems (Jin-Xin, Broadwell) and its adjoint.
//! * [`optctl`]: tracking functionals, TV filter and Barzilai–Borwein descent
//!   for initial-data control.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` deliberately rejects NaN; index loops mirror the recurrences.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod linalg;
pub mod lmm;
pub mod ode;
pub mod optctl;
pub mod relax;

pub use lmm::{tableau, MultistepTableau, SchemeClass, TimeGrid};
