#![allow(dead_code)]

use lmm_adjoint_core::lmm::TimeGrid;
use lmm_adjoint_core::ode::{OdeControlProblem, Trajectory};

/// `f = y + u`, so `f_y ≡ 1`; `j(y) = y`; `p(t) = e^{T−t}`.
pub struct ConstSensitivity {
    pub t_end: f64,
}

impl OdeControlProblem for ConstSensitivity {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn initial_state(&self, y0: &mut [f64]) {
        y0[0] = 1.0;
    }
    fn f(&self, _t: f64, y: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = y[0] + u[0];
    }
    fn f_y(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn terminal_cost(&self, y: &[f64]) -> f64 {
        y[0]
    }
    fn terminal_gradient(&self, _y: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn exact_state(&self, t: f64, out: &mut [f64]) -> bool {
        out[0] = t.exp();
        true
    }
    fn exact_adjoint(&self, t: f64, out: &mut [f64]) -> bool {
        out[0] = (self.t_end - t).exp();
        true
    }
}

/// `f = y²/2 + u` along the prescribed path `y(t) = t²`, so `f_y = t²`;
/// `p(t) = exp((T³ − t³)/3)`.
pub struct QuadraticSensitivity {
    pub t_end: f64,
}

impl OdeControlProblem for QuadraticSensitivity {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn initial_state(&self, y0: &mut [f64]) {
        y0[0] = 0.0;
    }
    fn f(&self, _t: f64, y: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = 0.5 * y[0] * y[0] + u[0];
    }
    fn f_y(&self, _t: f64, y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = y[0];
    }
    fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn terminal_cost(&self, y: &[f64]) -> f64 {
        y[0]
    }
    fn terminal_gradient(&self, _y: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn exact_state(&self, t: f64, out: &mut [f64]) -> bool {
        out[0] = t * t;
        true
    }
    fn exact_adjoint(&self, t: f64, out: &mut [f64]) -> bool {
        let tt = self.t_end;
        out[0] = ((tt * tt * tt - t * t * t) / 3.0).exp();
        true
    }
}

/// `y' = y² + u`, `y(0) = 1`, `j = ½(y − 1/(1−T))²`, running weight α.
pub struct Riccati {
    pub t_end: f64,
    pub alpha: f64,
}

impl OdeControlProblem for Riccati {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn initial_state(&self, y0: &mut [f64]) {
        y0[0] = 1.0;
    }
    fn f(&self, _t: f64, y: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = y[0] * y[0] + u[0];
    }
    fn f_y(&self, _t: f64, y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 2.0 * y[0];
    }
    fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn terminal_cost(&self, y: &[f64]) -> f64 {
        let d = y[0] - 1.0 / (1.0 - self.t_end);
        0.5 * d * d
    }
    fn terminal_gradient(&self, y: &[f64], out: &mut [f64]) {
        out[0] = y[0] - 1.0 / (1.0 - self.t_end);
    }
    fn running_weight(&self) -> f64 {
        self.alpha
    }
    fn exact_state(&self, t: f64, out: &mut [f64]) -> bool {
        out[0] = 1.0 / (1.0 - t);
        true
    }
}

pub fn prescribed<P: OdeControlProblem>(p: &P, grid: TimeGrid, stages: usize) -> Trajectory {
    let controls = vec![0.0; Trajectory::slots(&grid, stages)];
    Trajectory::prescribed(grid, stages, 1, 1, &controls, |t, out| {
        assert!(p.exact_state(t, out));
    })
    .unwrap()
}

pub fn rates(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// `f = u`, so `f_y ≡ 0`; `j(y) = 2y`; `p ≡ 2`.
pub struct ZeroSensitivity;

impl OdeControlProblem for ZeroSensitivity {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn initial_state(&self, y0: &mut [f64]) {
        y0[0] = 0.0;
    }
    fn f(&self, _t: f64, _y: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }
    fn f_y(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 0.0;
    }
    fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
    fn terminal_cost(&self, y: &[f64]) -> f64 {
        2.0 * y[0]
    }
    fn terminal_gradient(&self, _y: &[f64], out: &mut [f64]) {
        out[0] = 2.0;
    }
    fn exact_state(&self, _t: f64, out: &mut [f64]) -> bool {
        out[0] = 0.0;
        true
    }
    fn exact_adjoint(&self, _t: f64, out: &mut [f64]) -> bool {
        out[0] = 2.0;
        true
    }
}
