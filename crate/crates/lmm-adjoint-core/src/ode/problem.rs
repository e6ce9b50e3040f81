/// Optimal-control problem `min j(y(T)) + (α/2)∫|u|²` subject to `y' = f(y, u, t)`.
///
/// Jacobians are row-major: `f_y` is `n×n` with entry `[r*n + c] = ∂f_r/∂y_c`,
/// `f_u` is `n×m` with entry `[r*m + c] = ∂f_r/∂u_c`.
pub trait OdeControlProblem {
    fn state_dim(&self) -> usize;

    fn control_dim(&self) -> usize;

    fn initial_state(&self, y0: &mut [f64]);

    fn f(&self, t: f64, y: &[f64], u: &[f64], out: &mut [f64]);

    fn f_y(&self, t: f64, y: &[f64], u: &[f64], out: &mut [f64]);

    fn f_u(&self, t: f64, y: &[f64], u: &[f64], out: &mut [f64]);

    fn terminal_cost(&self, y: &[f64]) -> f64;

    fn terminal_gradient(&self, y: &[f64], out: &mut [f64]);

    /// Weight `α ≥ 0` of the running cost.
    fn running_weight(&self) -> f64 {
        0.0
    }

    /// Writes `y(t)` and returns `true` if an exact state is known.
    fn exact_state(&self, _t: f64, _out: &mut [f64]) -> bool {
        false
    }

    /// Writes `p(t)` and returns `true` if an exact adjoint is known.
    fn exact_adjoint(&self, _t: f64, _out: &mut [f64]) -> bool {
        false
    }
}

pub(crate) fn validate<P: OdeControlProblem + ?Sized>(p: &P) -> Result<(), super::OdeError> {
    if p.state_dim() == 0 {
        return Err(super::OdeError::InvalidProblem(
            "state dimension must be positive",
        ));
    }
    let alpha = p.running_weight();
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(super::OdeError::InvalidProblem(
            "running-cost weight must be finite and >= 0",
        ));
    }
    Ok(())
}
