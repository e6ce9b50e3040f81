use alloc::vec;
use alloc::vec::Vec;

use super::problem::validate;
use super::{OdeControlProblem, OdeError, Trajectory};
use crate::lmm::{advance, History, MultistepTableau, Rhs, SolverOptions, TimeGrid};

/// How the pre-initial stages `y_{1−s}, …, y_0` are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMode {
    /// Sample the problem's exact solution at `t_{1−s}, …, t_0`.
    Exact,
    /// Integrate backwards from `y_0` with classical RK4, one step per `Δt`.
    RkBootstrap,
}

/// `f(·, ·, u)` with the control frozen at one grid index.
pub(crate) struct Frozen<'a, P: ?Sized> {
    pub problem: &'a P,
    pub u: &'a [f64],
}

impl<P: OdeControlProblem + ?Sized> Rhs for Frozen<'_, P> {
    fn dim(&self) -> usize {
        self.problem.state_dim()
    }

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        self.problem.f(t, y, self.u, out)
    }

    fn jacobian(&self, t: f64, y: &[f64], out: &mut [f64]) -> bool {
        self.problem.f_y(t, y, self.u, out);
        true
    }
}

fn control_at(controls: &[f64], stages: usize, m: usize, n: i64) -> &[f64] {
    let k = (n + stages as i64 - 1) as usize;
    &controls[k * m..(k + 1) * m]
}

/// States at `n = 1−s, …, 0`, oldest first.
fn initial_states<P: OdeControlProblem + ?Sized>(
    problem: &P,
    stages: usize,
    grid: &TimeGrid,
    controls: &[f64],
    mode: InitMode,
) -> Result<Vec<Vec<f64>>, OdeError> {
    let dim = problem.state_dim();
    let m = problem.control_dim();
    let mut out = vec![vec![0.0; dim]; stages];
    match mode {
        InitMode::Exact => {
            for (i, y) in out.iter_mut().enumerate() {
                let n = i as i64 + 1 - stages as i64;
                if !problem.exact_state(grid.time(n), y) {
                    return Err(OdeError::MissingExactState);
                }
            }
        }
        InitMode::RkBootstrap => {
            problem.initial_state(&mut out[stages - 1]);
            let h = -grid.dt();
            let mut k1 = vec![0.0; dim];
            let mut k2 = vec![0.0; dim];
            let mut k3 = vec![0.0; dim];
            let mut k4 = vec![0.0; dim];
            let mut tmp = vec![0.0; dim];
            let mut umid = vec![0.0; m];
            for i in (0..stages - 1).rev() {
                let n = i as i64 + 1 - stages as i64; // target index
                let t = grid.time(n + 1);
                let u0 = control_at(controls, stages, m, n + 1);
                let u1 = control_at(controls, stages, m, n);
                for c in 0..m {
                    umid[c] = 0.5 * (u0[c] + u1[c]);
                }
                let y = out[i + 1].clone();
                problem.f(t, &y, u0, &mut k1);
                for d in 0..dim {
                    tmp[d] = y[d] + 0.5 * h * k1[d];
                }
                problem.f(t + 0.5 * h, &tmp, &umid, &mut k2);
                for d in 0..dim {
                    tmp[d] = y[d] + 0.5 * h * k2[d];
                }
                problem.f(t + 0.5 * h, &tmp, &umid, &mut k3);
                for d in 0..dim {
                    tmp[d] = y[d] + h * k3[d];
                }
                problem.f(t + h, &tmp, u1, &mut k4);
                for d in 0..dim {
                    out[i][d] = y[d] + h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
                }
            }
        }
    }
    Ok(out)
}

/// History `(y_0, …, y_{1−s})` with matching right-hand sides, ready for the first step.
///
/// `controls` covers all `N + s` grid slots (see [`Trajectory`]).
pub fn bootstrap_history<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    grid: &TimeGrid,
    controls: &[f64],
    mode: InitMode,
) -> Result<History, OdeError> {
    validate(problem)?;
    let s = tab.stages();
    let m = problem.control_dim();
    let slots = Trajectory::slots(grid, s);
    if controls.len() != slots * m {
        return Err(OdeError::ControlLength {
            expected: slots * m,
            got: controls.len(),
        });
    }
    let states = initial_states(problem, s, grid, controls, mode)?;
    let dim = problem.state_dim();
    let mut h = History::new(dim, s);
    for (i, y) in states.into_iter().enumerate() {
        let n = i as i64 + 1 - s as i64;
        let mut f = vec![0.0; dim];
        problem.f(grid.time(n), &y, control_at(controls, s, m, n), &mut f);
        h.push(y, f);
    }
    Ok(h)
}

/// Integrates the state equation over the whole grid.
pub fn solve_forward<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    grid: &TimeGrid,
    controls: &[f64],
    mode: InitMode,
    opts: &SolverOptions,
) -> Result<Trajectory, OdeError> {
    let s = tab.stages();
    let dim = problem.state_dim();
    let m = problem.control_dim();
    let mut history = bootstrap_history(problem, tab, grid, controls, mode)?;
    let mut traj = Trajectory::with_controls(*grid, s, dim, m, controls)?;
    for l in 0..s {
        let n = -(l as i64);
        traj.state_mut(n).copy_from_slice(history.state(l));
    }
    for step in 0..grid.steps() {
        let n1 = step as i64 + 1;
        let rhs = Frozen {
            problem,
            u: control_at(controls, s, m, n1),
        };
        advance(tab, &mut history, grid.dt(), &rhs, grid.time(n1), opts)
            .map_err(|source| OdeError::Step { step, source })?;
        let y = history.state(0);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(OdeError::NonFinite { step });
        }
        traj.state_mut(n1).copy_from_slice(y);
    }
    Ok(traj)
}
