use alloc::vec;
use alloc::vec::Vec;

use super::{AdjointRoute, AdjointTrajectory, OdeControlProblem, OdeError, Trajectory};
use crate::linalg;
use crate::lmm::MultistepTableau;

/// `j(y_N) + (α/2) Δt Σ_{i=0}^{N−1} |u_i|²`.
pub fn discrete_cost<P: OdeControlProblem + ?Sized>(problem: &P, traj: &Trajectory) -> f64 {
    let big_n = traj.grid().steps() as i64;
    let alpha = problem.running_weight();
    let mut running = 0.0;
    if alpha != 0.0 {
        for i in 0..big_n {
            running += traj.control(i).iter().map(|u| u * u).sum::<f64>();
        }
    }
    problem.terminal_cost(traj.state(big_n)) + 0.5 * alpha * traj.grid().dt() * running
}

/// Gradient of [`discrete_cost`] with respect to every control slot `u_{1−s}, …, u_N`
/// (slot layout of [`Trajectory`]), assembled from DtO multipliers.
///
/// Exact when the multipliers were computed with [`super::TerminalData::Discrete`].
pub fn discrete_gradient<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    traj: &Trajectory,
    adj: &AdjointTrajectory,
) -> Result<Vec<f64>, OdeError> {
    if adj.route() != AdjointRoute::DiscretizeThenOptimize {
        return Err(OdeError::TerminalRoute {
            terminal: adj.terminal(),
            route: adj.route(),
        });
    }
    if adj.grid() != traj.grid() || adj.dim() != traj.dim() {
        return Err(OdeError::GridMismatch);
    }
    let d = traj.dim();
    let m = traj.control_dim();
    let big_n = traj.grid().steps() as i64;
    let dt = traj.grid().dt();
    let alpha = problem.running_weight();
    let b = tab.b_explicit();
    let mut out = Vec::with_capacity(Trajectory::slots(traj.grid(), tab.stages()) * m);
    let mut bp = vec![0.0; d];
    let mut fu = vec![0.0; d * m];
    let mut g = vec![0.0; m];
    for k in traj.first_index()..=big_n {
        // (Bᵀp)_k restricted to equations 1..N
        bp.fill(0.0);
        if k >= 1 {
            for (x, p) in bp.iter_mut().zip(adj.p(k as usize)) {
                *x += tab.b_implicit() * p;
            }
        }
        for (l, bl) in b.iter().enumerate() {
            let j = k + 1 + l as i64;
            if j >= 1 && j <= big_n {
                for (x, p) in bp.iter_mut().zip(adj.p(j as usize)) {
                    *x += bl * p;
                }
            }
        }
        let t = traj.grid().time(k);
        problem.f_u(t, traj.state(k), traj.control(k), &mut fu);
        linalg::mat_t_vec(d, m, &fu, &bp, &mut g);
        let u = traj.control(k);
        for c in 0..m {
            let mut v = dt * g[c];
            if (0..big_n).contains(&k) {
                v += alpha * dt * u[c];
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Stationarity residual at `i = 0..N` (`m` entries per index).
///
/// OtD: `f_uᵀ p_i + α u_i`. DtO: the corresponding entries of [`discrete_gradient`]
/// (Δt-weighted).
pub fn optimality_residual<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    traj: &Trajectory,
    adj: &AdjointTrajectory,
) -> Result<Vec<f64>, OdeError> {
    let m = traj.control_dim();
    let big_n = traj.grid().steps();
    match adj.route() {
        AdjointRoute::DiscretizeThenOptimize => {
            let full = discrete_gradient(problem, tab, traj, adj)?;
            let skip = (tab.stages() - 1) * m;
            Ok(full[skip..].to_vec())
        }
        AdjointRoute::OptimizeThenDiscretize => {
            if adj.grid() != traj.grid() || adj.dim() != traj.dim() {
                return Err(OdeError::GridMismatch);
            }
            let d = traj.dim();
            let alpha = problem.running_weight();
            let mut fu = vec![0.0; d * m];
            let mut g = vec![0.0; m];
            let mut out = Vec::with_capacity((big_n + 1) * m);
            for i in 0..=big_n {
                let n = i as i64;
                let t = traj.grid().time(n);
                problem.f_u(t, traj.state(n), traj.control(n), &mut fu);
                linalg::mat_t_vec(d, m, &fu, adj.p(i), &mut g);
                for c in 0..m {
                    out.push(g[c] + alpha * traj.control(n)[c]);
                }
            }
            Ok(out)
        }
    }
}
