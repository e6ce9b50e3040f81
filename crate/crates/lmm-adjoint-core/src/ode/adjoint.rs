use alloc::vec;
use alloc::vec::Vec;

use super::problem::validate;
use super::{OdeControlProblem, OdeError, Trajectory};
use crate::linalg;
use crate::lmm::{MultistepTableau, TimeGrid};

/// Pivots below this magnitude make `I − Δt b_{−1} f_yᵀ` count as singular.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjointRoute {
    /// Multipliers of the discrete problem (exact gradient of the discrete cost).
    DiscretizeThenOptimize,
    /// Time-reversed multistep discretization of the continuous adjoint equation.
    OptimizeThenDiscretize,
}

/// Values of the terminal block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalData {
    /// `p_{N−s+1}, …, p_N` sampled from the problem's exact adjoint.
    Exact,
    /// `j_y(y_N)` replicated over the `s` terminal slots.
    Padded,
    /// Back-substitution of the discrete optimality system from `i = N`
    /// with `p_{>N} = 0` (DtO only).
    Discrete,
}

/// Multipliers `p_0, …, p_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointTrajectory {
    grid: TimeGrid,
    route: AdjointRoute,
    terminal: TerminalData,
    dim: usize,
    values: Vec<f64>,
}

impl AdjointTrajectory {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn route(&self) -> AdjointRoute {
        self.route
    }

    pub fn terminal(&self) -> TerminalData {
        self.terminal
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.steps() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p(&self, n: usize) -> &[f64] {
        &self.values[n * self.dim..(n + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `max_n |p_n − p(t_n)|`.
    pub fn max_error(&self, exact: impl Fn(f64, &mut [f64])) -> f64 {
        let mut buf = vec![0.0; self.dim];
        let mut err: f64 = 0.0;
        for n in 0..self.len() {
            exact(self.grid.time(n as i64), &mut buf);
            for (p, e) in self.p(n).iter().zip(&buf) {
                err = err.max((p - e).abs());
            }
        }
        err
    }
}

/// Discrete adjoint: `p_i = −(Aᵀp)_i + Δt f_y(y_i)ᵀ (Bᵀp)_i + ∂_{y_i} j`, solved right to left.
pub fn solve_adjoint_dto<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    traj: &Trajectory,
    terminal: TerminalData,
) -> Result<AdjointTrajectory, OdeError> {
    solve_adjoint(
        problem,
        tab,
        traj,
        AdjointRoute::DiscretizeThenOptimize,
        terminal,
    )
}

/// Continuous adjoint `−p' = f_yᵀ p` integrated backwards with the same tableau,
/// each `b_l p_{n+l}` paired with `f_y(y_{n+l})`.
pub fn solve_adjoint_otd<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    traj: &Trajectory,
    terminal: TerminalData,
) -> Result<AdjointTrajectory, OdeError> {
    solve_adjoint(
        problem,
        tab,
        traj,
        AdjointRoute::OptimizeThenDiscretize,
        terminal,
    )
}

pub fn solve_adjoint<P: OdeControlProblem + ?Sized>(
    problem: &P,
    tab: &MultistepTableau,
    traj: &Trajectory,
    route: AdjointRoute,
    terminal: TerminalData,
) -> Result<AdjointTrajectory, OdeError> {
    validate(problem)?;
    let s = tab.stages();
    let grid = *traj.grid();
    let big_n = grid.steps();
    let d = problem.state_dim();
    if traj.dim() != d || traj.stages() != s {
        return Err(OdeError::GridMismatch);
    }
    if terminal == TerminalData::Discrete && route == AdjointRoute::OptimizeThenDiscretize {
        return Err(OdeError::TerminalRoute { terminal, route });
    }
    if terminal != TerminalData::Discrete && big_n < s {
        return Err(OdeError::TooFewSteps {
            steps: big_n,
            stages: s,
        });
    }

    let dd = d * d;
    let mut fy = vec![0.0; (big_n + 1) * dd];
    for n in 0..=big_n {
        let t = grid.time(n as i64);
        problem.f_y(
            t,
            traj.state(n as i64),
            traj.control(n as i64),
            &mut fy[n * dd..(n + 1) * dd],
        );
    }

    // p_0..p_{N+s}; entries beyond N stay zero
    let mut p = vec![0.0; (big_n + s + 1) * d];
    let mut jy = vec![0.0; d];
    problem.terminal_gradient(traj.state(big_n as i64), &mut jy);

    let start = match terminal {
        TerminalData::Exact => {
            for n in big_n + 1 - s..=big_n {
                if !problem.exact_adjoint(grid.time(n as i64), &mut p[n * d..(n + 1) * d]) {
                    return Err(OdeError::MissingExactAdjoint);
                }
            }
            big_n - s
        }
        TerminalData::Padded => {
            for n in big_n + 1 - s..=big_n {
                p[n * d..(n + 1) * d].copy_from_slice(&jy);
            }
            big_n - s
        }
        TerminalData::Discrete => big_n,
    };

    let a = tab.a();
    let b = tab.b_explicit();
    let c = grid.dt() * tab.b_implicit();
    let dt = grid.dt();
    let mut rhs = vec![0.0; d];
    let mut tmp = vec![0.0; d];
    let mut mat = vec![0.0; dd];
    let mut slope = vec![0.0; d];

    for m in (0..=start).rev() {
        let g_self = &fy[m * dd..(m + 1) * dd];
        let base = (m + 1) * d;
        // −Σ_{l≥1} a_l (p_{m+1+l} − p_{m+1})
        for k in 0..d {
            let p1 = p[base + k];
            let mut acc = 0.0;
            for l in 1..s {
                acc += -a[l] * (p[base + l * d + k] - p1);
            }
            rhs[k] = acc;
        }
        // Δt Σ_l b_l W_lᵀ p_{m+1+l}
        slope.fill(0.0);
        for (l, bl) in b.iter().enumerate() {
            let idx = m + 1 + l;
            let w = match route {
                AdjointRoute::DiscretizeThenOptimize => g_self,
                AdjointRoute::OptimizeThenDiscretize => &fy[idx * dd..(idx + 1) * dd],
            };
            linalg::mat_t_vec(d, d, w, &p[idx * d..(idx + 1) * d], &mut tmp);
            for k in 0..d {
                slope[k] += bl * tmp[k];
            }
        }
        // c G_mᵀ p_{m+1}
        linalg::mat_t_vec(d, d, g_self, &p[base..base + d], &mut tmp);
        for k in 0..d {
            rhs[k] += dt * slope[k] + c * tmp[k];
            if terminal == TerminalData::Discrete && m == big_n {
                rhs[k] += jy[k];
            }
        }
        for row in 0..d {
            for col in 0..d {
                let id = if row == col { 1.0 } else { 0.0 };
                mat[row * d + col] = id - c * g_self[col * d + row];
            }
        }
        if !linalg::solve_in_place(d, &mut mat, &mut rhs, PIVOT_TOL) {
            return Err(OdeError::SingularAdjoint { index: m });
        }
        for k in 0..d {
            p[m * d + k] = p[base + k] + rhs[k];
        }
    }

    p.truncate((big_n + 1) * d);
    Ok(AdjointTrajectory {
        grid,
        route,
        terminal,
        dim: d,
        values: p,
    })
}
