use alloc::vec;
use alloc::vec::Vec;

use super::{History, LmmError, MultistepTableau};
use crate::linalg;

/// Right-hand side `y' = f(t, y)` of an autonomous-in-control ODE.
pub trait Rhs {
    fn dim(&self) -> usize;

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]);

    /// Row-major `∂f_r/∂y_c`. Returns `false` when no analytic Jacobian is
    /// available, in which case implicit steps fall back to fixed-point iteration.
    fn jacobian(&self, _t: f64, _y: &[f64], _out: &mut [f64]) -> bool {
        false
    }
}

/// Closure adapter without Jacobian.
pub struct FnRhs<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnRhs<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnRhs { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> Rhs for FnRhs<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        (self.f)(t, y, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Absolute tolerance on the max-norm of the step residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

const MAX_HALVINGS: usize = 10;

/// Computes `y_{n+1}` from a warm history (`history.state(0) = y_n`).
///
/// The recurrence is evaluated as an increment on `y_n`,
/// `δ = −Σ_{l≥1} a_l (y_{n−l} − y_n) + Δt Σ_l b_l f_{n−l} + Δt b_{−1} f_{n+1}`,
/// which equals the textbook form because `1 + Σ a_l = 0`.
pub fn step<R: Rhs + ?Sized>(
    tab: &MultistepTableau,
    history: &History,
    dt: f64,
    rhs: &R,
    t_next: f64,
    opts: &SolverOptions,
) -> Result<Vec<f64>, LmmError> {
    let s = tab.stages();
    let n = history.dim();
    if history.len() < s {
        return Err(LmmError::ColdHistory {
            have: history.len(),
            need: s,
        });
    }
    if rhs.dim() != n {
        return Err(LmmError::Dimension {
            expected: n,
            got: rhs.dim(),
        });
    }
    let a = tab.a();
    let b = tab.b_explicit();
    let yn = history.state(0);

    let mut known = vec![0.0; n];
    for (k, kn) in known.iter_mut().enumerate() {
        let mut hist = 0.0;
        for l in 1..s {
            hist += -a[l] * (history.state(l)[k] - yn[k]);
        }
        let mut slope = 0.0;
        for (l, bl) in b.iter().enumerate() {
            slope += bl * history.rhs(l)[k];
        }
        *kn = hist + dt * slope;
    }

    if !tab.is_implicit() {
        return Ok(yn.iter().zip(&known).map(|(y, d)| y + d).collect());
    }

    let c = dt * tab.b_implicit();
    let mut delta: Vec<f64> = (0..n).map(|k| known[k] + c * history.rhs(0)[k]).collect();
    let mut y = vec![0.0; n];
    let mut f = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut jac = vec![0.0; n * n];
    let mut mat = vec![0.0; n * n];
    let mut corr = vec![0.0; n];

    let residual = |delta: &[f64], y: &mut [f64], f: &mut [f64], r: &mut [f64]| -> f64 {
        for k in 0..n {
            y[k] = yn[k] + delta[k];
        }
        rhs.eval(t_next, y, f);
        for k in 0..n {
            r[k] = delta[k] - known[k] - c * f[k];
        }
        linalg::inf_norm(r)
    };

    let mut norm = residual(&delta, &mut y, &mut f, &mut r);
    let has_jac = rhs.jacobian(t_next, &y, &mut jac);
    let mut iter = 0;
    loop {
        if !norm.is_finite() {
            return Err(LmmError::NoConvergence {
                residual: norm,
                iterations: iter,
            });
        }
        let converged = norm <= opts.tol;
        if converged || iter >= opts.max_iter {
            if !converged {
                return Err(LmmError::NoConvergence {
                    residual: norm,
                    iterations: iter,
                });
            }
            // one last correction from the accepted residual
            if has_jac {
                newton_direction(n, c, &mut jac, &mut mat, &r, &mut corr, t_next, &y, rhs)?;
                for k in 0..n {
                    delta[k] += corr[k];
                }
            } else {
                for k in 0..n {
                    delta[k] -= r[k];
                }
            }
            return Ok((0..n).map(|k| yn[k] + delta[k]).collect());
        }
        iter += 1;
        if has_jac {
            newton_direction(n, c, &mut jac, &mut mat, &r, &mut corr, t_next, &y, rhs)?;
            let base = delta.clone();
            let mut lambda = 1.0;
            let mut halvings = 0;
            loop {
                for k in 0..n {
                    delta[k] = base[k] + lambda * corr[k];
                }
                let trial = residual(&delta, &mut y, &mut f, &mut r);
                if trial < norm || halvings == MAX_HALVINGS {
                    norm = trial;
                    break;
                }
                lambda *= 0.5;
                halvings += 1;
            }
        } else {
            for k in 0..n {
                delta[k] -= r[k];
            }
            norm = residual(&delta, &mut y, &mut f, &mut r);
        }
    }
}

/// Solves `(I − c ∂f/∂y) corr = −r` at the current iterate `y`.
#[allow(clippy::too_many_arguments)]
fn newton_direction<R: Rhs + ?Sized>(
    n: usize,
    c: f64,
    jac: &mut [f64],
    mat: &mut [f64],
    r: &[f64],
    corr: &mut [f64],
    t: f64,
    y: &[f64],
    rhs: &R,
) -> Result<(), LmmError> {
    rhs.jacobian(t, y, jac);
    for row in 0..n {
        for col in 0..n {
            let id = if row == col { 1.0 } else { 0.0 };
            mat[row * n + col] = id - c * jac[row * n + col];
        }
        corr[row] = -r[row];
    }
    if !linalg::solve_in_place(n, mat, corr, 0.0) {
        return Err(LmmError::SingularJacobian);
    }
    Ok(())
}

/// Steps once and pushes `(y_{n+1}, f(t_{n+1}, y_{n+1}))` onto the history.
pub fn advance<R: Rhs + ?Sized>(
    tab: &MultistepTableau,
    history: &mut History,
    dt: f64,
    rhs: &R,
    t_next: f64,
    opts: &SolverOptions,
) -> Result<(), LmmError> {
    let y = step(tab, history, dt, rhs, t_next, opts)?;
    let mut f = vec![0.0; y.len()];
    rhs.eval(t_next, &y, &mut f);
    history.push(y, f);
    Ok(())
}
