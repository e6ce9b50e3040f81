use alloc::vec;
use alloc::vec::Vec;

use super::{
    bb_step, tv_filter, BbVariant, ControlError, TrackingFunctional, SIGMA_MAX, SIGMA_MIN,
};
use crate::lmm::MultistepTableau;
use crate::relax::{
    solve_adjoint, solve_forward, AdjointField, ForwardRun, LagrangianGrid, RelaxationModel,
};

/// Where the TV smoother acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterPlacement {
    Off,
    /// Smooth the updated control.
    Control,
    /// Smooth the descent direction before the update.
    #[default]
    Gradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    BarzilaiBorwein(BbVariant),
    Fixed(f64),
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::BarzilaiBorwein(BbVariant::Bb2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeConfig {
    pub iterations: usize,
    pub filter: FilterPlacement,
    /// Filter on iterations `k` with `(k + 1) % filter_every == 0`.
    pub filter_every: usize,
    pub step: StepRule,
    pub sigma0: f64,
    pub grad_tol: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            iterations: 30,
            filter: FilterPlacement::default(),
            filter_every: 1,
            step: StepRule::default(),
            sigma0: 0.1,
            grad_tol: 1e-8,
        }
    }
}

impl OptimizeConfig {
    fn validate(&self) -> Result<(), ControlError> {
        if self.filter != FilterPlacement::Off && self.filter_every == 0 {
            return Err(ControlError::InvalidConfig(
                "filter_every must be at least 1",
            ));
        }
        if !(SIGMA_MIN..=SIGMA_MAX).contains(&self.sigma0) {
            return Err(ControlError::InvalidConfig(
                "sigma0 must lie in [1e-6, 1e2]",
            ));
        }
        if let StepRule::Fixed(s) = self.step {
            if !(s > 0.0) || !s.is_finite() {
                return Err(ControlError::InvalidConfig("fixed step must be positive"));
            }
        }
        if !(self.grad_tol >= 0.0) {
            return Err(ControlError::InvalidConfig("grad_tol must be non-negative"));
        }
        Ok(())
    }
}

/// Iterate `k`, control `u_0^{(k)}`, the last secant point and the `J` history.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentState {
    pub k: usize,
    pub control: Vec<f64>,
    pub previous: Option<(Vec<f64>, Vec<f64>)>,
    pub history: Vec<f64>,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub j: f64,
    /// Step applied after this iterate (the would-be step on the last one).
    pub sigma: f64,
    pub grad_inf_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub state: DescentState,
    pub log: Vec<IterationRecord>,
    /// Forward run of the last iterate.
    pub forward: ForwardRun,
    /// `max ‖Q E(u) − u‖_∞` over every control iterate and forward state.
    pub max_moment_defect: f64,
}

/// Chain rule through the equilibrium lifting `f_0 = E(u_0)`:
/// `g_r = Σ_j ∂_{u_r}E_j(u_0) λ^j(0)` (component-major).
///
/// This is the exact gradient of the discrete `J` divided by `Δx`. For Jin-Xin
/// it differs from `p = λ^1 + λ^2` by `F'(u)(λ^2 − λ^1)/(2a)`, which vanishes
/// once the adjoint components have equalized.
pub fn gradient_from_adjoint<M: RelaxationModel + ?Sized>(
    model: &M,
    adjoint: &AdjointField,
    u0: &[f64],
) -> Result<Vec<f64>, ControlError> {
    if adjoint.time_index() != 0 {
        return Err(ControlError::AdjointNotAtStart(adjoint.time_index()));
    }
    let n = model.conserved_dim();
    let nv = model.velocities().len();
    let nx = adjoint.nodes();
    if u0.len() != n * nx {
        return Err(ControlError::GridMismatch {
            expected: n * nx,
            got: u0.len(),
        });
    }
    let lam = adjoint.level(0).expect("adjoint holds at least one level");
    let mut g = vec![0.0; n * nx];
    let mut point = vec![0.0; n];
    let mut de = vec![0.0; nv * n];
    for i in 0..nx {
        for r in 0..n {
            point[r] = u0[r * nx + i];
        }
        model
            .equilibrium_jacobian(&point, &mut de)
            .map_err(|source| ControlError::Solver {
                iteration: 0,
                source,
            })?;
        for r in 0..n {
            g[r * nx + i] = (0..nv).map(|j| de[j * n + r] * lam[j * nx + i]).sum();
        }
    }
    Ok(g)
}

fn filter_rows(values: &[f64], rows: usize, grid: &LagrangianGrid) -> Vec<f64> {
    let nx = values.len() / rows;
    let mut out = Vec::with_capacity(values.len());
    for r in 0..rows {
        out.extend(tv_filter(&values[r * nx..(r + 1) * nx], grid.boundary()));
    }
    out
}

/// Steepest descent `u_0^{(k+1)} = u_0^{(k)} − σ_k g^{(k)}` with adjoint gradients.
///
/// Each iterate runs forward, evaluates `J`, runs the adjoint from
/// `λ(T) = Qᵀ(u(T) − u_d)` and assembles the gradient. The loop stops after
/// `config.iterations` updates, when `‖g‖_∞ < grad_tol`, or when `J = 0`.
pub fn optimize<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    tab: &MultistepTableau,
    steps: usize,
    functional: &TrackingFunctional,
    guess: &[f64],
    config: &OptimizeConfig,
) -> Result<OptimizeResult, ControlError> {
    optimize_with(
        model,
        grid,
        tab,
        steps,
        functional,
        guess,
        config,
        |_, _| {},
    )
}

/// [`optimize`] with a callback receiving `(k, u_0^{(k)})` before each iterate is evaluated.
#[allow(clippy::too_many_arguments)]
pub fn optimize_with<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    tab: &MultistepTableau,
    steps: usize,
    functional: &TrackingFunctional,
    guess: &[f64],
    config: &OptimizeConfig,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<OptimizeResult, ControlError> {
    config.validate()?;
    let n = model.conserved_dim();
    if guess.len() != n * grid.len() || functional.target().len() != guess.len() {
        return Err(ControlError::GridMismatch {
            expected: n * grid.len(),
            got: guess.len(),
        });
    }
    let mut state = DescentState {
        k: 0,
        control: guess.to_vec(),
        previous: None,
        history: Vec::new(),
        sigma: match config.step {
            StepRule::Fixed(s) => s,
            StepRule::BarzilaiBorwein(_) => config.sigma0,
        },
    };
    let mut log = Vec::new();
    let mut defect: f64 = 0.0;
    loop {
        let k = state.k;
        observe(k, &state.control);
        let wrap = |source| ControlError::Solver {
            iteration: k,
            source,
        };
        let fwd = solve_forward(model, grid, tab, &state.control, steps).map_err(wrap)?;
        for u in fwd.states() {
            defect = defect.max(model.moment_defect(u).map_err(wrap)?);
        }
        let j = functional.evaluate(fwd.terminal())?;
        state.history.push(j);

        let lam_t = functional.terminal_adjoint(model, fwd.terminal())?;
        let adj = solve_adjoint(model, grid, tab, &fwd, &lam_t).map_err(wrap)?;
        let mut g =
            gradient_from_adjoint(model, adj.field(), &state.control).map_err(|e| match e {
                ControlError::Solver { source, .. } => ControlError::Solver {
                    iteration: k,
                    source,
                },
                other => other,
            })?;
        if config.filter == FilterPlacement::Gradient && (k + 1).is_multiple_of(config.filter_every)
        {
            g = filter_rows(&g, n, grid);
        }
        let g_norm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        if let (StepRule::BarzilaiBorwein(variant), Some((u_prev, g_prev))) =
            (config.step, state.previous.as_ref())
        {
            let du: Vec<f64> = state
                .control
                .iter()
                .zip(u_prev)
                .map(|(a, b)| a - b)
                .collect();
            let dg: Vec<f64> = g.iter().zip(g_prev).map(|(a, b)| a - b).collect();
            state.sigma = bb_step(&du, &dg, variant, state.sigma);
        }
        log.push(IterationRecord {
            k,
            j,
            sigma: state.sigma,
            grad_inf_norm: g_norm,
        });

        if k >= config.iterations || g_norm < config.grad_tol || j == 0.0 {
            return Ok(OptimizeResult {
                state,
                log,
                forward: fwd,
                max_moment_defect: defect,
            });
        }

        let mut next: Vec<f64> = state
            .control
            .iter()
            .zip(&g)
            .map(|(u, gi)| u - state.sigma * gi)
            .collect();
        if config.filter == FilterPlacement::Control && (k + 1).is_multiple_of(config.filter_every)
        {
            next = filter_rows(&next, n, grid);
        }
        let prev_u = core::mem::replace(&mut state.control, next);
        state.previous = Some((prev_u, g));
        state.k += 1;
    }
}
