use lmm_adjoint_core::lmm::MultistepTableau;
use lmm_adjoint_core::optctl::{
    optimize_with, BbVariant, FilterPlacement, OptimizeConfig, StepRule, TrackingFunctional,
};
use lmm_adjoint_core::relax::{
    make_broadwell, make_jin_xin, solve_forward, LagrangianGrid, RelaxationModel,
};

use super::relax::{bdf, build_grid};
use super::{run_name, with_flux, BoundaryKey, FluxChoice, Output, Params};
use crate::config::ConfigError;
use crate::error::CliError;
use crate::table::{columns, Table};

/// Interval end points that sit on nodes count as inside.
const EDGE: f64 = 1e-12;

fn inside(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo - EDGE && x <= hi + EDGE
}

/// `(1.5 + x)` on `[−1.5, −0.5]`, zero elsewhere.
pub fn jin_xin_truth(x: f64) -> f64 {
    if inside(x, -1.5, -0.5) {
        1.5 + x
    } else {
        0.0
    }
}

/// `0.5` on `[−1.5, −0.5]`, zero elsewhere.
pub fn jin_xin_guess(x: f64) -> f64 {
    if inside(x, -1.5, -0.5) {
        0.5
    } else {
        0.0
    }
}

/// `ρ = 1` and `m = sin(πx)` on `[−1, 1]`, zero elsewhere.
pub fn broadwell_truth(x: f64) -> (f64, f64) {
    let m = if inside(x, -1.0, 1.0) {
        (std::f64::consts::PI * x).sin()
    } else {
        0.0
    };
    (1.0, m)
}

fn descent_config(p: &Params) -> Result<OptimizeConfig, ConfigError> {
    let filter: String = p.get("filter")?;
    let filter = match filter.as_str() {
        "off" => FilterPlacement::Off,
        "control" => FilterPlacement::Control,
        "gradient" => FilterPlacement::Gradient,
        _ => return Err(p.invalid("filter", &filter, "expected off, control or gradient")),
    };
    let filter_every: usize = p.get("filter_every")?;
    if filter_every == 0 {
        return Err(p.invalid("filter_every", "0", "must be at least 1"));
    }
    let sigma0 = p.positive("sigma0")?;
    let step: String = p.get("step")?;
    let step = match step.as_str() {
        "bb1" => StepRule::BarzilaiBorwein(BbVariant::Bb1),
        "bb2" => StepRule::BarzilaiBorwein(BbVariant::Bb2),
        "fixed" => StepRule::Fixed(sigma0),
        _ => return Err(p.invalid("step", &step, "expected bb1, bb2 or fixed")),
    };
    let grad_tol: f64 = p.get("grad_tol")?;
    if !(grad_tol >= 0.0) {
        return Err(p.invalid("grad_tol", &grad_tol.to_string(), "must be >= 0"));
    }
    Ok(OptimizeConfig {
        iterations: p.get("iterations")?,
        filter,
        filter_every,
        step,
        sigma0,
        grad_tol,
    })
}

struct Problem<'a, M: ?Sized> {
    stem: &'a str,
    model: &'a M,
    grid: LagrangianGrid,
    tab: MultistepTableau,
    steps: usize,
    /// Column names after `x`, one per conserved component.
    names: &'static [&'static str],
    truth: Vec<f64>,
    guess: Vec<f64>,
}

fn grid_from(p: &Params, model: &dyn RelaxationModel) -> Result<(LagrangianGrid, usize), CliError> {
    let (xl, xr): (f64, f64) = (p.get("x_left")?, p.get("x_right")?);
    let nx: usize = p.get("nx")?;
    let BoundaryKey(bc) = p.get("boundary")?;
    let dt = p.positive("dt")?;
    let grid = build_grid(model, xl, xr, nx, bc, dt)?;
    let steps = grid.steps_to(p.positive("t_end")?)?;
    Ok((grid, steps))
}

fn l2(a: &[f64], b: &[f64], dx: f64) -> f64 {
    (dx * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()).sqrt()
}

/// Splits a component-major field into per-component slices.
fn split(field: &[f64], n: usize) -> Vec<&[f64]> {
    field.chunks(field.len() / n).collect()
}

fn run_problem<M: RelaxationModel + ?Sized>(
    prob: &Problem<M>,
    cfg: &OptimizeConfig,
    save_every: usize,
) -> Result<Output, CliError> {
    let Problem {
        stem,
        model,
        grid,
        tab,
        steps,
        names,
        truth,
        guess,
    } = prob;
    let n = names.len();
    model.check_initial_data(truth)?;
    model.check_initial_data(guess)?;
    let target = solve_forward(*model, grid, tab, truth, *steps)?
        .terminal()
        .to_vec();
    let functional = TrackingFunctional::new(target.clone(), n, grid.dx())?;
    let mut saved: Vec<(usize, Vec<f64>)> = Vec::new();
    let result = optimize_with(
        *model,
        grid,
        tab,
        *steps,
        &functional,
        guess,
        cfg,
        |k, u| {
            if save_every > 0 && k % save_every == 0 {
                saved.push((k, u.to_vec()));
            }
        },
    )?;

    let x = grid.nodes();
    let header: Vec<&str> = std::iter::once("x").chain(names.iter().copied()).collect();
    let snap = |field: &[f64]| {
        let mut cols = vec![x.as_slice()];
        cols.extend(split(field, n));
        columns("", &header, &cols)
    };
    let mut out = Output::default();
    let mut log = Table::new(
        format!("{stem}: descent log"),
        &["k", "J", "sigma", "grad_inf_norm"],
    );
    for r in &result.log {
        log.push(vec![
            r.k.into(),
            r.j.into(),
            r.sigma.into(),
            r.grad_inf_norm.into(),
        ]);
    }
    out.add(format!("{stem}_log.csv"), log, true);
    let k_final = result.state.k;
    if saved.last().map(|(k, _)| *k) != Some(k_final) {
        saved.push((k_final, result.state.control.clone()));
    }
    for (k, u) in &saved {
        out.add(format!("{stem}_k{k}.csv"), snap(u), false);
    }
    out.add(format!("{stem}_t0.csv"), snap(&result.state.control), false);
    out.add(
        format!("{stem}_t{steps}.csv"),
        snap(result.forward.terminal()),
        false,
    );
    out.add(format!("{stem}_truth_t0.csv"), snap(truth), false);
    out.add(format!("{stem}_target_t{steps}.csv"), snap(&target), false);

    let h = &result.state.history;
    let (j0, jk) = (h[0], *h.last().expect("at least one iterate"));
    let dx = grid.dx();
    out.metric("iterations", k_final as f64);
    out.metric("J_initial", j0);
    out.metric("J_final", jk);
    out.metric("J_ratio", jk / j0);
    out.metric(
        "distance_ratio",
        l2(&result.state.control, truth, dx) / l2(guess, truth, dx),
    );
    out.metric("max_moment_defect", result.max_moment_defect);
    Ok(out)
}

pub(super) fn run_jin_xin(p: &Params) -> Result<Output, CliError> {
    let stem = run_name(p)?;
    let flux = FluxChoice::read(p)?;
    let a = p.positive("a")?;
    let eps = p.positive("eps")?;
    let tab = bdf(p, "scheme")?;
    let cfg = descent_config(p)?;
    let save_every: usize = p.get("save_every")?;
    with_flux!(flux, |f| {
        let model = make_jin_xin(f, a, eps)?;
        let (grid, steps) = grid_from(p, &model)?;
        let x = grid.nodes();
        let prob = Problem {
            stem: &stem,
            model: &model,
            grid,
            tab,
            steps,
            names: &["u"],
            truth: x.iter().map(|&x| jin_xin_truth(x)).collect(),
            guess: x.iter().map(|&x| jin_xin_guess(x)).collect(),
        };
        run_problem(&prob, &cfg, save_every)
    })
}

pub(super) fn run_broadwell(p: &Params) -> Result<Output, CliError> {
    let stem = run_name(p)?;
    let c = p.positive("c")?;
    let eps = p.positive("eps")?;
    let tab = bdf(p, "scheme")?;
    let cfg = descent_config(p)?;
    let save_every: usize = p.get("save_every")?;
    let model = make_broadwell(c, eps)?;
    let (grid, steps) = grid_from(p, &model)?;
    let x = grid.nodes();
    let (rho, m): (Vec<f64>, Vec<f64>) = x.iter().map(|&x| broadwell_truth(x)).unzip();
    let mut truth = rho;
    truth.extend(m);
    let mut guess = vec![1.0; x.len()];
    guess.extend(vec![0.0; x.len()]);
    let prob = Problem {
        stem: &stem,
        model: &model,
        grid,
        tab,
        steps,
        names: &["rho", "m"],
        truth,
        guess,
    };
    run_problem(&prob, &cfg, save_every)
}
