use lmm_adjoint_core::lmm::{tableau, MultistepTableau};
use lmm_adjoint_core::relax::{
    make_jin_xin, solve_adjoint, solve_forward, viscous_limit_check, Boundary, FootMode, JinXin,
    LagrangianGrid, RelaxError, RelaxationModel, ScalarFlux,
};

use super::{rate, run_name, with_flux, BoundaryKey, FluxChoice, Output, Params};
use crate::error::CliError;
use crate::table::{columns, Table};

pub(crate) fn gaussian(center: f64) -> impl Fn(f64) -> f64 {
    move |x| (-(x - center) * (x - center)).exp()
}

pub(crate) fn bdf(p: &Params, key: &str) -> Result<MultistepTableau, CliError> {
    let name: String = p.get(key)?;
    let tab = tableau(&name).map_err(|e| p.invalid(key, &name, &e.to_string()))?;
    if !tab.is_bdf() {
        return Err(p
            .invalid(key, &name, "relaxation solver needs a BDF scheme")
            .into());
    }
    Ok(tab)
}

/// Grid with feet on nodes when `speed·Δt/Δx` is integral, interpolated otherwise.
pub(crate) fn build_grid<M: RelaxationModel + ?Sized>(
    model: &M,
    x_left: f64,
    x_right: f64,
    nx: usize,
    boundary: Boundary,
    dt: f64,
) -> Result<LagrangianGrid, CliError> {
    let g = LagrangianGrid::new(x_left, x_right, nx, boundary, dt, FootMode::Aligned)?;
    match g.cell_offsets(model) {
        Ok(_) => Ok(g),
        Err(RelaxError::Misaligned { .. }) => {
            let g = LagrangianGrid::new(x_left, x_right, nx, boundary, dt, FootMode::Interpolated)?;
            g.cell_offsets(model)?;
            Ok(g)
        }
        Err(e) => Err(e.into()),
    }
}

/// Step indices nearest to the requested times, deduplicated and in order.
pub(crate) fn snapshot_indices(times: &[f64], dt: f64, steps: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = times
        .iter()
        .map(|t| ((t / dt).round().max(0.0) as usize).min(steps))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn mass(u: &[f64], dx: f64) -> f64 {
    dx * u.iter().sum::<f64>()
}

pub(super) fn run_forward(p: &Params) -> Result<Output, CliError> {
    let stem = run_name(p)?;
    let flux = FluxChoice::read(p)?;
    with_flux!(flux, |f| forward_with(p, &stem, f))
}

fn forward_with<F: ScalarFlux + Copy>(p: &Params, stem: &str, flux: F) -> Result<Output, CliError> {
    let a = p.positive("a")?;
    let eps = p.positive("eps")?;
    let tab = bdf(p, "scheme")?;
    let (xl, xr): (f64, f64) = (p.get("x_left")?, p.get("x_right")?);
    let nx: usize = p.get("nx")?;
    let BoundaryKey(bc) = p.get("boundary")?;
    let dt = match p.opt::<f64>("dt")? {
        Some(dt) => dt,
        None => (xr - xl) / nx as f64 / a,
    };
    let t_end = p.positive("t_end")?;
    let center: f64 = p.get("center")?;
    let times: Vec<f64> = p.list("snapshots")?;

    let model = make_jin_xin(flux, a, eps)?;
    let grid = build_grid(&model, xl, xr, nx, bc, dt)?;
    let x = grid.nodes();
    let u0: Vec<f64> = x.iter().map(|&x| gaussian(center)(x)).collect();
    model.check_initial_data(&u0)?;
    let steps = grid.steps_to(t_end)?;
    let run = solve_forward(&model, &grid, &tab, &u0, steps)?;

    let mut out = Output::default();
    let dx = grid.dx();
    let m0 = mass(&u0, dx);
    let mut log = Table::new("", &["n", "t", "mass", "drift"]);
    let mut drift: f64 = 0.0;
    for (n, u) in run.states().iter().enumerate() {
        let m = mass(u, dx);
        drift = drift.max((m - m0).abs());
        log.push(vec![
            n.into(),
            (n as f64 * grid.dt()).into(),
            m.into(),
            (m - m0).into(),
        ]);
    }
    let mut summary = Table::new(
        format!(
            "{stem}: {} N_x = {nx}, dt = {:.6e}, eps = {eps:e}",
            tab.name(),
            grid.dt()
        ),
        &["n", "t", "mass", "min_u", "max_u"],
    );
    for n in snapshot_indices(&times, grid.dt(), steps) {
        let u = run.state(n);
        out.add(
            format!("{stem}_t{n}.csv"),
            columns("", &["x", "u"], &[&x, u]),
            false,
        );
        let (lo, hi) = u
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                (l.min(*v), h.max(*v))
            });
        summary.push(vec![
            n.into(),
            (n as f64 * grid.dt()).into(),
            mass(u, dx).into(),
            lo.into(),
            hi.into(),
        ]);
    }
    out.add(format!("{stem}_mass.csv"), log, false);
    out.add(format!("{stem}_summary.csv"), summary, true);
    out.metric("max_mass_drift", drift);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reference {
    Transport,
    SelfRef,
}

impl Reference {
    fn label(self) -> &'static str {
        match self {
            Reference::Transport => "transport",
            Reference::SelfRef => "self",
        }
    }
}

pub(super) fn run_adjoint(p: &Params) -> Result<Output, CliError> {
    let stem = run_name(p)?;
    let flux = FluxChoice::read(p)?;
    with_flux!(flux, |f| adjoint_with(p, &stem, f))
}

struct Study<'a, F: ScalarFlux> {
    model: &'a JinXin<F>,
    tab: &'a MultistepTableau,
    xl: f64,
    xr: f64,
    t_end: f64,
    center: f64,
}

impl<F: ScalarFlux> Study<'_, F> {
    /// `p(t_n, ·)` for every `n`, plus the transport-oracle error of `p(0, ·)`.
    fn solve(&self, nx: usize) -> Result<(LagrangianGrid, Vec<Vec<f64>>, f64), CliError> {
        let a = self.model.speed();
        let grid = LagrangianGrid::aligned(self.xl, self.xr, nx, Boundary::Periodic, a)?;
        let g = gaussian(self.center);
        let u0: Vec<f64> = grid.nodes().into_iter().map(&g).collect();
        self.model.check_initial_data(&u0)?;
        let steps = grid.steps_to(self.t_end)?;
        let fwd = solve_forward(self.model, &grid, self.tab, &u0, steps)?;
        let nv = self.model.velocities().len();
        let lam_t: Vec<f64> = (0..nv)
            .flat_map(|_| u0.iter().map(|v| v / nv as f64))
            .collect();
        let adj = solve_adjoint(self.model, &grid, self.tab, &fwd, &lam_t)?;
        let err = viscous_limit_check(self.model, &grid, &fwd, &adj, &g);
        let p = (0..=steps).map(|n| adj.velocity_sum(n)).collect();
        Ok((grid, p, err))
    }
}

fn adjoint_with<F: ScalarFlux + Copy>(p: &Params, stem: &str, flux: F) -> Result<Output, CliError> {
    let a = p.positive("a")?;
    let eps_list: Vec<f64> = p.list("eps")?;
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0)) {
        return Err(p
            .invalid("eps", &e.to_string(), "relaxation times must be positive")
            .into());
    }
    let tab = bdf(p, "scheme")?;
    let (xl, xr): (f64, f64) = (p.get("x_left")?, p.get("x_right")?);
    let nxs: Vec<usize> = p.increasing("nx")?;
    let t_end = p.positive("t_end")?;
    let center: f64 = p.get("center")?;
    let reference: String = p.get("reference")?;
    let forced = match reference.as_str() {
        "auto" => None,
        "transport" => Some(Reference::Transport),
        "self" => Some(Reference::SelfRef),
        _ => {
            return Err(p
                .invalid("reference", &reference, "expected auto, transport or self")
                .into())
        }
    };
    let factor: usize = p.get("ref_factor")?;
    if factor < 2 {
        return Err(p
            .invalid("ref_factor", &factor.to_string(), "must be at least 2")
            .into());
    }
    let times: Vec<f64> = p.list("snapshots")?;

    let mut table = Table::new(
        format!(
            "{stem}: L2 error of p(0, x), {} with dt = dx / a, a = {a}",
            tab.name()
        ),
        &[
            "eps",
            "N_x",
            "dt",
            "err_transport",
            "rate_transport",
            "err_self",
            "rate_self",
            "reference",
            "err",
            "rate",
        ],
    );
    let mut summary = Table::new(
        format!("{stem}: summary"),
        &["eps", "reference", "N_x", "err", "mean_rate"],
    );
    let mut out = Output::default();
    for (ei, &eps) in eps_list.iter().enumerate() {
        let model = make_jin_xin(flux, a, eps)?;
        let study = Study {
            model: &model,
            tab: &tab,
            xl,
            xr,
            t_end,
            center,
        };
        let primary = forced.unwrap_or(if eps >= 1e-2 {
            Reference::SelfRef
        } else {
            Reference::Transport
        });
        let mut prev: Option<(f64, f64)> = None;
        let mut rates = Vec::new();
        let mut last = (0, f64::NAN);
        for (k, &nx) in nxs.iter().enumerate() {
            let (grid, pv, err_t) = study.solve(nx)?;
            let (_, pf, _) = study.solve(nx * factor)?;
            let err_s = {
                let acc: f64 = pv[0]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - pf[0][i * factor]).powi(2))
                    .sum();
                (acc * grid.dx()).sqrt()
            };
            let (rt, rs) = match prev {
                Some((pt, ps)) => (rate(pt, err_t), rate(ps, err_s)),
                None => (f64::NAN, f64::NAN),
            };
            let (err, r) = match primary {
                Reference::Transport => (err_t, rt),
                Reference::SelfRef => (err_s, rs),
            };
            if prev.is_some() {
                rates.push(r);
            }
            table.push(vec![
                eps.into(),
                nx.into(),
                grid.dt().into(),
                err_t.into(),
                rt.into(),
                err_s.into(),
                rs.into(),
                primary.label().into(),
                err.into(),
                r.into(),
            ]);
            prev = Some((err_t, err_s));
            last = (nx, err);
            if k + 1 == nxs.len() {
                let x = grid.nodes();
                for n in snapshot_indices(&times, grid.dt(), pv.len() - 1) {
                    out.add(
                        format!("{stem}_e{ei}_t{n}.csv"),
                        columns("", &["x", "p"], &[&x, &pv[n]]),
                        false,
                    );
                }
            }
        }
        let mean = if rates.is_empty() {
            f64::NAN
        } else {
            rates.iter().sum::<f64>() / rates.len() as f64
        };
        summary.push(vec![
            eps.into(),
            primary.label().into(),
            last.0.into(),
            last.1.into(),
            mean.into(),
        ]);
    }
    out.add(format!("{stem}.csv"), table, true);
    out.add(format!("{stem}_summary.csv"), summary, true);
    Ok(out)
}
