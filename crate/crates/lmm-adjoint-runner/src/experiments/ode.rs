use lmm_adjoint_core::lmm::{
    tableau_with, AmDenominator, MultistepTableau, SolverOptions, TimeGrid,
};
use lmm_adjoint_core::ode::{
    solve_adjoint, solve_forward, AdjointRoute, InitMode, OdeControlProblem, TerminalData,
    Trajectory,
};

use super::{rate, Output, Overrides, Params, RouteSel};
use crate::error::CliError;
use crate::problems::{BuiltinProblem, ProblemKind};
use crate::table::{Cell, Table};

struct Setup {
    problem: BuiltinProblem,
    schemes: Vec<MultistepTableau>,
    ns: Vec<usize>,
    terminal: TerminalData,
    init: InitMode,
    routes: RouteSel,
    opts: SolverOptions,
}

fn read(p: &Params, overrides: &Overrides) -> Result<Setup, CliError> {
    let kind: ProblemKind = p.get("problem")?;
    let t_end = p.positive("t_end")?;
    if kind == ProblemKind::Riccati && t_end >= 1.0 {
        return Err(p
            .invalid("t_end", &t_end.to_string(), "riccati blows up at t = 1")
            .into());
    }
    let alpha: f64 = p.get("alpha")?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(p
            .invalid("alpha", &alpha.to_string(), "must be >= 0")
            .into());
    }
    let denom: i64 = p.get("am_denominator")?;
    let am = match overrides.am_denominator {
        Some(am) => am,
        None => AmDenominator::from_value(denom).ok_or_else(|| {
            p.invalid("am_denominator", &denom.to_string(), "expected 720 or 270")
        })?,
    };
    let names: Vec<String> = p.list("schemes")?;
    let schemes = names
        .iter()
        .map(|n| tableau_with(n, am).map_err(|e| p.invalid("schemes", n, &e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let ns: Vec<usize> = p.increasing("n")?;
    let terminal: String = p.get("terminal")?;
    let terminal = match terminal.as_str() {
        "exact" => TerminalData::Exact,
        "pad" => TerminalData::Padded,
        "discrete" => TerminalData::Discrete,
        _ => {
            return Err(p
                .invalid("terminal", &terminal, "expected exact, pad or discrete")
                .into())
        }
    };
    let init: String = p.get("init")?;
    let init = match init.as_str() {
        "exact" => InitMode::Exact,
        "rk" => InitMode::RkBootstrap,
        _ => return Err(p.invalid("init", &init, "expected exact or rk").into()),
    };
    let route: RouteSel = p.get("route")?;
    let opts = SolverOptions {
        tol: p.positive("newton_tol")?,
        max_iter: p.get("newton_max_iter")?,
    };
    Ok(Setup {
        problem: BuiltinProblem { kind, t_end, alpha },
        schemes,
        ns,
        terminal,
        init,
        routes: overrides.route.unwrap_or(route),
        opts,
    })
}

fn route_label(r: AdjointRoute) -> &'static str {
    match r {
        AdjointRoute::DiscretizeThenOptimize => "dto",
        AdjointRoute::OptimizeThenDiscretize => "otd",
    }
}

/// State error (if integrated) and adjoint error per route at one N.
fn errors(
    s: &Setup,
    tab: &MultistepTableau,
    n: usize,
) -> Result<(Option<f64>, Vec<f64>), CliError> {
    let p = &s.problem;
    let grid = TimeGrid::new(0.0, p.t_end, n)?;
    let u = vec![0.0; Trajectory::slots(&grid, tab.stages())];
    let (traj, err_y) = if p.kind.prescribed_state() {
        let tr = Trajectory::prescribed(grid, tab.stages(), 1, 1, &u, |t, o| {
            p.exact_state(t, o);
        })?;
        (tr, None)
    } else {
        let tr = solve_forward(p, tab, &grid, &u, s.init, &s.opts)?;
        let e = tr.max_error(|t, o| {
            p.exact_state(t, o);
        });
        (tr, Some(e))
    };
    let mut errs = Vec::new();
    for &route in s.routes.routes() {
        let terminal = match (route, s.terminal) {
            (AdjointRoute::OptimizeThenDiscretize, TerminalData::Discrete) => TerminalData::Padded,
            (_, t) => t,
        };
        let adj = solve_adjoint(p, tab, &traj, route, terminal)?;
        errs.push(adj.max_error(|t, o| {
            p.exact_adjoint(t, o);
        }));
    }
    Ok((err_y, errs))
}

pub(super) fn run(p: &Params, overrides: &Overrides) -> Result<Output, CliError> {
    let stem = super::run_name(p)?;
    let s = read(p, overrides)?;
    let mut headers = vec!["scheme", "N"];
    let integrated = !s.problem.kind.prescribed_state();
    if integrated {
        headers.extend(["err_y", "rate_y"]);
    }
    let labels: Vec<(String, String)> = s
        .routes
        .routes()
        .iter()
        .map(|&r| {
            (
                format!("err_{}", route_label(r)),
                format!("rate_{}", route_label(r)),
            )
        })
        .collect();
    for (e, r) in &labels {
        headers.push(e);
        headers.push(r);
    }
    let title = format!(
        "{}: L-infinity errors over [0, {}], problem {}",
        stem,
        s.problem.t_end,
        s.problem.kind.name()
    );
    let mut table = Table::new(title, &headers);
    for tab in &s.schemes {
        // one unprinted coarser level supplies the first rate
        let half = s.ns[0] / 2;
        let mut prev = if s.ns[0] % 2 == 0 && half >= tab.stages() {
            errors(&s, tab, half).ok()
        } else {
            None
        };
        for &n in &s.ns {
            let cur = errors(&s, tab, n)?;
            let mut row: Vec<Cell> = vec![tab.name().into(), n.into()];
            let r = |c: Option<f64>, f: f64| c.map_or(f64::NAN, |c| rate(c, f));
            if let Some(e) = cur.0 {
                row.push(e.into());
                row.push(r(prev.as_ref().and_then(|p| p.0), e).into());
            }
            for (k, e) in cur.1.iter().enumerate() {
                row.push((*e).into());
                row.push(r(prev.as_ref().map(|p| p.1[k]), *e).into());
            }
            table.push(row);
            prev = Some(cur);
        }
    }
    let mut out = Output::default();
    out.add(format!("{stem}.csv"), table, true);
    Ok(out)
}
