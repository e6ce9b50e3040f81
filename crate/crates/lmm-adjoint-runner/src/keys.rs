//! Every configuration key with its default and a one-line description.
//!
//! This table drives `--help`, the generated reference config and the default
//! values used by the experiments, so the three cannot drift apart.

use std::fmt::Write as _;

pub struct Key {
    pub section: &'static str,
    pub name: &'static str,
    /// `None` marks an optional key without a default.
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

const fn key(
    section: &'static str,
    name: &'static str,
    default: &'static str,
    doc: &'static str,
) -> Key {
    Key {
        section,
        name,
        default: Some(default),
        doc,
    }
}

const fn optional(section: &'static str, name: &'static str, doc: &'static str) -> Key {
    Key {
        section,
        name,
        default: None,
        doc,
    }
}

pub const SECTIONS: [&str; 5] = [
    "ode-converge",
    "relax-forward",
    "relax-adjoint",
    "control-jinxin",
    "control-broadwell",
];

pub static KEYS: &[Key] = &[
    key(
        "",
        "out",
        "results",
        "output directory (overridden by --out)",
    ),
    // ode-converge
    key(
        "ode-converge",
        "run",
        "ode-converge",
        "file stem of the result table",
    ),
    key(
        "ode-converge",
        "problem",
        "const-fy",
        "const-fy | quadratic-fy | riccati",
    ),
    key(
        "ode-converge",
        "schemes",
        "ExplicitEuler, AB3, AM4",
        "comma-separated tableau names",
    ),
    key(
        "ode-converge",
        "n",
        "40, 80, 160, 320, 640",
        "strictly increasing step counts N",
    ),
    key("ode-converge", "t_end", "1.0", "final time T"),
    key(
        "ode-converge",
        "alpha",
        "0.0",
        "running-cost weight (riccati only)",
    ),
    key(
        "ode-converge",
        "terminal",
        "exact",
        "adjoint terminal block: exact | pad | discrete (discrete applies to dto, otd then pads)",
    ),
    key(
        "ode-converge",
        "init",
        "exact",
        "pre-initial state history: exact | rk",
    ),
    key(
        "ode-converge",
        "route",
        "both",
        "dto | otd | both (overridden by --route)",
    ),
    key(
        "ode-converge",
        "am_denominator",
        "720",
        "AM4 denominator, 720 or 270 (overridden by --am-denominator)",
    ),
    key(
        "ode-converge",
        "newton_tol",
        "1e-12",
        "implicit solve tolerance",
    ),
    key(
        "ode-converge",
        "newton_max_iter",
        "50",
        "implicit solve iteration cap",
    ),
    // relax-forward
    key(
        "relax-forward",
        "run",
        "relax-forward",
        "file stem of snapshots and the mass log",
    ),
    key("relax-forward", "flux", "burgers", "linear | burgers"),
    key(
        "relax-forward",
        "flux_speed",
        "1.0",
        "s in F(u) = s u for the linear flux",
    ),
    key(
        "relax-forward",
        "a",
        "2.1",
        "characteristic speed a (velocities ±a)",
    ),
    key("relax-forward", "eps", "1e-2", "relaxation time"),
    key("relax-forward", "scheme", "BDF3", "BDF scheme"),
    key("relax-forward", "x_left", "0.0", "left end of the domain"),
    key("relax-forward", "x_right", "6.0", "right end of the domain"),
    key("relax-forward", "nx", "640", "number of spatial nodes"),
    key("relax-forward", "boundary", "periodic", "periodic | clamp"),
    optional(
        "relax-forward",
        "dt",
        "time step (default dx / a, grid-aligned)",
    ),
    key("relax-forward", "t_end", "1.0", "final time"),
    key(
        "relax-forward",
        "center",
        "3.0",
        "centre c of the initial data exp(-(x - c)^2)",
    ),
    key(
        "relax-forward",
        "snapshots",
        "0.0, 0.5, 1.0",
        "snapshot times, rounded to the nearest step",
    ),
    // relax-adjoint
    key(
        "relax-adjoint",
        "run",
        "relax-adjoint",
        "file stem of the eps-study tables and snapshots",
    ),
    key("relax-adjoint", "flux", "linear", "linear | burgers"),
    key(
        "relax-adjoint",
        "flux_speed",
        "1.0",
        "s in F(u) = s u for the linear flux",
    ),
    key("relax-adjoint", "a", "2.1", "characteristic speed a"),
    key(
        "relax-adjoint",
        "eps",
        "1, 1e-1, 1e-2, 1e-3, 1e-4",
        "relaxation times to study",
    ),
    key("relax-adjoint", "scheme", "BDF2", "BDF scheme"),
    key("relax-adjoint", "x_left", "0.0", "left end of the domain"),
    key("relax-adjoint", "x_right", "6.0", "right end of the domain"),
    key(
        "relax-adjoint",
        "nx",
        "40, 80, 160, 320, 640",
        "strictly increasing node counts; dt = dx / a",
    ),
    key("relax-adjoint", "t_end", "1.0", "final time"),
    key(
        "relax-adjoint",
        "center",
        "3.0",
        "centre of exp(-(x - c)^2), used as u0 and as p(T)",
    ),
    key(
        "relax-adjoint",
        "reference",
        "auto",
        "primary error: transport | self | auto (self for eps >= 1e-2, transport below)",
    ),
    key(
        "relax-adjoint",
        "ref_factor",
        "4",
        "refinement factor of the self-reference grid",
    ),
    key(
        "relax-adjoint",
        "snapshots",
        "0.0",
        "times at which p is written on the finest grid",
    ),
    // control-jinxin
    key(
        "control-jinxin",
        "run",
        "control-jinxin",
        "file stem of the log and snapshots",
    ),
    key("control-jinxin", "flux", "burgers", "linear | burgers"),
    key(
        "control-jinxin",
        "flux_speed",
        "1.0",
        "s in F(u) = s u for the linear flux",
    ),
    key("control-jinxin", "a", "1.0", "characteristic speed a"),
    key("control-jinxin", "eps", "1e-2", "relaxation time"),
    key("control-jinxin", "scheme", "BDF2", "BDF scheme"),
    key("control-jinxin", "x_left", "-3.0", "left end of the domain"),
    key(
        "control-jinxin",
        "x_right",
        "3.0",
        "right end of the domain",
    ),
    key("control-jinxin", "nx", "120", "number of spatial nodes"),
    key("control-jinxin", "boundary", "periodic", "periodic | clamp"),
    key("control-jinxin", "dt", "0.05", "time step"),
    key("control-jinxin", "t_end", "3.0", "final time"),
    key("control-jinxin", "iterations", "30", "descent iterations"),
    key(
        "control-jinxin",
        "filter",
        "gradient",
        "TV filter placement: off | control | gradient",
    ),
    key(
        "control-jinxin",
        "filter_every",
        "1",
        "apply the filter every k-th iteration",
    ),
    key("control-jinxin", "step", "bb2", "bb1 | bb2 | fixed"),
    key(
        "control-jinxin",
        "sigma0",
        "0.1",
        "first step size (the step itself when step = fixed)",
    ),
    key(
        "control-jinxin",
        "grad_tol",
        "1e-8",
        "stop when the gradient max-norm drops below",
    ),
    key(
        "control-jinxin",
        "save_every",
        "10",
        "write the control every k iterations (0 = final only)",
    ),
    // control-broadwell
    key(
        "control-broadwell",
        "run",
        "control-broadwell",
        "file stem of the log and snapshots",
    ),
    key(
        "control-broadwell",
        "c",
        "1.5625",
        "Broadwell speed c (velocities c, -c, 0)",
    ),
    key("control-broadwell", "eps", "1e-2", "relaxation time"),
    key("control-broadwell", "scheme", "BDF2", "BDF scheme"),
    key(
        "control-broadwell",
        "x_left",
        "-2.5",
        "left end of the domain",
    ),
    key(
        "control-broadwell",
        "x_right",
        "2.5",
        "right end of the domain",
    ),
    key("control-broadwell", "nx", "320", "number of spatial nodes"),
    key("control-broadwell", "boundary", "clamp", "periodic | clamp"),
    key("control-broadwell", "dt", "0.01", "time step"),
    key("control-broadwell", "t_end", "0.15", "final time"),
    key(
        "control-broadwell",
        "iterations",
        "70",
        "descent iterations",
    ),
    key(
        "control-broadwell",
        "filter",
        "gradient",
        "TV filter placement: off | control | gradient",
    ),
    key(
        "control-broadwell",
        "filter_every",
        "1",
        "apply the filter every k-th iteration",
    ),
    key("control-broadwell", "step", "bb2", "bb1 | bb2 | fixed"),
    key(
        "control-broadwell",
        "sigma0",
        "0.1",
        "first step size (the step itself when step = fixed)",
    ),
    key(
        "control-broadwell",
        "grad_tol",
        "1e-8",
        "stop when the gradient max-norm drops below",
    ),
    key(
        "control-broadwell",
        "save_every",
        "10",
        "write the control every k iterations (0 = final only)",
    ),
];

pub fn lookup(section: &str, name: &str) -> Option<&'static Key> {
    KEYS.iter().find(|k| k.section == section && k.name == name)
}

/// Config file listing every key at its default, with the description as a comment.
pub fn reference_config() -> String {
    let mut out =
        String::from("# lmm-adjoint reference configuration: every key at its default value.\n");
    let mut current = None;
    for k in KEYS {
        if current != Some(k.section) {
            current = Some(k.section);
            if !k.section.is_empty() {
                let _ = writeln!(out, "\n[{}]", k.section);
            }
        }
        let _ = writeln!(out, "# {}", k.doc);
        match k.default {
            Some(v) => {
                let _ = writeln!(out, "{} = {v}", k.name);
            }
            None => {
                let _ = writeln!(out, "# {} =", k.name);
            }
        }
    }
    out
}

/// Key listing for `--help`.
pub fn help_text() -> String {
    let mut out = String::from("Configuration keys (section, key = default: description):\n");
    let mut current = None;
    for k in KEYS {
        if current != Some(k.section) {
            current = Some(k.section);
            let name = if k.section.is_empty() {
                "top level"
            } else {
                k.section
            };
            let _ = writeln!(out, "\n  [{name}]");
        }
        let _ = writeln!(
            out,
            "    {} = {}: {}",
            k.name,
            k.default.unwrap_or("(unset)"),
            k.doc
        );
    }
    out
}
