//! Experiment runners. Each returns its tables in memory; [`write_output`]
//! puts them on disk.

mod control;
mod ode;
mod relax;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use lmm_adjoint_core::lmm::AmDenominator;
use lmm_adjoint_core::ode::AdjointRoute;
use lmm_adjoint_core::relax::{Boundary, BurgersFlux, LinearFlux};

use crate::config::{Config, ConfigError, Reader};
use crate::error::CliError;
use crate::keys::{self, SECTIONS};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    OdeConverge,
    RelaxForward,
    RelaxAdjoint,
    ControlJinXin,
    ControlBroadwell,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::OdeConverge,
        Experiment::RelaxForward,
        Experiment::RelaxAdjoint,
        Experiment::ControlJinXin,
        Experiment::ControlBroadwell,
    ];

    /// Name on the command line, also the config section it reads.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::OdeConverge => SECTIONS[0],
            Experiment::RelaxForward => SECTIONS[1],
            Experiment::RelaxAdjoint => SECTIONS[2],
            Experiment::ControlJinXin => SECTIONS[3],
            Experiment::ControlBroadwell => SECTIONS[4],
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown experiment `{s}`, expected one of {}",
                    SECTIONS.join(", ")
                )
            })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which adjoint columns to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteSel {
    Dto,
    Otd,
    Both,
}

impl RouteSel {
    pub fn routes(self) -> &'static [AdjointRoute] {
        match self {
            RouteSel::Dto => &[AdjointRoute::DiscretizeThenOptimize],
            RouteSel::Otd => &[AdjointRoute::OptimizeThenDiscretize],
            RouteSel::Both => &[
                AdjointRoute::DiscretizeThenOptimize,
                AdjointRoute::OptimizeThenDiscretize,
            ],
        }
    }
}

impl FromStr for RouteSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dto" => Ok(RouteSel::Dto),
            "otd" => Ok(RouteSel::Otd),
            "both" => Ok(RouteSel::Both),
            _ => Err("expected dto, otd or both".into()),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub am_denominator: Option<AmDenominator>,
    pub route: Option<RouteSel>,
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub table: Table,
    /// Echo to stdout as an aligned table.
    pub echo: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    /// Named scalar results (also echoed), e.g. cost reduction of a control run.
    pub metrics: Vec<(String, f64)>,
}

impl Output {
    fn add(&mut self, file: String, table: Table, echo: bool) {
        self.artifacts.push(Artifact { file, table, echo });
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.push((name.to_string(), value));
    }

    pub fn artifact(&self, file: &str) -> Option<&Table> {
        self.artifacts
            .iter()
            .find(|a| a.file == file)
            .map(|a| &a.table)
    }

    pub fn metric_value(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    /// The tables marked for echo and the metrics, as terminal text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for a in self.artifacts.iter().filter(|a| a.echo) {
            out.push_str(&a.table.render());
            out.push('\n');
        }
        if !self.metrics.is_empty() {
            let width = self.metrics.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            for (n, v) in &self.metrics {
                out.push_str(&format!("{n:<width$}  {v:.6e}\n"));
            }
        }
        out
    }
}

/// Rejects unknown sections and keys outside the experiment's own section.
fn check_layout(cfg: &Config) -> Result<(), ConfigError> {
    for s in cfg.sections() {
        if !s.name.is_empty() && !SECTIONS.contains(&s.name.as_str()) {
            return Err(ConfigError::UnknownSection {
                section: s.name.clone(),
            });
        }
    }
    let root = cfg.reader("");
    root.opt::<String>("out")?;
    root.finish()
}

/// Output directory named in the config, if any.
pub fn configured_out_dir(cfg: &Config) -> Option<String> {
    cfg.section("")
        .and_then(|s| s.get("out"))
        .map(str::to_string)
}

pub fn run(
    experiment: Experiment,
    cfg: &Config,
    overrides: &Overrides,
) -> Result<Output, CliError> {
    check_layout(cfg)?;
    let p = Params::new(cfg, experiment.name());
    let out = match experiment {
        Experiment::OdeConverge => ode::run(&p, overrides)?,
        Experiment::RelaxForward => relax::run_forward(&p)?,
        Experiment::RelaxAdjoint => relax::run_adjoint(&p)?,
        Experiment::ControlJinXin => control::run_jin_xin(&p)?,
        Experiment::ControlBroadwell => control::run_broadwell(&p)?,
    };
    p.finish()?;
    Ok(out)
}

/// Writes every artifact as CSV below `dir`, creating it if needed.
pub fn write_output(output: &Output, dir: &Path) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    for a in &output.artifacts {
        let path = dir.join(&a.file);
        a.table.write_csv(&path).map_err(io(&path))?;
    }
    Ok(())
}

/// Section reader whose defaults come from the key table.
pub(crate) struct Params<'a> {
    section: &'static str,
    reader: Reader<'a>,
}

impl<'a> Params<'a> {
    fn new(cfg: &'a Config, section: &'static str) -> Self {
        Params {
            section,
            reader: cfg.reader(section),
        }
    }

    fn default_of(&self, key: &str) -> Option<&'static str> {
        keys::lookup(self.section, key)
            .unwrap_or_else(|| {
                panic!(
                    "key `{key}` of [{}] missing from the key table",
                    self.section
                )
            })
            .default
    }

    fn parse<T: FromStr>(&self, key: &str, v: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        v.parse()
            .map_err(|e: T::Err| self.reader.invalid(key, v, e.to_string()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.reader.opt(key)? {
            Some(v) => Ok(v),
            None => {
                let d = self
                    .default_of(key)
                    .unwrap_or_else(|| panic!("key `{key}` has no default"));
                self.parse(key, d)
            }
        }
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.reader.opt(key)? {
            Some(v) => Ok(Some(v)),
            None => self.default_of(key).map(|d| self.parse(key, d)).transpose(),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let d = self
            .default_of(key)
            .unwrap_or_else(|| panic!("key `{key}` has no default"));
        let v = match self.reader.list(key)? {
            Some(v) => v,
            None => d
                .split(',')
                .map(|s| self.parse(key, s.trim()))
                .collect::<Result<_, _>>()?,
        };
        if v.is_empty() {
            return Err(self.invalid(key, "", "list must not be empty"));
        }
        Ok(v)
    }

    /// Like [`Params::list`], additionally requiring strictly increasing entries.
    pub fn increasing<T: FromStr + PartialOrd + fmt::Display>(
        &self,
        key: &str,
    ) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let v = self.list::<T>(key)?;
        if v.windows(2).any(|w| w[1] <= w[0]) {
            let text = v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            return Err(self.invalid(key, &text, "must be strictly increasing"));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.get(key)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(self.invalid(key, &v.to_string(), "must be positive"));
        }
        Ok(v)
    }

    pub fn invalid(&self, key: &str, value: &str, reason: &str) -> ConfigError {
        self.reader.invalid(key, value, reason)
    }

    fn finish(self) -> Result<(), ConfigError> {
        self.reader.finish()
    }
}

/// `log2(e_{k−1}/e_k)`.
pub(crate) fn rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

pub(crate) struct BoundaryKey(pub Boundary);

impl FromStr for BoundaryKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "periodic" => Ok(BoundaryKey(Boundary::Periodic)),
            "clamp" => Ok(BoundaryKey(Boundary::Clamp)),
            _ => Err("expected periodic or clamp".into()),
        }
    }
}

/// Scalar flux chosen at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum FluxChoice {
    Linear(LinearFlux),
    Burgers(BurgersFlux),
}

impl FluxChoice {
    pub fn read(p: &Params) -> Result<Self, ConfigError> {
        let name: String = p.get("flux")?;
        let speed: f64 = p.get("flux_speed")?;
        match name.as_str() {
            "linear" => Ok(FluxChoice::Linear(LinearFlux { speed })),
            "burgers" => Ok(FluxChoice::Burgers(BurgersFlux)),
            _ => Err(p.invalid("flux", &name, "expected linear or burgers")),
        }
    }
}

/// Calls `$body` with `$f` bound to the concrete flux.
macro_rules! with_flux {
    ($choice:expr, |$f:ident| $body:expr) => {
        match $choice {
            $crate::experiments::FluxChoice::Linear($f) => $body,
            $crate::experiments::FluxChoice::Burgers($f) => $body,
        }
    };
}
pub(crate) use with_flux;

/// The `run` key, used as a file stem.
pub(crate) fn run_name(p: &Params) -> Result<String, ConfigError> {
    let r: String = p.get("run")?;
    if r.is_empty() || r.contains(['/', '\\']) {
        return Err(p.invalid("run", &r, "must be a plain file stem"));
    }
    Ok(r)
}
