use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lmm_adjoint::config::Config;
use lmm_adjoint::experiments::{
    configured_out_dir, run, write_output, Experiment, Overrides, RouteSel,
};
use lmm_adjoint::keys;
use lmm_adjoint::CliError;
use lmm_adjoint_core::lmm::AmDenominator;

#[derive(Parser, Debug)]
#[command(
    name = "lmm-adjoint",
    version,
    about = "Multistep adjoint convergence studies and relaxation-system control experiments",
    after_help = keys::help_text(),
)]
struct Cli {
    /// ode-converge | relax-forward | relax-adjoint | control-jinxin | control-broadwell
    experiment: Experiment,
    /// Config file (`key = value` lines under `[experiment]` sections)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `out` from the config, else `results`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Denominator of the AM4 coefficients
    #[arg(long, value_parser = parse_denominator)]
    am_denominator: Option<AmDenominator>,
    /// Adjoint construction(s) for ode-converge
    #[arg(long, value_parser = clap::value_parser!(RouteSel))]
    route: Option<RouteSel>,
}

fn parse_denominator(s: &str) -> Result<AmDenominator, String> {
    s.parse::<i64>()
        .ok()
        .and_then(AmDenominator::from_value)
        .ok_or_else(|| "expected 720 or 270".to_string())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&cli.config).map_err(|source| CliError::Io {
        path: cli.config.clone(),
        source,
    })?;
    let cfg = Config::parse(&text)?;
    let overrides = Overrides {
        am_denominator: cli.am_denominator,
        route: cli.route,
    };
    let output = run(cli.experiment, &cfg, &overrides)?;
    let dir = cli
        .out
        .clone()
        .or_else(|| configured_out_dir(&cfg).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    write_output(&output, &dir)?;
    print!("{}", output.render());
    println!(
        "wrote {} files to {}",
        output.artifacts.len(),
        dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmm-adjoint: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
