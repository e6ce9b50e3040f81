use std::io;
use std::path::PathBuf;

use lmm_adjoint_core::lmm::LmmError;
use lmm_adjoint_core::ode::OdeError;
use lmm_adjoint_core::optctl::ControlError;
use lmm_adjoint_core::relax::RelaxError;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    /// Inputs that parse but describe an impossible setup (misaligned grid, CFL, ...).
    #[error("setup: {0}")]
    Setup(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Setup(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<RelaxError> for CliError {
    fn from(e: RelaxError) -> Self {
        match e {
            RelaxError::InvalidModel(_)
            | RelaxError::InvalidGrid(_)
            | RelaxError::Cfl { .. }
            | RelaxError::Misaligned { .. }
            | RelaxError::Subcharacteristic { .. }
            | RelaxError::NotBdf(_)
            | RelaxError::Dimension { .. } => CliError::Setup(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::Step { .. }
            | OdeError::NonFinite { .. }
            | OdeError::SingularAdjoint { .. } => CliError::Solver(e.to_string()),
            _ => CliError::Setup(e.to_string()),
        }
    }
}

impl From<LmmError> for CliError {
    fn from(e: LmmError) -> Self {
        CliError::Setup(e.to_string())
    }
}

impl From<ControlError> for CliError {
    fn from(e: ControlError) -> Self {
        match e {
            ControlError::Solver { .. } => CliError::Solver(e.to_string()),
            _ => CliError::Setup(e.to_string()),
        }
    }
}
