//! Preset limit-theorem experiments, convergence reports, the exponential
//! comparison diagnostic, the quadrature nonuniqueness check, and the
//! acceptance suite behind `nclt check`.

pub mod acceptance;
pub mod config;
pub mod presets;
pub mod report;
pub mod runner;
pub mod special;

use crate::arrays::ArrayError;
use crate::convolve::ConvolveError;
use crate::infdiv::InfDivError;
use crate::measures::MeasureError;
use crate::transforms::TransformError;
use thiserror::Error;

/// Which convolution is exercised along the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Boolean,
    Free,
    Classical,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Boolean => "boolean",
            Mode::Free => "free",
            Mode::Classical => "classical",
        }
    }

    pub fn parse(s: &str) -> Result<Mode, ExperimentError> {
        match s {
            "boolean" => Ok(Mode::Boolean),
            "free" => Ok(Mode::Free),
            "classical" => Ok(Mode::Classical),
            _ => Err(ExperimentError::BadParams(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("exponential-sum hypothesis ({0}) violated: {1}")]
    HypothesisViolated(usize, String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Convolve(#[from] ConvolveError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error(transparent)]
    InfDiv(#[from] InfDivError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
