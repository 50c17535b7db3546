//! Errors raised by the simulator.

use thiserror::Error;

/// Every failure mode of a simulation run.
#[derive(Debug, Error)]
pub enum SimError {
    /// The configuration is malformed or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A boundary operator or metric could not be built.
    #[error(transparent)]
    Core(#[from] curvibc_core::Error),
    /// The field norm grew beyond the instability threshold.
    #[error("instability at step {step}: norm grew by a factor {growth:e}")]
    Instability { step: usize, growth: f64 },
    /// A NaN or infinity appeared in the field.
    #[error("non-finite value at step {step}, node ({i}, {j}, {k})")]
    NonFinite { step: usize, i: usize, j: usize, k: usize },
    /// The combined boundary system is singular at a face node.
    #[error("singular boundary closure at face node ({j}, {k})")]
    SingularClosure { j: usize, k: usize },
    /// The incident pulse never reached the probe plane.
    #[error("no incident signal at the probe plane")]
    NoSignal,
    /// Reading or writing run artifacts failed.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    /// Stable variant name used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            SimError::Config(_) => "Config",
            SimError::Core(e) => e.name(),
            SimError::Instability { .. } => "Instability",
            SimError::NonFinite { .. } => "NonFinite",
            SimError::SingularClosure { .. } => "SingularClosure",
            SimError::NoSignal => "NoSignal",
            SimError::Io(_) => "Io",
        }
    }
}

/// Simulator result alias.
pub type SimResult<T> = std::result::Result<T, SimError>;
