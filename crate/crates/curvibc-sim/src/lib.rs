//! Structured-grid solver for the linearized Euler equations in
//! generalized curvilinear coordinates, used to measure how much the
//! boundary conditions of `curvibc-core` reflect.
//!
//! - [`config`]: TOML run configuration.
//! - [`scheme`]: finite-difference and filter stencils.
//! - [`boundary`]: characteristic closures at the ξ faces.
//! - [`pulse`]: initial pulses.
//! - [`solver`]: the RK4 time stepper and probe recording.
//! - [`reflection`]: reflection measurement against a reference run.
//! - [`output`]: CSV and JSON artifacts.
//! - [`experiments`]: the refinement study and the reflection comparison.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod boundary;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod pulse;
pub mod reflection;
pub mod scheme;
pub mod solver;

pub use config::SimConfig;
pub use error::{SimError, SimResult};
pub use reflection::{run_reflection, ReflectionReport};
pub use solver::{run_config, RunOutput, Simulation};
