//! Nonreflecting inflow/outflow boundary conditions for the three-dimensional
//! linearized Euler equations in generalized curvilinear coordinates.
//!
//! The crate covers the full analytic chain:
//!
//! - [`metrics`]: grid-metric algebra, mean flow, contravariant velocities,
//!   analytic mappings and structured-grid ingestion.
//! - [`matrices`]: Cartesian and curvilinear flux matrices and the Fourier
//!   dispersion matrix.
//! - [`dispersion`]: closed-form roots, group velocities, wave
//!   classification and the λ-parameterized quantities S*, k₄*, k₅*.
//! - [`eigenvectors`]: the five right/left eigenvector families, their
//!   v-left forms and the λ → 0 limit vectors.
//!   first-order boundary conditions.
//! - [`bc_quasi3d`]: second-order (quasi-3D) boundary operators.
//! - [`wellposedness`]: critical matrices, ill-posed mode detection and
//!   outflow checks.
//! - [`bc_modified`]: the modified inflow conditions with m₁/m₂ corrections.
//!
//! Every routine is generic over the scalar type through [`Real`]; `f64`
//! and `f32` aliases for the main types are provided at the crate root.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod bc_first_order;
pub mod bc_modified;
pub mod bc_quasi3d;
pub mod dispersion;
pub mod eigenvectors;
pub mod error;
pub mod linalg;
pub mod matrices;
pub mod metrics;
pub mod sampling;
pub mod scalar;
pub mod wellposedness;

pub use error::{Error, Result};
pub use metrics::{ContravariantFlow, MeanFlow, Metric, MetricNorms};
pub use scalar::{Cx, Mat5, Real, Vec5};

/// Double-precision metric.
pub type Metric64 = Metric<f64>;
/// Single-precision metric.
pub type Metric32 = Metric<f32>;
/// Double-precision mean flow.
pub type MeanFlow64 = MeanFlow<f64>;
/// Single-precision mean flow.
pub type MeanFlow32 = MeanFlow<f32>;
/// Double-precision λ pair.
pub type LambdaPair64 = dispersion::LambdaPair<f64>;
/// Single-precision λ pair.
pub type LambdaPair32 = dispersion::LambdaPair<f32>;
