//! Analytic coordinate mappings and metric fields over structured grids.
//!
//! A mapping sends computational coordinates (ξ, η, ζ) to physical
//! coordinates (x, y, z). The metric at a node is the exact derivative of the
//! inverse mapping, evaluated in closed form.

use super::{inverse3, Metric};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Uniform computational grid: node (i, j, k) sits at
/// `(i·spacing[0], j·spacing[1], k·spacing[2])`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputationalGrid<T> {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub spacing: [T; 3],
}

impl<T: Real> ComputationalGrid<T> {
    /// Total node count.
    pub fn len(&self) -> usize {
        self.ni * self.nj * self.nk
    }

    /// True when the grid has no nodes.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Linear index with k varying fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.nj + j) * self.nk + k
    }

    /// Computational coordinates of a node.
    pub fn coords(&self, i: usize, j: usize, k: usize) -> [T; 3] {
        [T::lit(i as f64) * self.spacing[0], T::lit(j as f64) * self.spacing[1], T::lit(k as f64) * self.spacing[2]]
    }
}

/// Metric components (and physical coordinates) at every node of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricField<T> {
    pub grid: ComputationalGrid<T>,
    pub metrics: Vec<Metric<T>>,
    pub coords: Vec<[T; 3]>,
}

impl<T: Real> MetricField<T> {
    /// Metric at node (i, j, k).
    pub fn at(&self, i: usize, j: usize, k: usize) -> &Metric<T> {
        &self.metrics[self.grid.index(i, j, k)]
    }
}

/// Registry of analytic mappings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Mapping<T> {
    /// x = ξ, y = η, z = ζ.
    Identity,
    /// Per-axis power-law stretching `x_a = s_a + amp_a · s_a^power_a`.
    Stretched { amp: [T; 3], power: [T; 3] },
    /// Constant metric `I + offdiag`; the diagonal of `offdiag` is ignored.
    Sheared { offdiag: [[T; 3]; 3] },
    /// Polar sector: r = r0 + ξ, θ = theta0 + theta_scale·η, z = ζ.
    CylindricalSector { r0: T, theta0: T, theta_scale: T },
}

fn param<T: Real>(p: &BTreeMap<String, f64>, key: &str, default: f64) -> T {
    T::lit(p.get(key).copied().unwrap_or(default))
}

fn check_keys(p: &BTreeMap<String, f64>, allowed: &[&str]) -> Result<()> {
    for key in p.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::InvalidMappingParams(format!("unknown parameter `{key}`")));
        }
    }
    if p.values().any(|v| !v.is_finite()) {
        return Err(Error::InvalidMappingParams("non-finite parameter".into()));
    }
    Ok(())
}

impl<T: Real> Mapping<T> {
    /// Looks up a mapping by registry name and builds it from parameters.
    ///
    /// * `identity`: no parameters.
    /// * `stretched`: `ax, ay, az` (amplitudes, default 0) and `px, py, pz`
    ///   (powers ≥ 1, default 2).
    /// * `sheared`: off-diagonal metric entries `xi_y, xi_z, eta_x, eta_z,
    ///   zeta_x, zeta_y` (default 0).
    /// * `cylindrical-sector`: `r0` (> 0, default 1), `theta0` (default 0),
    ///   `theta_scale` (radians per unit η, default 0.01).
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        match name {
            "identity" => {
                check_keys(params, &[])?;
                Ok(Mapping::Identity)
            }
            "stretched" => {
                check_keys(params, &["ax", "ay", "az", "px", "py", "pz"])?;
                let amp = [param(params, "ax", 0.0), param(params, "ay", 0.0), param(params, "az", 0.0)];
                let power = [param(params, "px", 2.0), param(params, "py", 2.0), param(params, "pz", 2.0)];
                if power.iter().any(|&p: &T| p < T::one()) {
                    return Err(Error::InvalidMappingParams("stretching powers must be >= 1".into()));
                }
                Ok(Mapping::Stretched { amp, power })
            }
            "sheared" => {
                check_keys(params, &["xi_y", "xi_z", "eta_x", "eta_z", "zeta_x", "zeta_y"])?;
                let z = T::zero();
                let offdiag = [
                    [z, param(params, "xi_y", 0.0), param(params, "xi_z", 0.0)],
                    [param(params, "eta_x", 0.0), z, param(params, "eta_z", 0.0)],
                    [param(params, "zeta_x", 0.0), param(params, "zeta_y", 0.0), z],
                ];
                Ok(Mapping::Sheared { offdiag })
            }
            "cylindrical-sector" => {
                check_keys(params, &["r0", "theta0", "theta_scale"])?;
                let r0: T = param(params, "r0", 1.0);
                let theta_scale: T = param(params, "theta_scale", 0.01);
                if !(r0 > T::zero()) || theta_scale == T::zero() {
                    return Err(Error::InvalidMappingParams(
                        "cylindrical-sector needs r0 > 0 and theta_scale != 0".into(),
                    ));
                }
                Ok(Mapping::CylindricalSector { r0, theta0: param(params, "theta0", 0.0), theta_scale })
            }
            other => Err(Error::UnknownMapping(other.to_string())),
        }
    }

    /// Physical coordinates of computational point `s`.
    pub fn forward(&self, s: [T; 3]) -> [T; 3] {
        match self {
            Mapping::Identity => s,
            Mapping::Stretched { amp, power } => {
                [0, 1, 2].map(|a| s[a] + amp[a] * s[a].abs().powf(power[a]) * s[a].signum())
            }
            Mapping::Sheared { offdiag } => {
                let m = sheared_matrix(offdiag);
                let inv = inverse3(&m).unwrap_or(m);
                [0, 1, 2].map(|a| inv[a][0] * s[0] + inv[a][1] * s[1] + inv[a][2] * s[2])
            }
            Mapping::CylindricalSector { r0, theta0, theta_scale } => {
                let r = *r0 + s[0];
                let th = *theta0 + *theta_scale * s[1];
                [r * th.cos(), r * th.sin(), s[2]]
            }
        }
    }

    /// Exact metric (derivatives of the inverse mapping) at computational
    /// point `s`. Returns `None` when the mapping is singular there.
    pub fn metric_at(&self, s: [T; 3]) -> Option<Metric<T>> {
        let m = match self {
            Mapping::Identity => Metric::cartesian(),
            Mapping::Stretched { amp, power } => {
                let d = [0, 1, 2].map(|a| T::one() + amp[a] * power[a] * s[a].abs().powf(power[a] - T::one()));
                if d.iter().any(|&v| !(v > T::zero())) {
                    return None;
                }
                let z = T::zero();
                Metric::from_rows_unchecked([[T::one() / d[0], z, z], [z, T::one() / d[1], z], [z, z, T::one() / d[2]]])
            }
            Mapping::Sheared { offdiag } => Metric::from_rows_unchecked(sheared_matrix(offdiag)),
            Mapping::CylindricalSector { r0, theta0, theta_scale } => {
                let r = *r0 + s[0];
                if !(r > T::zero()) {
                    return None;
                }
                let th = *theta0 + *theta_scale * s[1];
                let (sn, cs) = th.sin_cos();
                let z = T::zero();
                let f = T::one() / (*theta_scale * r);
                Metric::from_rows_unchecked([[cs, sn, z], [-sn * f, cs * f, z], [z, z, T::one()]])
            }
        };
        m.validate().ok().map(|_| m)
    }

    /// Evaluates the mapping on every node of `grid`.
    pub fn metric_field(&self, grid: &ComputationalGrid<T>) -> Result<MetricField<T>> {
        let mut metrics = Vec::with_capacity(grid.len());
        let mut coords = Vec::with_capacity(grid.len());
        for i in 0..grid.ni {
            for j in 0..grid.nj {
                for k in 0..grid.nk {
                    let s = grid.coords(i, j, k);
                    let m = self.metric_at(s).ok_or(Error::SingularMapping { i, j, k })?;
                    metrics.push(m);
                    coords.push(self.forward(s));
                }
            }
        }
        Ok(MetricField { grid: *grid, metrics, coords })
    }
}

fn sheared_matrix<T: Real>(off: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let mut m = *off;
    for (a, row) in m.iter_mut().enumerate() {
        row[a] = T::one();
    }
    m
}

/// Builds the metric field of a named mapping over `grid`.
pub fn analytic_mapping<T: Real>(
    name: &str,
    params: &BTreeMap<String, f64>,
    grid: &ComputationalGrid<T>,
) -> Result<MetricField<T>> {
    Mapping::from_name(name, params)?.metric_field(grid)
}
