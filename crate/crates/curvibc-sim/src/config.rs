//! Simulation configuration: a TOML document with a fixed schema. Unknown
//! keys are rejected.
//!
//! ```toml
//! [grid]
//! ni = 64
//! nj = 32
//! nk = 32
//! spacing = [1.0, 1.0, 1.0]
//! mapping = "identity"          # or "sheared", "stretched", ...
//! # params = { xi_y = 0.2 }     # mapping parameters
//! # grid_file = "grid.txt"      # instead of an analytic mapping
//!
//! [flow]                        # nondimensional: rho = c = 1
//! u = 0.3
//!
//! [boundary]
//! inflow = "modified"           # first_order | quasi3d | modified | hard_wall | periodic
//! outflow = "quasi3d"
//!
//! [pulse]
//! kind = "acoustic"             # acoustic | vorticity | entropy
//! direction = "upstream"        # acoustic only: upstream | downstream | both
//! center = 40.0                 # ξ coordinate of the envelope centre
//! width = 6.0                   # half width at half maximum, in ξ units
//! amplitude = 1e-3
//! angle_deg = 30.0              # incidence angle from the face normal
//! periods_eta = 1               # carrier periods across the η period
//!
//! [time]
//! dt = 0.4
//! n_steps = 200
//!
//! [probes]
//! planes = [24]
//!
//! [filter]
//! sigma = 0.1
//!
//! [reflection]                  # optional: measure against a reference run
//! face = "inflow"               # inflow | outflow | both
//! probes = [24]
//! extension = 96
//! ```

use crate::error::{SimError, SimResult};
use curvibc_core::bc_quasi3d::H44Reading;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Complete run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub grid: GridConfig,
    pub flow: FlowConfig,
    pub boundary: BoundaryConfig,
    pub pulse: PulseConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub probes: ProbeConfig,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub reflection: Option<ReflectionConfig>,
}

/// Grid dimensions and geometry source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    #[serde(default = "unit_spacing")]
    pub spacing: [f64; 3],
    #[serde(default = "identity_mapping")]
    pub mapping: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub grid_file: Option<PathBuf>,
}

fn unit_spacing() -> [f64; 3] {
    [1.0; 3]
}

fn identity_mapping() -> String {
    "identity".into()
}

/// Uniform nondimensional mean velocity (ρ̄ = c̄ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub u: f64,
    #[serde(default)]
    pub v: f64,
    #[serde(default)]
    pub w: f64,
}

/// Boundary treatment of one ξ face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceBc {
    FirstOrder,
    Quasi3d,
    Modified,
    HardWall,
    Periodic,
}

impl FaceBc {
    /// Configuration spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            FaceBc::FirstOrder => "first_order",
            FaceBc::Quasi3d => "quasi3d",
            FaceBc::Modified => "modified",
            FaceBc::HardWall => "hard_wall",
            FaceBc::Periodic => "periodic",
        }
    }
}

/// Boundary treatments of the ξ-min (inflow) and ξ-max (outflow) faces.
/// The η and ζ directions are always periodic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub inflow: FaceBc,
    pub outflow: FaceBc,
    #[serde(default)]
    pub h44: H44Reading,
}

/// Wave family of the initial pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Acoustic,
    Vorticity,
    Entropy,
}

/// Propagation sense of an acoustic pulse relative to +ξ. `Both` starts
/// from a pressure disturbance at rest, which splits into an upstream and a
/// downstream wave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PulseDirection {
    #[default]
    Upstream,
    Downstream,
    Both,
}

/// Initial condition: a ξ-Gaussian envelope, optionally carrying an oblique
/// plane-wave phase that is periodic in η.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub kind: PulseKind,
    #[serde(default)]
    pub direction: PulseDirection,
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    #[serde(default)]
    pub angle_deg: f64,
    #[serde(default = "one_period")]
    pub periods_eta: u32,
}

fn one_period() -> u32 {
    1
}

/// Time step and step count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub n_steps: usize,
}

/// ξ-index planes whose histories are recorded every step.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default)]
    pub planes: Vec<usize>,
}

/// Low-pass filter settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "enabled")]
    pub enabled: bool,
}

fn default_sigma() -> f64 {
    0.1
}

fn enabled() -> bool {
    true
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self { sigma: default_sigma(), enabled: true }
    }
}

/// Which ξ faces a reflection measurement targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Inflow,
    Outflow,
    Both,
}

impl Face {
    /// Whether the inflow face is measured.
    pub fn includes_inflow(self) -> bool {
        matches!(self, Face::Inflow | Face::Both)
    }

    /// Whether the outflow face is measured.
    pub fn includes_outflow(self) -> bool {
        matches!(self, Face::Outflow | Face::Both)
    }
}

/// Reflection measurement: the run is compared with a reference run whose
/// domain is extended by `extension` nodes beyond each measured face. The
/// amplitudes combine all `probes` planes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionConfig {
    pub face: Face,
    pub probes: Vec<usize>,
    pub extension: usize,
}

impl SimConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml(text: &str) -> SimResult<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads, parses and validates a configuration file. A relative
    /// `grid_file` is resolved against the file's directory.
    pub fn load(path: &Path) -> SimResult<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(g), Some(dir)) = (cfg.grid.grid_file.as_mut(), path.parent()) {
            if g.is_relative() {
                *g = dir.join(&*g);
            }
        }
        Ok(cfg)
    }

    /// Serializes back to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    /// Structural checks that do not need the metric field.
    pub fn validate(&self) -> SimResult<()> {
        let g = &self.grid;
        let bad = |m: &str| Err(SimError::Config(m.into()));
        if g.ni < 8 || g.nj < 5 || g.nk < 5 {
            return bad("grid needs ni >= 8 and nj, nk >= 5");
        }
        if g.spacing.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return bad("spacing must be positive and finite");
        }
        let f = &self.flow;
        if ![f.u, f.v, f.w].iter().all(|v| v.is_finite()) {
            return bad("flow velocity must be finite");
        }
        let b = &self.boundary;
        if (b.inflow == FaceBc::Periodic) != (b.outflow == FaceBc::Periodic) {
            return bad("periodic ξ needs both faces periodic");
        }
        let p = &self.pulse;
        if !(p.width > 0.0) || !p.amplitude.is_finite() || !p.center.is_finite() {
            return bad("pulse needs width > 0 and finite centre and amplitude");
        }
        if !(0.0..90.0).contains(&p.angle_deg) {
            return bad("pulse angle must lie in [0, 90) degrees");
        }
        if !(self.time.dt > 0.0 && self.time.dt.is_finite()) || self.time.n_steps == 0 {
            return bad("time needs dt > 0 and n_steps > 0");
        }
        if self.probes.planes.iter().any(|&i| i >= g.ni) {
            return bad("probe plane outside the grid");
        }
        if !(0.0..=1.0).contains(&self.filter.sigma) {
            return bad("filter sigma must lie in [0, 1]");
        }
        if let Some(r) = &self.reflection {
            if r.probes.is_empty() || r.probes.iter().any(|&i| i >= g.ni) {
                return bad("reflection needs probes inside the grid");
            }
            if b.inflow == FaceBc::Periodic {
                return bad("reflection needs a non-periodic face");
            }
        }
        Ok(())
    }

    /// CFL number max(|ū·∇ξ_a| + |∇ξ_a|)·dt/h_a summed over directions, for
    /// a uniform metric with rows `rows`.
    pub fn cfl(&self, rows: &[[f64; 3]; 3]) -> f64 {
        let vel = [self.flow.u, self.flow.v, self.flow.w];
        (0..3)
            .map(|a| {
                let r = rows[a];
                let contra = (r[0] * vel[0] + r[1] * vel[1] + r[2] * vel[2]).abs();
                let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                (contra + norm) * self.time.dt / self.grid.spacing[a]
            })
            .sum()
    }
}
