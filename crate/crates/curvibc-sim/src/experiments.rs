//! Standard experiments: the grid-refinement study of the interior scheme,
//! the oblique reflection comparison of the boundary variants and the
//! hard-wall control.

use crate::config::{FaceBc, SimConfig};
use crate::error::{SimError, SimResult};
use crate::reflection::{reference_config, report_from_runs, ReflectionReport};
use crate::scheme::State;
use crate::solver::{run_config, Simulation};

/// Mean flow Mach number of the standard experiments.
pub const STANDARD_MACH: f64 = 0.3;

/// Maximum nodal error of a periodic plane acoustic wave
/// p′ = ρ′ = u′ = sin(2πx/L) advected for one period on `n` nodes of a
/// unit-length ξ-periodic Cartesian box, at Courant number 0.4 relative to
/// the speed ū + 1.
pub fn refinement_error(n: usize, threads: Option<usize>) -> SimResult<f64> {
    let u = STANDARD_MACH;
    let h = 1.0 / n as f64;
    let speed = u + 1.0;
    let steps = (n as f64 / 0.4).ceil() as usize;
    let dt = 1.0 / speed / steps as f64;
    let text = format!(
        r#"
[grid]
ni = {n}
nj = 5
nk = 5
spacing = [{h}, 1.0, 1.0]
[flow]
u = {u}
[boundary]
inflow = "periodic"
outflow = "periodic"
[pulse]
kind = "acoustic"
center = 0.0
width = 1.0
amplitude = 0.0
[time]
dt = {dt}
n_steps = {steps}
"#
    );
    let cfg = SimConfig::from_toml(&text)?;
    let wave = |t: f64| -> Vec<State> {
        let grid_len = n * 25;
        (0..grid_len)
            .map(|idx| {
                let x = (idx / 25) as f64 * h - speed * t;
                let s = (std::f64::consts::TAU * x).sin();
                [s, s, 0.0, 0.0, s]
            })
            .collect()
    };
    let run = || -> SimResult<f64> {
        let mut sim = Simulation::new(&cfg)?;
        sim.set_field(wave(0.0))?;
        for _ in 0..steps {
            sim.step()?;
        }
        let exact = wave(sim.time);
        Ok(sim.q.iter().zip(&exact).flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs())).fold(0.0, f64::max))
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| SimError::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Observed orders log2(e(n)/e(2n)) between successive grids.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Geometry of the reflection experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry {
    /// Identity mapping.
    Cartesian,
    /// Uniformly sheared mapping with ∂ξ/∂y = `xi_y`.
    Sheared { xi_y: f64 },
}

/// Parameters of one oblique reflection run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionSetup {
    pub geometry: Geometry,
    pub angle_deg: f64,
    pub mach: f64,
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub n_steps: usize,
}

impl Default for ReflectionSetup {
    fn default() -> Self {
        Self {
            geometry: Geometry::Cartesian,
            angle_deg: 30.0,
            mach: STANDARD_MACH,
            ni: 64,
            nj: 32,
            nk: 32,
            n_steps: 300,
        }
    }
}

impl ReflectionSetup {
    /// Configuration with `bc` on both ξ faces: a pressure pulse at rest in
    /// the middle of the domain splits into an upstream and a downstream
    /// wave meeting both faces at `angle_deg`. Probes sit `3ni/16` nodes
    /// inside each face; the reference extends `3ni/4` nodes at both ends.
    pub fn config(&self, bc: FaceBc) -> SimResult<SimConfig> {
        let mapping = match self.geometry {
            Geometry::Cartesian => "mapping = \"identity\"".to_string(),
            Geometry::Sheared { xi_y } => format!("mapping = \"sheared\"\nparams = {{ xi_y = {xi_y} }}"),
        };
        let (ni, nj, nk) = (self.ni, self.nj, self.nk);
        let probe = ni * 3 / 16;
        let text = format!(
            r#"
[grid]
ni = {ni}
nj = {nj}
nk = {nk}
{mapping}
[flow]
u = {mach}
[boundary]
inflow = "{bc}"
outflow = "{bc}"
[pulse]
kind = "acoustic"
direction = "both"
center = {center}
width = {width}
amplitude = 1e-3
angle_deg = {angle}
[time]
dt = 0.4
n_steps = {steps}
[probes]
planes = [{probe}, {probe2}]
[reflection]
face = "both"
probes = [{probe}, {probe2}]
extension = {ext}
"#,
            mach = self.mach,
            bc = bc.as_str(),
            center = (ni - 1) as f64 / 2.0,
            width = ni as f64 / 10.0,
            angle = self.angle_deg,
            steps = self.n_steps,
            probe2 = ni - 1 - probe,
            ext = ni * 3 / 4,
        );
        SimConfig::from_toml(&text)
    }

    /// Runs the shared reference once and every variant in `bcs` against it.
    pub fn compare(&self, bcs: &[FaceBc], threads: Option<usize>) -> SimResult<Vec<ReflectionReport>> {
        let base = self.config(bcs.first().copied().unwrap_or(FaceBc::FirstOrder))?;
        let r = base.reflection.clone().ok_or_else(|| SimError::Config("no [reflection] section".into()))?;
        let reference = run_config(&reference_config(&base, &r)?, threads)?;
        bcs.iter()
            .map(|&bc| {
                let cfg = self.config(bc)?;
                let test = run_config(&cfg, threads)?;
                report_from_runs(&cfg, &r, &test, &reference)
            })
            .collect()
    }
}

/// Hard-wall control: normal incidence on walls at both faces with the
/// fluid at rest, so the whole incident wave comes back.
pub fn hard_wall_setup() -> ReflectionSetup {
    ReflectionSetup { angle_deg: 0.0, mach: 0.0, ..ReflectionSetup::default() }
}
