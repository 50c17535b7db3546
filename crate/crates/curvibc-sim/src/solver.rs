//! Explicit solver for Qₜ + ÃQ_ξ + B̃Q_η + C̃Q_ζ = 0 on a structured grid:
//! classical four-stage Runge–Kutta in time, fourth-order central
//! differences in space, periodic η and ζ, boundary closures at the ξ faces
//! and an eighth-order low-pass filter after every step.
//!
//! Work is split over i-slabs with rayon. Every node is computed from the
//! previous stage only and every reduction is summed in slab order, so the
//! results are bit-identical for any worker count.

use crate::boundary::FaceClosure;
use crate::config::{FaceBc, SimConfig};
use crate::error::{SimError, SimResult};
use crate::pulse::initial_field;
use crate::scheme::{axpy, filter_halfwidth, filter_weights, State, CENTRAL4, EDGE0, EDGE1};
use curvibc_core::bc_first_order::Side;
use curvibc_core::matrices::build_curvilinear;
use curvibc_core::metrics::grid_file::{metrics_from_grid, read_grid_file};
use curvibc_core::metrics::mapping::{analytic_mapping, ComputationalGrid, MetricField};
use curvibc_core::{MeanFlow, Metric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Norm growth factor that aborts a run.
pub const INSTABILITY_GROWTH: f64 = 1e6;

type Flux = [[[f64; 5]; 5]; 3];

/// Time history of one probe plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    /// ξ index of the plane.
    pub plane: usize,
    /// Plane RMS of (ρ′, u′, v′, w′, p′) at every recorded time.
    pub rms: Vec<State>,
    /// Pressure over the plane (row-major in j, k) at every recorded time.
    #[serde(skip)]
    pub pressure: Vec<Vec<f64>>,
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    /// SHA-256 of the canonical TOML form of the configuration.
    pub config_hash: String,
    pub steps: usize,
    pub final_time: f64,
    /// Recorded times (initial state plus every step).
    pub times: Vec<f64>,
    /// ½Σ(p′² + |u′|² + (ρ′ − p′)²) at every recorded time.
    pub energy: Vec<f64>,
    pub probes: Vec<ProbeRecord>,
    /// Final field, node-major with k fastest.
    #[serde(skip)]
    pub field: Vec<State>,
}

/// Hex SHA-256 of the configuration's canonical TOML.
pub fn config_hash(cfg: &SimConfig) -> String {
    let digest = Sha256::digest(cfg.to_toml().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Worker count from `CURVIBC_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("CURVIBC_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Builds the metric field described by the grid section.
pub fn build_metric_field(cfg: &SimConfig) -> SimResult<MetricField<f64>> {
    let g = &cfg.grid;
    if let Some(path) = &g.grid_file {
        let sg = read_grid_file::<f64>(path)?;
        if (sg.ni, sg.nj, sg.nk) != (g.ni, g.nj, g.nk) {
            return Err(SimError::Config(format!(
                "grid file has {}x{}x{} nodes, configuration says {}x{}x{}",
                sg.ni, sg.nj, sg.nk, g.ni, g.nj, g.nk
            )));
        }
        return Ok(metrics_from_grid(&sg)?);
    }
    let grid = ComputationalGrid { ni: g.ni, nj: g.nj, nk: g.nk, spacing: g.spacing };
    Ok(analytic_mapping(&g.mapping, &g.params, &grid)?)
}

/// Solver state for one run.
pub struct Simulation {
    cfg: SimConfig,
    grid: ComputationalGrid<f64>,
    metrics: Vec<Metric<f64>>,
    flux: Vec<Flux>,
    faces: [Option<FaceClosure>; 2],
    periodic_xi: bool,
    jn: Vec<[usize; 4]>,
    kn: Vec<[usize; 4]>,
    inv_h: [f64; 3],
    filters: Vec<Vec<f64>>,
    /// Current field.
    pub q: Vec<State>,
    /// Current time.
    pub time: f64,
    /// Completed steps.
    pub step_count: usize,
    norm0: f64,
}

fn wrap_neighbours(n: usize) -> Vec<[usize; 4]> {
    (0..n).map(|j| [(j + n - 2) % n, (j + n - 1) % n, (j + 1) % n, (j + 2) % n]).collect()
}

impl Simulation {
    /// Builds geometry, flux matrices, closures and the initial pulse.
    pub fn new(cfg: &SimConfig) -> SimResult<Self> {
        cfg.validate()?;
        let field = build_metric_field(cfg)?;
        let flow = MeanFlow::nondimensional(cfg.flow.u, cfg.flow.v, cfg.flow.w);
        let uniform = field.metrics.windows(2).all(|w| w[0] == w[1]);
        let metrics: Vec<Metric<f64>> = if uniform { vec![field.metrics[0]] } else { field.metrics.clone() };
        let flux = metrics
            .iter()
            .map(|m| {
                let [a, b, c] = build_curvilinear(m, &flow)?;
                Ok([a.m, b.m, c.m])
            })
            .collect::<curvibc_core::Result<Vec<Flux>>>()?;
        let grid = field.grid;
        let (nj, nk) = (grid.nj, grid.nk);
        let periodic_xi = cfg.boundary.inflow == FaceBc::Periodic;
        let face_metrics = |i: usize| -> Vec<Metric<f64>> {
            if uniform {
                vec![field.metrics[0]]
            } else {
                (0..nj * nk).map(|n| field.metrics[grid.index(i, n / nk, n % nk)]).collect()
            }
        };
        let mut faces = [None, None];
        if !periodic_xi {
            for (slot, (bc, side, i)) in
                [(cfg.boundary.inflow, Side::Inflow, 0), (cfg.boundary.outflow, Side::Outflow, grid.ni - 1)]
                    .into_iter()
                    .enumerate()
            {
                faces[slot] = Some(FaceClosure::new(bc, side, &face_metrics(i), nk, &flow, cfg.boundary.h44)?);
            }
        }
        let metric_at = |n: usize| if uniform { field.metrics[0] } else { field.metrics[n] };
        let q = initial_field(&cfg.pulse, &grid, metric_at);
        let mut sim = Self {
            cfg: cfg.clone(),
            grid,
            metrics,
            flux,
            faces,
            periodic_xi,
            jn: wrap_neighbours(nj),
            kn: wrap_neighbours(nk),
            inv_h: grid.spacing.map(|h| 1.0 / h),
            filters: (0..=4).map(|n| if n == 0 { Vec::new() } else { filter_weights(n) }).collect(),
            q,
            time: 0.0,
            step_count: 0,
            norm0: 0.0,
        };
        sim.norm0 = sim.norms().0;
        Ok(sim)
    }

    /// Replaces the field (e.g. with a manufactured solution).
    pub fn set_field(&mut self, q: Vec<State>) -> SimResult<()> {
        if q.len() != self.grid.len() {
            return Err(SimError::Config("field size does not match the grid".into()));
        }
        self.q = q;
        self.norm0 = self.norms().0;
        Ok(())
    }

    /// Grid description.
    pub fn grid(&self) -> &ComputationalGrid<f64> {
        &self.grid
    }

    /// Metric at node `n` (uniform grids share one entry).
    pub fn metric(&self, n: usize) -> &Metric<f64> {
        if self.metrics.len() == 1 {
            &self.metrics[0]
        } else {
            &self.metrics[n]
        }
    }

    /// CFL estimate for the configured time step.
    pub fn cfl(&self) -> f64 {
        self.metrics.iter().map(|m| self.cfg.cfl(&m.rows())).fold(0.0, f64::max)
    }

    #[inline]
    fn flux_at(&self, n: usize) -> &Flux {
        if self.flux.len() == 1 {
            &self.flux[0]
        } else {
            &self.flux[n]
        }
    }

    fn d_xi(&self, q: &[State], i: usize, j: usize, k: usize) -> State {
        let ni = self.grid.ni;
        let at = |ii: usize| &q[self.grid.index(ii, j, k)];
        let mut d = [0.0; 5];
        if self.periodic_xi || (2..ni - 2).contains(&i) {
            let idx = |o: isize| ((i as isize + o).rem_euclid(ni as isize)) as usize;
            for (t, o) in [(0usize, -2isize), (1, -1), (3, 1), (4, 2)] {
                axpy(&mut d, CENTRAL4[t], at(idx(o)));
            }
        } else if i == 0 {
            for (t, w) in EDGE0.iter().enumerate() {
                axpy(&mut d, *w, at(t));
            }
        } else if i == 1 {
            for (t, w) in EDGE1.iter().enumerate() {
                axpy(&mut d, *w, at(t));
            }
        } else if i == ni - 1 {
            for (t, w) in EDGE0.iter().enumerate() {
                axpy(&mut d, -*w, at(ni - 1 - t));
            }
        } else {
            for (t, w) in EDGE1.iter().enumerate() {
                axpy(&mut d, -*w, at(ni - 1 - t));
            }
        }
        d.map(|v| v * self.inv_h[0])
    }

    /// Right-hand side −(ÃQ_ξ + B̃Q_η + C̃Q_ζ) with boundary closures.
    pub fn rhs(&self, q: &[State], out: &mut [State]) {
        let (ni, nj, nk) = (self.grid.ni, self.grid.nj, self.grid.nk);
        let slab = nj * nk;
        out.par_chunks_mut(slab).enumerate().for_each(|(i, o)| {
            let face = match (i, &self.faces) {
                (0, [Some(f), _]) => Some(f),
                (x, [_, Some(f)]) if x == ni - 1 => Some(f),
                _ => None,
            };
            for j in 0..nj {
                for k in 0..nk {
                    let n = self.grid.index(i, j, k);
                    let dxi = self.d_xi(q, i, j, k);
                    let mut deta = [0.0; 5];
                    let mut dzeta = [0.0; 5];
                    let jn = self.jn[j];
                    let kn = self.kn[k];
                    for (t, &c) in [0usize, 1, 3, 4].iter().enumerate() {
                        axpy(&mut deta, CENTRAL4[c], &q[self.grid.index(i, jn[t], k)]);
                        axpy(&mut dzeta, CENTRAL4[c], &q[self.grid.index(i, j, kn[t])]);
                    }
                    let deta = deta.map(|v| v * self.inv_h[1]);
                    let dzeta = dzeta.map(|v| v * self.inv_h[2]);
                    let f = self.flux_at(n);
                    let mut r = [0.0; 5];
                    for (row, rv) in r.iter_mut().enumerate() {
                        let mut s = 0.0;
                        for c in 0..5 {
                            s += f[0][row][c] * dxi[c] + f[1][row][c] * deta[c] + f[2][row][c] * dzeta[c];
                        }
                        *rv = -s;
                    }
                    if let Some(fc) = face {
                        r = fc.node(j * nk + k).apply(&r, &deta, &dzeta);
                    }
                    o[j * nk + k] = r;
                }
            }
        });
    }

    fn filter(&self, q: &[State], out: &mut [State]) {
        let sigma = self.cfg.filter.sigma;
        let (ni, nj, nk) = (self.grid.ni, self.grid.nj, self.grid.nk);
        out.par_chunks_mut(nj * nk).enumerate().for_each(|(i, o)| {
            let hw_xi = if self.periodic_xi { 4 } else { filter_halfwidth(i, ni) };
            let w_xi = &self.filters[hw_xi];
            let w8 = &self.filters[4];
            for j in 0..nj {
                for k in 0..nk {
                    let n = self.grid.index(i, j, k);
                    let mut acc = [0.0; 5];
                    for (t, w) in w_xi.iter().enumerate() {
                        let ii = (i as isize + t as isize - hw_xi as isize).rem_euclid(ni as isize) as usize;
                        axpy(&mut acc, *w, &q[self.grid.index(ii, j, k)]);
                    }
                    for (t, w) in w8.iter().enumerate() {
                        let jj = (j + nj * 4 + t - 4) % nj;
                        let kk = (k + nk * 4 + t - 4) % nk;
                        axpy(&mut acc, *w, &q[self.grid.index(i, jj, k)]);
                        axpy(&mut acc, *w, &q[self.grid.index(i, j, kk)]);
                    }
                    let mut v = q[n];
                    axpy(&mut v, -sigma, &acc);
                    o[j * nk + k] = v;
                }
            }
        });
    }

    /// (‖q‖², energy) with a slab-ordered reduction.
    pub fn norms(&self) -> (f64, f64) {
        let slab = self.grid.nj * self.grid.nk;
        let parts: Vec<(f64, f64)> = self
            .q
            .par_chunks(slab)
            .map(|c| {
                c.iter().fold((0.0, 0.0), |(a, e), s| {
                    let sq: f64 = s.iter().map(|v| v * v).sum();
                    let en = 0.5 * (s[4] * s[4] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3] + (s[0] - s[4]).powi(2));
                    (a + sq, e + en)
                })
            })
            .collect();
        parts.iter().fold((0.0, 0.0), |(a, e), (x, y)| (a + x, e + y))
    }

    /// One RK4 step followed by the filter.
    pub fn step(&mut self) -> SimResult<()> {
        let dt = self.cfg.time.dt;
        let len = self.q.len();
        let mut k1 = vec![[0.0; 5]; len];
        let mut k2 = vec![[0.0; 5]; len];
        let mut k3 = vec![[0.0; 5]; len];
        let mut k4 = vec![[0.0; 5]; len];
        let mut tmp = vec![[0.0; 5]; len];
        let stage = |q: &[State], k: &[State], a: f64, tmp: &mut [State]| {
            tmp.par_iter_mut().zip(q.par_iter().zip(k.par_iter())).for_each(|(t, (x, d))| {
                for c in 0..5 {
                    t[c] = x[c] + a * d[c];
                }
            });
        };
        self.rhs(&self.q, &mut k1);
        stage(&self.q, &k1, 0.5 * dt, &mut tmp);
        self.rhs(&tmp, &mut k2);
        stage(&self.q, &k2, 0.5 * dt, &mut tmp);
        self.rhs(&tmp, &mut k3);
        stage(&self.q, &k3, dt, &mut tmp);
        self.rhs(&tmp, &mut k4);
        let w = dt / 6.0;
        self.q.par_iter_mut().enumerate().for_each(|(n, x)| {
            for c in 0..5 {
                x[c] += w * (k1[n][c] + 2.0 * k2[n][c] + 2.0 * k3[n][c] + k4[n][c]);
            }
        });
        if self.cfg.filter.enabled && self.cfg.filter.sigma > 0.0 {
            self.filter(&self.q, &mut tmp);
            std::mem::swap(&mut self.q, &mut tmp);
        }
        self.step_count += 1;
        self.time = self.step_count as f64 * dt;
        Ok(())
    }

    fn check(&self, norm: f64) -> SimResult<()> {
        if !norm.is_finite() {
            let n = self.q.iter().position(|s| s.iter().any(|v| !v.is_finite())).unwrap_or(0);
            let (nj, nk) = (self.grid.nj, self.grid.nk);
            return Err(SimError::NonFinite { step: self.step_count, i: n / (nj * nk), j: (n / nk) % nj, k: n % nk });
        }
        if self.norm0 > 0.0 && norm > self.norm0 * INSTABILITY_GROWTH * INSTABILITY_GROWTH {
            return Err(SimError::Instability { step: self.step_count, growth: (norm / self.norm0).sqrt() });
        }
        Ok(())
    }

    fn record(&self, probes: &mut [ProbeRecord]) {
        let (nj, nk) = (self.grid.nj, self.grid.nk);
        for p in probes.iter_mut() {
            let plane = &self.q[self.grid.index(p.plane, 0, 0)..self.grid.index(p.plane, 0, 0) + nj * nk];
            let mut rms = [0.0; 5];
            for s in plane {
                for c in 0..5 {
                    rms[c] += s[c] * s[c];
                }
            }
            p.rms.push(rms.map(|v| (v / plane.len() as f64).sqrt()));
            p.pressure.push(plane.iter().map(|s| s[4]).collect());
        }
    }

    /// Runs the configured number of steps, recording probes and energy.
    pub fn run(&mut self) -> SimResult<RunOutput> {
        let mut probes: Vec<ProbeRecord> = self
            .cfg
            .probes
            .planes
            .iter()
            .map(|&plane| ProbeRecord { plane, rms: Vec::new(), pressure: Vec::new() })
            .collect();
        let mut times = vec![self.time];
        let mut energy = vec![self.norms().1];
        self.record(&mut probes);
        for _ in 0..self.cfg.time.n_steps {
            self.step()?;
            let (norm, en) = self.norms();
            self.check(norm)?;
            times.push(self.time);
            energy.push(en);
            self.record(&mut probes);
        }
        Ok(RunOutput {
            config_hash: config_hash(&self.cfg),
            steps: self.step_count,
            final_time: self.time,
            times,
            energy,
            probes,
            field: self.q.clone(),
        })
    }
}

/// Runs a configuration on a pool of `threads` workers (`None`: the
/// `CURVIBC_THREADS` value, else rayon's default).
pub fn run_config(cfg: &SimConfig, threads: Option<usize>) -> SimResult<RunOutput> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads.or_else(threads_from_env) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| SimError::Config(format!("thread pool: {e}")))?;
    pool.install(|| Simulation::new(cfg)?.run())
}
