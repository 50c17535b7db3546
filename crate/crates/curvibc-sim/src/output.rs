//! Run artifacts: one CSV per probe plane and a JSON summary.
//!
//! Probe CSV columns are `t,rho,u,v,w,p`, each the RMS over the probe plane.
//! The summary is deterministic except for `metadata.timestamp`.

use crate::config::SimConfig;
use crate::error::SimResult;
use crate::reflection::ReflectionReport;
use crate::solver::RunOutput;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Non-deterministic run metadata, kept apart from the results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Seconds since the Unix epoch when the summary was written.
    pub timestamp: u64,
    pub version: String,
}

/// JSON summary of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_hash: String,
    pub steps: usize,
    pub final_time: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub probes: Vec<usize>,
    pub reflection: Option<ReflectionReport>,
    pub config: SimConfig,
    pub metadata: Metadata,
}

/// Probe history as CSV text.
pub fn probe_csv(out: &RunOutput, probe: usize) -> String {
    let mut s = String::from("t,rho,u,v,w,p\n");
    if let Some(p) = out.probes.iter().find(|p| p.plane == probe) {
        for (t, r) in out.times.iter().zip(&p.rms) {
            let _ = writeln!(s, "{t:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}", r[0], r[1], r[2], r[3], r[4]);
        }
    }
    s
}

/// Builds the summary for a finished run.
pub fn summary(cfg: &SimConfig, out: &RunOutput, reflection: Option<ReflectionReport>) -> Summary {
    let timestamp =
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Summary {
        config_hash: out.config_hash.clone(),
        steps: out.steps,
        final_time: out.final_time,
        energy_initial: out.energy.first().copied().unwrap_or(0.0),
        energy_final: out.energy.last().copied().unwrap_or(0.0),
        probes: out.probes.iter().map(|p| p.plane).collect(),
        reflection,
        config: cfg.clone(),
        metadata: Metadata { timestamp, version: env!("CARGO_PKG_VERSION").into() },
    }
}

/// Writes `probe_<plane>.csv` files and `summary.json` into `dir`.
pub fn write_run(
    dir: &Path,
    cfg: &SimConfig,
    out: &RunOutput,
    reflection: Option<ReflectionReport>,
) -> SimResult<Summary> {
    std::fs::create_dir_all(dir)?;
    for p in &out.probes {
        std::fs::write(dir.join(format!("probe_{}.csv", p.plane)), probe_csv(out, p.plane))?;
    }
    let s = summary(cfg, out, reflection);
    let json = serde_json::to_string_pretty(&s).map_err(|e| std::io::Error::other(e.to_string()))?;
    std::fs::write(dir.join("summary.json"), json + "\n")?;
    Ok(s)
}
