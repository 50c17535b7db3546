//! Reflection measurement. A run is compared with a reference run whose
//! domain extends `extension` nodes beyond each measured face, so the
//! reference carries the same incident waves but no reflection from those
//! faces within the recorded window. At every recorded step the pressure
//! over all probe planes is reduced to one RMS value. The reflected
//! amplitude is the largest RMS of the test-minus-reference pressure and
//! the incident amplitude is the largest RMS of the reference pressure.

use crate::config::{BoundaryConfig, Face, FaceBc, ReflectionConfig, SimConfig};
use crate::error::{SimError, SimResult};
use crate::solver::{build_metric_field, run_config, ProbeRecord, RunOutput};
use serde::{Deserialize, Serialize};

/// Measured reflection over a set of probe planes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub face: Face,
    pub boundary: BoundaryConfig,
    pub probes: Vec<usize>,
    pub incident: f64,
    pub reflected: f64,
    pub ratio: f64,
    pub test_hash: String,
    pub reference_hash: String,
}

/// Index shift of the test domain inside the reference domain.
fn offset(r: &ReflectionConfig) -> usize {
    if r.face.includes_inflow() {
        r.extension
    } else {
        0
    }
}

/// Reference configuration: each measured face moved `extension` nodes
/// outward (with a first-order closure), probes and pulse shifted so they
/// sit at the same physical positions.
pub fn reference_config(cfg: &SimConfig, r: &ReflectionConfig) -> SimResult<SimConfig> {
    if cfg.grid.grid_file.is_some() {
        return Err(SimError::Config("reflection reference needs an analytic mapping".into()));
    }
    let field = build_metric_field(cfg)?;
    if !field.metrics.windows(2).all(|w| w[0] == w[1]) {
        return Err(SimError::Config("reflection reference needs a uniform metric".into()));
    }
    let mut rc = cfg.clone();
    rc.reflection = None;
    if r.face.includes_inflow() {
        rc.grid.ni += r.extension;
        rc.boundary.inflow = FaceBc::FirstOrder;
    }
    if r.face.includes_outflow() {
        rc.grid.ni += r.extension;
        rc.boundary.outflow = FaceBc::FirstOrder;
    }
    let shift = offset(r);
    rc.pulse.center += shift as f64 * cfg.grid.spacing[0];
    let mut planes: Vec<usize> = cfg.probes.planes.iter().chain(&r.probes).map(|p| p + shift).collect();
    planes.sort_unstable();
    planes.dedup();
    rc.probes.planes = planes;
    Ok(rc)
}

fn sum_squares(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Incident and reflected amplitudes from matching probe records, paired
/// plane by plane.
pub fn measure(test: &[&ProbeRecord], reference: &[&ProbeRecord]) -> SimResult<(f64, f64)> {
    if test.is_empty() || test.len() != reference.len() {
        return Err(SimError::NoSignal);
    }
    let n = test.iter().chain(reference).map(|p| p.pressure.len()).min().unwrap_or(0);
    let mut incident: f64 = 0.0;
    let mut reflected: f64 = 0.0;
    for t in 0..n {
        let (mut diff2, mut ref2, mut count) = (0.0, 0.0, 0usize);
        for (a, b) in test.iter().zip(reference) {
            let (pa, pb) = (&a.pressure[t], &b.pressure[t]);
            let diff: Vec<f64> = pa.iter().zip(pb).map(|(x, y)| x - y).collect();
            diff2 += sum_squares(&diff);
            ref2 += sum_squares(pb);
            count += pb.len();
        }
        reflected = reflected.max((diff2 / count as f64).sqrt());
        incident = incident.max((ref2 / count as f64).sqrt());
    }
    if !(incident > 0.0) {
        return Err(SimError::NoSignal);
    }
    Ok((incident, reflected))
}

/// Runs the configuration and its reference and measures the reflection at
/// the configured probes.
pub fn run_reflection(cfg: &SimConfig, threads: Option<usize>) -> SimResult<(RunOutput, RunOutput, ReflectionReport)> {
    let r = cfg.reflection.clone().ok_or_else(|| SimError::Config("no [reflection] section".into()))?;
    let mut test_cfg = cfg.clone();
    for &p in &r.probes {
        if !test_cfg.probes.planes.contains(&p) {
            test_cfg.probes.planes.push(p);
        }
    }
    let ref_cfg = reference_config(&test_cfg, &r)?;
    let test = run_config(&test_cfg, threads)?;
    let reference = run_config(&ref_cfg, threads)?;
    let report = report_from_runs(cfg, &r, &test, &reference)?;
    Ok((test, reference, report))
}

fn find(out: &RunOutput, plane: usize) -> Option<&ProbeRecord> {
    out.probes.iter().find(|p| p.plane == plane)
}

/// Builds the report from a finished test run and its reference run.
pub fn report_from_runs(
    cfg: &SimConfig,
    r: &ReflectionConfig,
    test: &RunOutput,
    reference: &RunOutput,
) -> SimResult<ReflectionReport> {
    let shift = offset(r);
    let mut tp = Vec::new();
    let mut rp = Vec::new();
    for &p in &r.probes {
        match (find(test, p), find(reference, p + shift)) {
            (Some(a), Some(b)) => {
                tp.push(a);
                rp.push(b);
            }
            _ => return Err(SimError::NoSignal),
        }
    }
    let (incident, reflected) = measure(&tp, &rp)?;
    Ok(ReflectionReport {
        face: r.face,
        boundary: cfg.boundary,
        probes: r.probes.clone(),
        incident,
        reflected,
        ratio: reflected / incident,
        test_hash: test.config_hash.clone(),
        reference_hash: reference.config_hash.clone(),
    })
}
