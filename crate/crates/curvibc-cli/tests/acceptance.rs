//! Acceptance suite. Runs the ten acceptance criteria at their stated
//! tolerances, prints one PASS/FAIL line per criterion and exits nonzero
//! when any criterion fails.
//!
//! Criteria 1 to 8 are evaluated by the verification suites on the seeded
//! sample set (seed 42, 1000 samples) with default tolerances. Criteria 9
//! and 10 run the simulator.

use curvibc_cli::report::SuiteReport;
use curvibc_cli::suites::{run_suite, SuiteOptions};
use curvibc_sim::config::FaceBc;
use curvibc_sim::experiments::{hard_wall_setup, observed_orders, refinement_error, Geometry, ReflectionSetup};
use curvibc_sim::{run_config, RunOutput, SimResult};
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 42;
const SAMPLES: usize = 1000;
const SIMULATION_BUDGET: Duration = Duration::from_secs(600);

/// A named criterion evaluated on demand.
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

/// Outcome of one criterion.
struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

/// Suite reports computed once and shared by criteria 1 to 8.
struct Suites {
    reports: BTreeMap<&'static str, SuiteReport>,
    dispersion_time: Duration,
}

impl Suites {
    fn run() -> Self {
        let opts = SuiteOptions { seed: Some(SEED), samples: SAMPLES, ..SuiteOptions::default() };
        let mut reports = BTreeMap::new();
        let mut dispersion_time = Duration::ZERO;
        for name in ["dispersion", "eigen", "transform", "quasi3d", "wellposed", "modified"] {
            let start = Instant::now();
            let report = run_suite(name, &opts).expect("known suite");
            if name == "dispersion" {
                dispersion_time = start.elapsed();
            }
            reports.insert(name, report);
        }
        Self { reports, dispersion_time }
    }

    /// Verdict over the named checks of one suite; every check must pass
    /// and cover at least `min_count` evaluations.
    fn checks(&self, suite: &str, names: &[&str], min_count: usize) -> Verdict {
        let report = &self.reports[suite];
        let mut passed = true;
        let mut parts = Vec::new();
        for name in names {
            match report.check(name) {
                Some(c) => {
                    passed &= c.passed && c.count >= min_count;
                    parts.push(format!("{suite}.{name}={:.3e} (n={})", c.measured, c.count));
                }
                None => {
                    passed = false;
                    parts.push(format!("{suite}.{name} missing"));
                }
            }
        }
        Verdict::new(passed, parts.join(", "))
    }
}

fn all(verdicts: Vec<Verdict>) -> Verdict {
    let passed = verdicts.iter().all(|v| v.passed);
    Verdict::new(passed, verdicts.into_iter().map(|v| v.detail).collect::<Vec<_>>().join("; "))
}

fn dispersion_oracle(s: &Suites) -> Verdict {
    let checks = s.checks("dispersion", &["roots_vs_pencil_rel", "evaluation_failures"], SAMPLES);
    let fast = s.dispersion_time < Duration::from_secs(10);
    Verdict::new(checks.passed && fast, format!("{}, runtime {:.2} s", checks.detail, s.dispersion_time.as_secs_f64()))
}

fn determinant_identity(s: &Suites) -> Verdict {
    s.checks("dispersion", &["factored_vs_lu_det_rel"], SAMPLES)
}

fn eigenvector_residuals(s: &Suites) -> Verdict {
    all(vec![
        s.checks(
            "eigen",
            &["right_kernel_residual_rel", "left_kernel_residual_rel", "biorthonormal_diagonal"],
            5 * SAMPLES,
        ),
        s.checks("eigen", &["biorthogonal_modes_1_4_5", "w2l_w3r_closed_form", "evaluation_failures"], SAMPLES),
    ])
}

fn cartesian_reductions(s: &Suites) -> Verdict {
    all(vec![
        s.checks("transform", &["cartesian_tables_exact"], 1),
        s.checks("quasi3d", &["cartesian_tables_exact"], 1),
        s.checks("modified", &["cartesian_m_exact"], 1),
    ])
}

fn taylor_coefficients(s: &Suites) -> Verdict {
    s.checks("quasi3d", &["taylor_vs_central_difference"], 5 * 100)
}

fn well_posedness(s: &Suites) -> Verdict {
    s.checks(
        "wellposed",
        &[
            "orthogonal_samples",
            "inflow_rank_not_2",
            "k3_k4_vs_inverse_u",
            "outflow_min_over_scale",
            "evaluation_failures",
        ],
        20,
    )
}

fn modified_algebra(s: &Suites) -> Verdict {
    all(vec![
        s.checks("modified", &["a1_a3_abs"], SAMPLES / 2),
        s.checks("modified", &["cartesian_m_exact"], 1),
        s.checks("modified", &["locus_rank_violations", "evaluation_failures"], 20),
    ])
}

fn absorption_order(s: &Suites) -> Verdict {
    s.checks("quasi3d", &["outflow_absorption_slope_dev"], SAMPLES / 2)
}

fn ratios(setup: &ReflectionSetup, bcs: &[FaceBc]) -> SimResult<Vec<f64>> {
    Ok(setup.compare(bcs, None)?.iter().map(|r| r.ratio).collect())
}

fn oblique_ordering(geometry: Geometry, label: &str) -> Verdict {
    let setup = ReflectionSetup { geometry, ..ReflectionSetup::default() };
    match ratios(&setup, &[FaceBc::Modified, FaceBc::Quasi3d, FaceBc::FirstOrder]) {
        Ok(r) => Verdict::new(
            r[0] <= r[1] && r[1] <= r[2],
            format!("{label} modified {:.4} <= quasi3d {:.4} <= first_order {:.4}", r[0], r[1], r[2]),
        ),
        Err(e) => Verdict::error(e),
    }
}

fn simulation_experiment() -> Verdict {
    let start = Instant::now();
    let mut verdicts = vec![
        oblique_ordering(Geometry::Cartesian, "cartesian"),
        oblique_ordering(Geometry::Sheared { xi_y: 0.2 }, "sheared"),
    ];
    let normal = ReflectionSetup { angle_deg: 0.0, nj: 8, nk: 5, ..ReflectionSetup::default() };
    verdicts.push(match ratios(&normal, &[FaceBc::FirstOrder]) {
        Ok(r) => Verdict::new(r[0] < 1e-3, format!("normal incidence first_order {:.2e}", r[0])),
        Err(e) => Verdict::error(e),
    });
    verdicts.push(match ratios(&hard_wall_setup(), &[FaceBc::HardWall]) {
        Ok(r) => Verdict::new((0.9..=1.1).contains(&r[0]), format!("hard wall {:.4}", r[0])),
        Err(e) => Verdict::error(e),
    });
    let elapsed = start.elapsed();
    verdicts.push(Verdict::new(elapsed < SIMULATION_BUDGET, format!("runtime {:.0} s", elapsed.as_secs_f64())));
    all(verdicts)
}

fn bits(o: &RunOutput) -> (Vec<u64>, Vec<u64>, String) {
    let field = o.field.iter().flat_map(|s| s.map(f64::to_bits)).collect();
    let energy = o.energy.iter().map(|e| e.to_bits()).collect();
    (field, energy, serde_json::to_string(o).expect("run output serializes"))
}

fn interior_scheme() -> Verdict {
    let errors: SimResult<Vec<f64>> = [16, 32, 64].into_iter().map(|n| refinement_error(n, None)).collect();
    let order = match errors {
        Ok(e) => {
            let orders = observed_orders(&e);
            let ok = orders.iter().all(|p| (p - 4.0).abs() <= 0.3);
            Verdict::new(
                ok,
                format!(
                    "errors {}, orders {orders:.3?}",
                    e.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
                ),
            )
        }
        Err(e) => Verdict::error(e),
    };
    let setup = ReflectionSetup { n_steps: 60, nj: 8, nk: 5, ..ReflectionSetup::default() };
    let determinism = match setup.config(FaceBc::Modified).and_then(|cfg| {
        [Some(1), Some(1), Some(2), Some(4)].into_iter().map(|t| run_config(&cfg, t)).collect::<SimResult<Vec<_>>>()
    }) {
        Ok(runs) => {
            let first = bits(&runs[0]);
            let same = runs.iter().all(|r| bits(r) == first);
            Verdict::new(same, format!("bit-identical over repeated runs and 1/2/4 workers: {same}"))
        }
        Err(e) => Verdict::error(e),
    };
    all(vec![order, determinism])
}

fn main() -> ExitCode {
    let suites = Suites::run();
    let criteria: [Criterion; 10] = [
        ("dispersion oracle", Box::new(|| dispersion_oracle(&suites))),
        ("determinant identity", Box::new(|| determinant_identity(&suites))),
        ("eigenvector residuals", Box::new(|| eigenvector_residuals(&suites))),
        ("Cartesian reductions", Box::new(|| cartesian_reductions(&suites))),
        ("Taylor coefficients", Box::new(|| taylor_coefficients(&suites))),
        ("well-posedness", Box::new(|| well_posedness(&suites))),
        ("modified-condition algebra", Box::new(|| modified_algebra(&suites))),
        ("modal absorption order", Box::new(|| absorption_order(&suites))),
        ("simulation experiment", Box::new(simulation_experiment)),
        ("interior scheme", Box::new(interior_scheme)),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let v = criterion();
        failed += usize::from(!v.passed);
        println!("criterion {:>2} {}: {} | {}", i + 1, if v.passed { "PASS" } else { "FAIL" }, name, v.detail);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
