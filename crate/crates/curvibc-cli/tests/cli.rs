use curvibc_cli::report::VerifyReport;
use curvibc_core::metrics::grid_file::{write_grid, StructuredGrid};
use curvibc_sim::config::FaceBc;
use curvibc_sim::experiments::{hard_wall_setup, ReflectionSetup};
use curvibc_sim::SimConfig;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = curvibc_cli::run(std::iter::once("curvibc").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn without_metadata(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("metadata");
    v
}

#[test]
fn eigen_suite_passes_with_five_records_per_sample() {
    let o = cli(&["verify", "--suite", "eigen", "--samples", "1000", "--seed", "42"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r: VerifyReport = serde_json::from_str(&o.stdout).unwrap();
    let s = &r.suites[0];
    assert_eq!((s.suite.as_str(), s.seed, s.samples), ("eigen", Some(42), 1000));
    let right = s.records.iter().filter(|r| r.quantity == "right_residual").count();
    assert_eq!(right, 5000);
    assert!(s.checks.iter().all(|c| c.passed));
}

#[test]
fn transform_suite_on_the_cartesian_metric_checks_exact_tables() {
    let o = cli(&["verify", "--suite", "transform", "--metric", "cartesian", "--samples", "50"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r: VerifyReport = serde_json::from_str(&o.stdout).unwrap();
    let s = &r.suites[0];
    assert_eq!(s.seed, None);
    let exact = s.check("cartesian_tables_exact").unwrap();
    assert!(exact.passed && exact.measured == 0.0);
}

#[test]
fn fixed_sheared_metric_passes_general_suites_and_fails_orthogonal_ones() {
    let o = cli(&["verify", "--mapping", "sheared", "--param", "xi_y=0.2", "--samples", "200"]);
    assert_eq!(o.code, 1);
    let r: VerifyReport = serde_json::from_str(&o.stdout).unwrap();
    let failed: Vec<&str> = r.suites.iter().filter(|s| !s.passed).map(|s| s.suite.as_str()).collect();
    assert_eq!(failed, ["wellposed", "modified"]);
    let w = r.suites.iter().find(|s| s.suite == "wellposed").unwrap();
    assert!(w.failures().contains(&"evaluation_failures"));
    let empty = w.check("outflow_min_over_scale").unwrap();
    assert!(empty.count == 0 && !empty.passed);
    let o = cli(&["verify", "--mapping", "stretched", "--param", "ax=0.3", "--point", "0.5,0,0", "--samples", "200"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn same_seed_gives_identical_json_apart_from_metadata() {
    let a = cli(&["verify", "--suite", "all", "--samples", "200", "--seed", "7"]);
    let b = cli(&["verify", "--suite", "all", "--samples", "200", "--seed", "7"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(without_metadata(&a.stdout), without_metadata(&b.stdout));
    let c = cli(&["verify", "--suite", "all", "--samples", "200", "--seed", "8"]);
    assert_ne!(without_metadata(&a.stdout), without_metadata(&c.stdout));
}

#[test]
fn usage_errors_exit_with_two() {
    let o = cli(&["verify", "--suite", "bogus", "--seed", "1"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("unknown suite `bogus`"), "{}", o.stderr);
    let o = cli(&["verify", "--suite", "eigen"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--seed is required"), "{}", o.stderr);
    assert_eq!(cli(&["verify", "--seed", "1", "--frobnicate"]).code, 2);
    assert_eq!(cli(&["verify", "--seed", "1", "--tol", "no_such_check=1"]).code, 2);
    assert_eq!(cli(&["verify", "--seed", "1", "--tol", "broken"]).code, 2);
    assert_eq!(cli(&["analyze", "--u", "0.5"]).code, 2);
}

#[test]
fn tightened_tolerance_fails_with_one() {
    let o = cli(&[
        "verify",
        "--suite",
        "eigen",
        "--samples",
        "20",
        "--seed",
        "1",
        "--tol",
        "right_kernel_residual_rel=1e-30",
    ]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("FAIL (right_kernel_residual_rel)"), "{}", o.stderr);
    let r: VerifyReport = serde_json::from_str(&o.stdout).unwrap();
    assert!(!r.passed);
}

#[test]
fn csv_output_lists_checks_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out/transform.csv");
    let p = path.to_str().unwrap();
    let o = cli(&["verify", "--suite", "transform", "--samples", "10", "--seed", "3", "--format", "csv", "--out", p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,kind,name,sample,mode,value,rule,limit,passed,count\n"));
    assert!(text.contains("transform,check,projection_idempotence,"));
    assert_eq!(text.lines().filter(|l| l.contains(",record,tabulated_inverse_deviation,")).count(), 10);
}

#[test]
fn analyze_cartesian_normal_incidence() {
    let o =
        cli(&["analyze", "--metric", "cartesian", "--u", "0.5", "--l", "0", "--m", "0", "--omega", "1", "--modified"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let k: Vec<f64> = v["roots"]["k"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    for (a, b) in k.iter().zip([2.0, 2.0, 2.0, 2.0 / 3.0, -2.0]) {
        assert!((a - b).abs() < 1e-14, "{k:?}");
    }
    assert_eq!(v["roots"]["class"][3]["kind"], "acoustic_down");
    assert_eq!(v["roots"]["class"][3]["at_inflow"], "incoming");
    assert_eq!(v["modified"]["coefficients"]["m1"], -0.75);
    assert_eq!(v["modified"]["coefficients"]["m2"], -0.75);
    assert_eq!(v["modified"]["a2_magnitude"], 0.0);
    assert_eq!(v["eigenvectors"].as_array().unwrap().len(), 5);
    assert_eq!(v["operators"]["inflow_quasi3d"]["time_rows"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_sonic_flow_reports_the_error_name() {
    let o = cli(&["analyze", "--metric", "cartesian", "--u", "1.0"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("error[SonicDegenerate]"), "{}", o.stderr);
}

#[test]
fn analyze_accepts_lambda_and_mapping_sources() {
    let o = cli(&[
        "analyze",
        "--mapping",
        "cylindrical-sector",
        "--param",
        "r0=2",
        "--point",
        "0.5,1,0",
        "--u",
        "0.4",
        "--lambda",
        "0.1,-0.05",
        "--omega",
        "2",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!((v["input"]["l"].as_f64().unwrap() - 0.2).abs() < 1e-15);
    assert!((v["input"]["m"].as_f64().unwrap() + 0.1).abs() < 1e-15);
    assert_eq!(v["critical"]["inflow"]["rank"], 2);
}

#[test]
fn analyze_reads_a_grid_file_node() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.txt");
    let (ni, nj, nk) = (6, 6, 6);
    let mut coords = Vec::new();
    for i in 0..ni {
        for j in 0..nj {
            for k in 0..nk {
                let (x, y, z) = (i as f64, j as f64, k as f64);
                coords.push([x + 0.1 * y, y, z]);
            }
        }
    }
    let grid = StructuredGrid { ni, nj, nk, coords };
    write_grid(&grid, std::fs::File::create(&path).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let o = cli(&["analyze", "--grid-file", p, "--node", "2,3,3", "--u", "0.3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!((v["input"]["metric"]["xi_y"].as_f64().unwrap() + 0.1).abs() < 1e-12);
    assert_eq!(v["critical"]["skipped"], "NonOrthogonalGrid");
    assert_eq!(cli(&["analyze", "--grid-file", p, "--node", "9,0,0", "--u", "0.3"]).code, 2);
}

const SMALL: &str = r#"
[grid]
ni = 32
nj = 8
nk = 5
[flow]
u = 0.3
[boundary]
inflow = "quasi3d"
outflow = "quasi3d"
[pulse]
kind = "acoustic"
direction = "upstream"
center = 18.0
width = 3.0
amplitude = 1e-3
[time]
dt = 0.4
n_steps = 40
[probes]
planes = [8]
"#;

#[test]
fn simulate_writes_run_directories_and_report_tabulates_them() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.toml");
    std::fs::write(&plain, SMALL).unwrap();
    let measured = dir.path().join("measured.toml");
    std::fs::write(&measured, format!("{SMALL}[reflection]\nface = \"inflow\"\nprobes = [8]\nextension = 24\n"))
        .unwrap();
    let run_a = dir.path().join("a");
    let run_b = dir.path().join("b");
    let o = cli(&["simulate", plain.to_str().unwrap(), "--out", run_a.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(run_a.join("probe_8.csv").exists() && run_a.join("summary.json").exists());
    let o = cli(&["simulate", measured.to_str().unwrap(), "--out", run_b.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("reflection ratio"));
    assert!(run_b.join("reference/summary.json").exists());

    let o = cli(&["report", run_a.to_str().unwrap(), run_b.join("summary.json").to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("run"));
    assert!(lines[1].starts_with("a ") && lines[1].ends_with('-'));
    assert!(lines[2].starts_with("b ") && !lines[2].ends_with('-'));
    let o = cli(&["report", "--format", "json", run_b.to_str().unwrap()]);
    let rows: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(rows[0]["reflection_ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn simulate_rejects_bad_configurations_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, SMALL.replace("[flow]", "[flow]\nmach = 2")).unwrap();
    let o = cli(&["simulate", bad.to_str().unwrap(), "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("error[Config]"), "{}", o.stderr);
    let o = cli(&["report", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.code, 2);
}

#[test]
fn shipped_configs_match_the_experiment_setups() {
    let load = |name: &str| SimConfig::load(&configs().join(name)).unwrap();
    assert_eq!(load("oblique-30.toml"), ReflectionSetup::default().config(FaceBc::Modified).unwrap());
    assert_eq!(load("hard-wall.toml"), hard_wall_setup().config(FaceBc::HardWall).unwrap());
    let normal = ReflectionSetup { angle_deg: 0.0, nj: 8, nk: 5, ..ReflectionSetup::default() };
    assert_eq!(load("normal-incidence.toml"), normal.config(FaceBc::FirstOrder).unwrap());
}

#[test]
fn binary_follows_the_exit_code_contract() {
    let bin = env!("CARGO_BIN_EXE_curvibc");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = run(&["verify", "--suite", "dispersion", "--samples", "20", "--seed", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "nope", "--seed", "1"]).status.code(), Some(2));
    let sonic = run(&["analyze", "--metric", "cartesian", "--u", "1"]);
    assert_eq!(sonic.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&sonic.stderr).contains("SonicDegenerate"));
}
