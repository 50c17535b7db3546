//! Argument parsing and the four subcommands.
//!
//! Exit codes: 0 when everything passes, 1 for a failed check or a domain
//! error (the typed error name is printed), 2 for usage and configuration
//! errors.

use crate::analyze::{analyze, PointInput};
use crate::error::{CliError, CliResult};
use crate::report::{Limit, Metadata, VerifyReport};
use crate::suites::{run_suite, SuiteOptions, SUITES};
use clap::{Args, Parser, Subcommand, ValueEnum};
use curvibc_core::metrics::grid_file::{metrics_from_grid, read_grid_file};
use curvibc_core::metrics::mapping::Mapping;
use curvibc_core::{MeanFlow, Metric};
use curvibc_sim::output::{write_run, Summary};
use curvibc_sim::reflection::reference_config;
use curvibc_sim::{run_config, run_reflection, SimConfig};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Nonreflecting boundary conditions in curvilinear coordinates:
/// verification suites, pointwise analysis and simulation runs.
#[derive(Debug, Parser)]
#[command(name = "curvibc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run invariant suites over seeded samples or a fixed metric.
    Verify(VerifyArgs),
    /// Analyze one metric, mean flow and (l, m, omega).
    Analyze(AnalyzeArgs),
    /// Run a simulation configuration and write its run directory.
    Simulate(SimulateArgs),
    /// Tabulate the summaries of several run directories.
    Report(ReportArgs),
}

/// Where a single metric comes from.
#[derive(Clone, Debug, Default, Args)]
pub struct MetricArgs {
    /// `cartesian` or nine comma-separated components
    /// xi_x,xi_y,xi_z,eta_x,eta_y,eta_z,zeta_x,zeta_y,zeta_z.
    #[arg(long, conflicts_with_all = ["mapping", "grid_file"])]
    pub metric: Option<String>,
    /// Analytic mapping: identity, stretched, sheared or cylindrical-sector.
    #[arg(long, conflicts_with = "grid_file")]
    pub mapping: Option<String>,
    /// Mapping parameter (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE", requires = "mapping")]
    pub params: Vec<String>,
    /// Computational point at which the mapping metric is taken.
    #[arg(long, value_name = "S1,S2,S3", requires = "mapping")]
    pub point: Option<String>,
    /// Structured-grid file.
    #[arg(long)]
    pub grid_file: Option<PathBuf>,
    /// Grid node at which the file metric is taken.
    #[arg(long, value_name = "I,J,K", requires = "grid_file")]
    pub node: Option<String>,
}

/// Output format of `verify` and `report`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `verify` arguments.
#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed of the random sample set (required unless a metric is fixed).
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub source: MetricArgs,
    /// Tolerance override for a named check (repeatable).
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    pub tolerances: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `analyze` arguments.
#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: MetricArgs,
    /// Nondimensional mean velocity components.
    #[arg(long, allow_hyphen_values = true)]
    pub u: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub v: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w: f64,
    /// Tangential wavenumbers.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub l: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub m: f64,
    /// Frequency.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
    /// (lambda1, lambda2) = (l, m)/omega instead of l and m.
    #[arg(long, value_name = "L1,L2", allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Add the modified-condition coefficients and locus ranks.
    #[arg(long)]
    pub modified: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `simulate` arguments.
#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    /// TOML configuration file.
    pub config: PathBuf,
    /// Run directory to create.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: CURVIBC_THREADS, else all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// `report` arguments.
#[derive(Clone, Debug, Args)]
pub struct ReportArgs {
    /// Run directories or summary.json files.
    #[arg(required = true)]
    pub runs: Vec<PathBuf>,
    /// `csv` for a CSV table; `json` for the collected rows.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_numbers(text: &str, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("{what}: {e}")))?;
    if v.len() != n {
        return Err(CliError::Usage(format!("{what}: expected {n} comma-separated numbers, got {}", v.len())));
    }
    Ok(v)
}

fn parse_key_value(text: &str, what: &str) -> CliResult<(String, f64)> {
    let (k, v) =
        text.split_once('=').ok_or_else(|| CliError::Usage(format!("{what}: expected KEY=VALUE, got `{text}`")))?;
    let v = v.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("{what} `{k}`: {e}")))?;
    Ok((k.trim().to_string(), v))
}

impl MetricArgs {
    /// The metric selected by the flags, if any.
    pub fn resolve(&self) -> CliResult<Option<Metric<f64>>> {
        if let Some(text) = &self.metric {
            if text.trim().eq_ignore_ascii_case("cartesian") {
                return Ok(Some(Metric::cartesian()));
            }
            let c = parse_numbers(text, 9, "--metric")?;
            return Ok(Some(Metric::new([c[0], c[1], c[2]], [c[3], c[4], c[5]], [c[6], c[7], c[8]])?));
        }
        if let Some(name) = &self.mapping {
            let params =
                self.params.iter().map(|p| parse_key_value(p, "--param")).collect::<CliResult<BTreeMap<_, _>>>()?;
            let s = match &self.point {
                Some(p) => parse_numbers(p, 3, "--point")?,
                None => vec![0.0; 3],
            };
            let mapping = Mapping::<f64>::from_name(name, &params)?;
            let m = mapping.metric_at([s[0], s[1], s[2]]).ok_or(curvibc_core::Error::SingularMapping {
                i: 0,
                j: 0,
                k: 0,
            })?;
            m.validate()?;
            return Ok(Some(m));
        }
        if let Some(path) = &self.grid_file {
            let node = match &self.node {
                Some(n) => parse_numbers(n, 3, "--node")?,
                None => vec![0.0; 3],
            };
            let idx: Vec<usize> = node
                .iter()
                .map(|&v| if v >= 0.0 && v.fract() == 0.0 { Ok(v as usize) } else { Err(()) })
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage("--node: expected three non-negative integers".into()))?;
            let field = metrics_from_grid(&read_grid_file::<f64>(path)?)?;
            let g = field.grid;
            if idx[0] >= g.ni || idx[1] >= g.nj || idx[2] >= g.nk {
                return Err(CliError::Usage(format!("--node outside the {}x{}x{} grid", g.ni, g.nj, g.nk)));
            }
            return Ok(Some(*field.at(idx[0], idx[1], idx[2])));
        }
        Ok(None)
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn limit_fields(l: Limit) -> (&'static str, String) {
    match l {
        Limit::AtMost(v) => ("at_most", format!("{v:e}")),
        Limit::Above(v) => ("above", format!("{v:e}")),
        Limit::Exact(v) => ("exact", format!("{v:e}")),
        Limit::Range(lo, hi) => ("range", format!("{lo:e}..{hi:e}")),
    }
}

/// CSV rendering of a verification report: one row per check followed by
/// one row per record.
pub fn verify_csv(report: &VerifyReport) -> String {
    let mut s = String::from("suite,kind,name,sample,mode,value,rule,limit,passed,count\n");
    for r in &report.suites {
        for c in &r.checks {
            let (rule, limit) = limit_fields(c.limit);
            let _ =
                writeln!(s, "{},check,{},,,{:e},{rule},{limit},{},{}", r.suite, c.name, c.measured, c.passed, c.count);
        }
        for rec in &r.records {
            let mode = rec.mode.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},record,{},{},{mode},{:e},,,,", r.suite, rec.quantity, rec.sample, rec.value);
        }
    }
    s
}

/// Suite options from `verify` flags.
pub fn suite_options(a: &VerifyArgs) -> CliResult<SuiteOptions> {
    let metric = a.source.resolve()?;
    if metric.is_none() && a.seed.is_none() {
        return Err(CliError::Usage("--seed is required for randomized suites (or fix a metric)".into()));
    }
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let tolerances = a.tolerances.iter().map(|t| parse_key_value(t, "--tol")).collect::<CliResult<BTreeMap<_, _>>>()?;
    Ok(SuiteOptions { seed: a.seed, samples: a.samples, metric, tolerances })
}

/// Suites selected by a `--suite` value.
pub fn selected_suites(name: &str) -> CliResult<Vec<&'static str>> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| **s == name)
        .map(|s| vec![*s])
        .ok_or_else(|| CliError::Usage(format!("unknown suite `{name}`; expected one of {} or all", SUITES.join(", "))))
}

/// Runs the selected suites.
pub fn verify(opts: &SuiteOptions, suites: &[&str]) -> CliResult<VerifyReport> {
    let start = Instant::now();
    let reports: Vec<_> = suites.iter().filter_map(|s| run_suite(s, opts)).collect();
    for key in opts.tolerances.keys() {
        if !reports.iter().any(|r| r.check(key).is_some()) {
            return Err(CliError::Usage(format!("--tol: no check named `{key}` in the selected suites")));
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(VerifyReport { suites: reports, passed, metadata: Metadata::now(start.elapsed()) })
}

fn run_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let suites = selected_suites(&a.suite)?;
    let opts = suite_options(a)?;
    let report = verify(&opts, &suites)?;
    for r in &report.suites {
        let verdict = if r.passed { "PASS".to_string() } else { format!("FAIL ({})", r.failures().join(", ")) };
        writeln!(stderr, "{}: {verdict}", r.suite)?;
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => verify_csv(&report),
    };
    emit(&a.out, &text, stdout)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn run_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let metric = a
        .source
        .resolve()?
        .ok_or_else(|| CliError::Usage("a metric source is required (--metric, --mapping or --grid-file)".into()))?;
    let (l, m) = match &a.lambda {
        Some(t) => {
            let v = parse_numbers(t, 2, "--lambda")?;
            (v[0] * a.omega, v[1] * a.omega)
        }
        None => (a.l, a.m),
    };
    let input = PointInput {
        metric,
        flow: MeanFlow::nondimensional(a.u, a.v, a.w),
        l,
        m,
        omega: a.omega,
        modified: a.modified,
    };
    let report = analyze(&input)?;
    emit(&a.out, &(serde_json::to_string_pretty(&report)? + "\n"), stdout)?;
    Ok(0)
}

/// Runs a configuration and writes `out` (plus `out/reference` when the
/// configuration measures reflection).
pub fn simulate(config: &Path, out: &Path, threads: Option<usize>) -> CliResult<Summary> {
    let cfg = SimConfig::load(config)?;
    match &cfg.reflection {
        Some(r) => {
            let ref_cfg = reference_config(&cfg, r)?;
            let (test, reference, report) = run_reflection(&cfg, threads)?;
            write_run(&out.join("reference"), &ref_cfg, &reference, None)?;
            Ok(write_run(out, &cfg, &test, Some(report))?)
        }
        None => {
            let run = run_config(&cfg, threads)?;
            Ok(write_run(out, &cfg, &run, None)?)
        }
    }
}

fn run_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    if a.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let s = simulate(&a.config, &a.out, a.threads)?;
    writeln!(
        stdout,
        "{}: {} steps to t = {:.6}, energy {:.6e} -> {:.6e}",
        a.out.display(),
        s.steps,
        s.final_time,
        s.energy_initial,
        s.energy_final
    )?;
    if let Some(r) = &s.reflection {
        writeln!(
            stdout,
            "reflection ratio {:.6e} (incident {:.6e}, reflected {:.6e})",
            r.ratio, r.incident, r.reflected
        )?;
    }
    Ok(0)
}

/// One line of the `report` table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub run: String,
    pub inflow: String,
    pub outflow: String,
    pub grid: String,
    pub steps: usize,
    pub energy_ratio: f64,
    pub reflection_ratio: Option<f64>,
    pub config_hash: String,
}

/// Reads a run directory or summary file.
pub fn load_summary(path: &Path) -> CliResult<(String, Summary)> {
    let file = if path.is_dir() { path.join("summary.json") } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let summary: Summary =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let name = if path.is_dir() { path } else { path.parent().unwrap_or(path) };
    let name = name.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| name.display().to_string());
    Ok((name, summary))
}

/// Rows of the comparison table.
pub fn report_rows(runs: &[PathBuf]) -> CliResult<Vec<RunRow>> {
    runs.iter()
        .map(|p| {
            let (run, s) = load_summary(p)?;
            let g = &s.config.grid;
            Ok(RunRow {
                run,
                inflow: s.config.boundary.inflow.as_str().into(),
                outflow: s.config.boundary.outflow.as_str().into(),
                grid: format!("{}x{}x{}", g.ni, g.nj, g.nk),
                steps: s.steps,
                energy_ratio: s.energy_final / s.energy_initial,
                reflection_ratio: s.reflection.as_ref().map(|r| r.ratio),
                config_hash: s.config_hash,
            })
        })
        .collect()
}

/// Plain-text or CSV table of the rows.
pub fn render_rows(rows: &[RunRow], csv: bool) -> String {
    let head = ["run", "inflow", "outflow", "grid", "steps", "energy_ratio", "reflection_ratio"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.run.clone(),
                r.inflow.clone(),
                r.outflow.clone(),
                r.grid.clone(),
                r.steps.to_string(),
                format!("{:.6e}", r.energy_ratio),
                r.reflection_ratio.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let mut s = String::new();
    if csv {
        s += &(head.join(",") + "\n");
        for c in &cells {
            s += &(c.join(",") + "\n");
        }
        return s;
    }
    let width: Vec<usize> =
        (0..7).map(|i| cells.iter().map(|c| c[i].len()).chain([head[i].len()]).max().unwrap_or(0)).collect();
    let line = |c: &[&str]| {
        c.iter().zip(&width).map(|(t, w)| format!("{t:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
            + "\n"
    };
    s += &line(&head);
    for c in &cells {
        s += &line(&c.iter().map(String::as_str).collect::<Vec<_>>());
    }
    s
}

fn run_report(a: &ReportArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let rows = report_rows(&a.runs)?;
    let text = match a.format {
        Some(Format::Json) => serde_json::to_string_pretty(&rows)? + "\n",
        Some(Format::Csv) => render_rows(&rows, true),
        None => render_rows(&rows, false),
    };
    stdout.write_all(text.as_bytes())?;
    Ok(0)
}

/// Executes a parsed command line and returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Verify(a) => run_verify(a, stdout, stderr),
        Command::Analyze(a) => run_analyze(a, stdout),
        Command::Simulate(a) => run_simulate(a, stdout),
        Command::Report(a) => run_report(a, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Errors are printed to `stderr` as
/// `error[Name]: message`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.name());
            e.exit_code()
        }
    }
}
