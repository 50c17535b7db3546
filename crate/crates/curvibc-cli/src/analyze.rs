//! Pointwise analysis: k-roots and their classification, eigenvectors,
//! boundary operators and critical-matrix findings for one metric, mean
//! flow and (l, m, ω), plus the modified-condition coefficients on request.

use crate::error::CliResult;
use curvibc_core::bc_first_order::Side;
use curvibc_core::bc_modified::{build_modified, compute_m, locus_ranks, LocusRanks, ModCoefficients};
use curvibc_core::bc_quasi3d::{build_first_order_operator, build_quasi3d, BcOperator, BcOptions};
use curvibc_core::dispersion::{roots_k, LambdaPair, RootSet};
use curvibc_core::eigenvectors::{mode, Branch, Mode};
use curvibc_core::metrics::{contravariant, is_orthogonal};
use curvibc_core::wellposedness::{
    detect_illposed_inflow, moving_frame, outflow_wellposed_check, IllPosedFinding, OutflowVerdict,
};
use curvibc_core::{ContravariantFlow, Cx, Error, MeanFlow, Metric};
use serde::{Deserialize, Serialize};

/// Side of the (l, m) sweep used for the outflow verdict.
pub const OUTFLOW_SWEEP: usize = 50;

/// One analysis point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointInput {
    pub metric: Metric<f64>,
    /// Nondimensional mean flow.
    pub flow: MeanFlow<f64>,
    pub l: f64,
    pub m: f64,
    pub omega: f64,
    /// Adds the modified-condition coefficients and locus ranks.
    pub modified: bool,
}

/// First-order and quasi-3D operators of both faces (primitive basis).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Operators {
    pub inflow_first_order: BcOperator<f64>,
    pub outflow_first_order: BcOperator<f64>,
    pub inflow_quasi3d: BcOperator<f64>,
    pub outflow_quasi3d: BcOperator<f64>,
}

/// Critical-matrix findings, evaluated in the moving frame (V̄ = W̄ = 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Critical {
    pub inflow: Option<IllPosedFinding<f64>>,
    pub outflow: Option<OutflowVerdict<f64>>,
    /// Error name when the analysis does not apply (e.g. a non-orthogonal grid).
    pub skipped: Option<String>,
}

/// Modified-condition findings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModifiedFindings {
    pub coefficients: ModCoefficients<f64>,
    pub a2_magnitude: f64,
    /// Ranks on the ill-posed locus (orthogonal grids with (l, m) ≠ 0).
    pub locus: Option<LocusRanks<f64>>,
    pub inflow_operator: BcOperator<f64>,
}

/// Full analysis output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub input: PointInput,
    pub contravariant: ContravariantFlow<f64>,
    pub lambda: LambdaPair<f64>,
    pub roots: RootSet<f64>,
    pub eigenvectors: Vec<Mode<f64>>,
    pub operators: Operators,
    pub critical: Critical,
    pub modified: Option<ModifiedFindings>,
}

fn critical(input: &PointInput) -> Critical {
    let (metric, l, m) = (&input.metric, input.l, input.m);
    if !is_orthogonal(metric) {
        return Critical { inflow: None, outflow: None, skipped: Some(Error::NonOrthogonalGrid.name().into()) };
    }
    let frame = match moving_frame(metric, &input.flow) {
        Ok(f) => f,
        Err(e) => return Critical { inflow: None, outflow: None, skipped: Some(e.name().into()) },
    };
    let inflow = detect_illposed_inflow(metric, &frame, l, m);
    let outflow = outflow_wellposed_check(metric, &frame, 1.0, OUTFLOW_SWEEP);
    let skipped = match (&inflow, &outflow) {
        (Err(e), _) | (_, Err(e)) => Some(e.name().to_string()),
        _ => None,
    };
    Critical { inflow: inflow.ok(), outflow: outflow.ok(), skipped }
}

fn modified(input: &PointInput) -> CliResult<ModifiedFindings> {
    let coefficients = compute_m(&input.metric, &input.flow)?;
    let locus = if is_orthogonal(&input.metric) && (input.l != 0.0 || input.m != 0.0) {
        moving_frame(&input.metric, &input.flow).and_then(|f| locus_ranks(&input.metric, &f, input.l, input.m)).ok()
    } else {
        None
    };
    Ok(ModifiedFindings {
        coefficients,
        a2_magnitude: coefficients.a2.abs(),
        locus,
        inflow_operator: build_modified(&input.metric, &input.flow, Side::Inflow, BcOptions::default())?,
    })
}

/// Runs the analysis. Domain errors of the root computation (sonic or
/// critical flow, invalid metric) propagate.
pub fn analyze(input: &PointInput) -> CliResult<AnalyzeReport> {
    if !(input.omega.is_finite() && input.omega != 0.0) {
        return Err(Error::InvalidArgument("omega must be finite and nonzero".into()).into());
    }
    let (metric, flow) = (&input.metric, &input.flow);
    let omega = Cx::new(input.omega, 0.0);
    let roots = roots_k(metric, flow, Cx::new(input.l, 0.0), Cx::new(input.m, 0.0), omega)?;
    let lambda = LambdaPair::real(input.l / input.omega, input.m / input.omega);
    let eigenvectors =
        (1..=5).map(|n| mode(n, metric, flow, &lambda, Branch::Frequency(omega))).collect::<Result<Vec<_>, _>>()?;
    let opts = BcOptions::default();
    let operators = Operators {
        inflow_first_order: build_first_order_operator(metric, flow, Side::Inflow, opts)?,
        outflow_first_order: build_first_order_operator(metric, flow, Side::Outflow, opts)?,
        inflow_quasi3d: build_quasi3d(metric, flow, Side::Inflow, opts)?,
        outflow_quasi3d: build_quasi3d(metric, flow, Side::Outflow, opts)?,
    };
    Ok(AnalyzeReport {
        input: *input,
        contravariant: contravariant(metric, flow),
        lambda,
        roots,
        eigenvectors,
        operators,
        critical: critical(input),
        modified: if input.modified { Some(modified(input)?) } else { None },
    })
}
