//! Execution of validated experiments.

use hypolab::spectral::{
    accretivity_floor_with, build_pencil, dense_pencil_max, maximal_constant_with, random_vector, resolvent_solve_with,
    AccretivityReport, EstimateOptions, EstimateReport, FieldSpec, HermiteFourierBasis, SolverOptions,
};
use hypolab::suites::{algebra_suite, rep_suite, SuiteResult};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Experiment, Kind};

pub const CSV_HEADER: &str = "d,Nv,Kx,field_id,lipsch_norm,lambda_max,residual,iterations,wall_ms";

/// Relative agreement required between the pencil solver and the dense oracle.
pub const ORACLE_TOL: f64 = 1e-6;
pub const RESOLVENT_TOL: f64 = 1e-10;
pub const ACCRETIVITY_TOL: f64 = 1e-10;

pub struct Outcome {
    pub passed: bool,
    pub results: Value,
    pub csv: Option<String>,
}

fn options(x: &Experiment, seed: u64) -> EstimateOptions {
    EstimateOptions {
        solver: SolverOptions { tol: x.raw.tol, max_iter: x.raw.max_iter, dense_limit: x.raw.dense_limit, seed },
        path: x.raw.path,
    }
}

fn basis(x: &Experiment, nv: usize) -> HermiteFourierBasis {
    HermiteFourierBasis::with_buffer(x.raw.d, nv, x.raw.kx, x.raw.buffer).expect("validated")
}

/// Cartesian product of fields and `Nv`, sorted by field id then `Nv`.
fn points(x: &Experiment) -> Vec<(String, FieldSpec, usize)> {
    let mut pts: Vec<_> = x
        .fields
        .iter()
        .flat_map(|(id, f)| x.nv.iter().map(move |&n| (id.clone(), f.clone(), n)))
        .collect();
    pts.sort_by(|a, b| (&a.0, a.2).cmp(&(&b.0, b.2)));
    pts
}

fn suite_outcome(results: Vec<SuiteResult>) -> Outcome {
    let passed = results.iter().all(|r| r.passed);
    Outcome { passed, results: json!({ "suites": results }), csv: None }
}

#[derive(Serialize)]
struct EstimatePoint {
    field_id: String,
    #[serde(rename = "Nv")]
    nv: usize,
    lipsch_norm: f64,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<EstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
struct OracleCheck {
    dense_lambda_max: f64,
    relative_difference: f64,
    passed: bool,
}

fn estimate_point(x: &Experiment, id: &str, field: &FieldSpec, nv: usize, with_oracle: bool) -> EstimatePoint {
    let b = basis(x, nv);
    let opts = options(x, x.seed);
    let mut point = EstimatePoint {
        field_id: id.to_string(),
        nv,
        lipsch_norm: field.lipschitz_norm(),
        converged: false,
        error: None,
        report: None,
        oracle: None,
    };
    match maximal_constant_with(&b, field, x.raw.form, &opts) {
        Ok(r) => {
            point.converged = r.residual <= x.raw.tol;
            if with_oracle {
                point.oracle = Some(match build_pencil(&b, field, x.raw.form, x.raw.path).and_then(|p| dense_pencil_max(&p.a, &p.b)) {
                    Ok(dense) => {
                        let rel = (r.lambda_max - dense).abs() / dense.abs();
                        OracleCheck { dense_lambda_max: dense, relative_difference: rel, passed: rel <= ORACLE_TOL }
                    }
                    Err(_) => OracleCheck { dense_lambda_max: f64::NAN, relative_difference: f64::NAN, passed: false },
                });
            }
            point.report = Some(r);
        }
        Err(e) => point.error = Some(e.to_string()),
    }
    point
}

fn csv_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn csv_table(d: usize, kx: usize, pts: &[EstimatePoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in pts {
        let (lambda, residual, iterations, wall) = match &p.report {
            Some(r) => (csv_number(r.lambda_max), format!("{:e}", r.residual), r.iterations.to_string(), format!("{:.3}", r.wall_ms)),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        out.push_str(&format!(
            "{d},{},{kx},{},{},{lambda},{residual},{iterations},{wall}\n",
            p.nv,
            p.field_id,
            csv_number(p.lipsch_norm)
        ));
    }
    out
}

fn estimate_outcome(x: &Experiment, oracle: bool) -> Outcome {
    let pts: Vec<EstimatePoint> = points(x)
        .par_iter()
        .map(|(id, f, nv)| estimate_point(x, id, f, *nv, oracle))
        .collect();
    let passed = pts.iter().all(|p| p.converged && p.oracle.as_ref().map_or(true, |o| o.passed));
    let csv = csv_table(x.raw.d, x.raw.kx, &pts);
    Outcome { passed, results: json!({ "points": pts }), csv: Some(csv) }
}

#[derive(Serialize)]
struct ResolventSummary {
    lambda_shift: f64,
    count: usize,
    max_residual: f64,
    max_iterations: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct AccretivityPoint {
    field_id: String,
    #[serde(rename = "Nv")]
    nv: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    errors: Vec<String>,
    unshifted: Option<AccretivityReport>,
    shifted: Option<AccretivityReport>,
    resolvent: ResolventSummary,
}

fn accretivity_point(x: &Experiment, id: &str, field: &FieldSpec, nv: usize) -> AccretivityPoint {
    let b = basis(x, nv);
    let opts = options(x, x.seed);
    let shift = x.lambda_shift;
    let mut errors = Vec::new();
    let mut floor = |s: f64| match accretivity_floor_with(&b, field, s, &opts) {
        Ok(r) => Some(r),
        Err(e) => {
            errors.push(format!("floor at λ = {s}: {e}"));
            None
        }
    };
    let unshifted = floor(0.0);
    let shifted = floor(shift);
    let mut resolvent =
        ResolventSummary { lambda_shift: shift, count: x.raw.resolvent_rhs, max_residual: 0.0, max_iterations: 0, failures: vec![] };
    for k in 0..x.raw.resolvent_rhs {
        let rhs = random_vector(b.dim(), x.seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
        match resolvent_solve_with(&b, field, shift, &rhs, &opts) {
            Ok(s) => {
                resolvent.max_residual = resolvent.max_residual.max(s.residual);
                resolvent.max_iterations = resolvent.max_iterations.max(s.iterations);
            }
            Err(e) => resolvent.failures.push(format!("rhs {k}: {e}")),
        }
    }
    let passed = errors.is_empty()
        && unshifted.as_ref().is_some_and(|r| r.floor >= -ACCRETIVITY_TOL)
        && shifted.as_ref().is_some_and(|r| (r.floor - shift).abs() <= ACCRETIVITY_TOL)
        && resolvent.failures.is_empty()
        && resolvent.max_residual <= RESOLVENT_TOL;
    AccretivityPoint { field_id: id.into(), nv, passed, errors, unshifted, shifted, resolvent }
}

fn accretivity_outcome(x: &Experiment) -> Outcome {
    let pts: Vec<AccretivityPoint> =
        points(x).par_iter().map(|(id, f, nv)| accretivity_point(x, id, f, *nv)).collect();
    Outcome { passed: pts.iter().all(|p| p.passed), results: json!({ "points": pts }), csv: None }
}

pub fn run(x: &Experiment) -> Result<Outcome, String> {
    let d = x.raw.d;
    Ok(match x.kind {
        Kind::AlgebraSuite => {
            suite_outcome(vec![algebra_suite(d, &x.b_values, x.raw.samples, x.seed).map_err(|e| e.to_string())?])
        }
        Kind::RepSuite => suite_outcome(vec![rep_suite(d, &x.b_values).map_err(|e| e.to_string())?]),
        Kind::Estimate => estimate_outcome(x, x.raw.oracle),
        Kind::Sweep => estimate_outcome(x, false),
        Kind::Accretivity => accretivity_outcome(x),
    })
}

/// Removes every `wall_ms` entry so that reports can be compared across runs.
pub fn strip_timing(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter().filter(|(k, _)| k.as_str() != "wall_ms").map(|(k, v)| (k.clone(), strip_timing(v))).collect(),
        ),
        Value::Array(a) => Value::Array(a.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}
