//! Experiment configuration: one JSON document per run.

use std::fmt;
use std::path::{Path, PathBuf};

use hypolab::exact::{parse_q, Q};
use hypolab::spectral::{D3Path, EstimateForm, FieldDoc, FieldSpec, HermiteFourierBasis};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    AlgebraSuite,
    RepSuite,
    Estimate,
    Sweep,
    Accretivity,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::AlgebraSuite => "algebra-suite",
            Self::RepSuite => "rep-suite",
            Self::Estimate => "estimate",
            Self::Sweep => "sweep",
            Self::Accretivity => "accretivity",
        }
    }

    fn spectral(&self) -> bool {
        matches!(self, Self::Estimate | Self::Sweep | Self::Accretivity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<usize> {
        match self {
            Self::One(n) => vec![*n],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedField {
    pub id: String,
    pub field: FieldDoc,
}

pub const DEFAULT_NV: usize = 8;
pub const DEFAULT_KX: usize = 2;
pub const DEFAULT_BUFFER: usize = 2;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_DENSE_LIMIT: usize = 2_000;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_RESOLVENT_RHS: usize = 20;
pub const DEFAULT_B_VALUES: [&str; 5] = ["0", "1", "-3/2", "2/3", "5"];

fn default_nv() -> OneOrMany {
    OneOrMany::One(DEFAULT_NV)
}
fn default_kx() -> usize {
    DEFAULT_KX
}
fn default_buffer() -> usize {
    DEFAULT_BUFFER
}
fn default_form() -> EstimateForm {
    EstimateForm::Theorem
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}
fn default_dense_limit() -> usize {
    DEFAULT_DENSE_LIMIT
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_resolvent_rhs() -> usize {
    DEFAULT_RESOLVENT_RHS
}
fn default_b_values() -> Vec<String> {
    DEFAULT_B_VALUES.iter().map(|s| s.to_string()).collect()
}

/// Raw configuration document as written by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: Option<Kind>,
    pub d: usize,
    #[serde(default)]
    pub field: Option<FieldDoc>,
    #[serde(default)]
    pub fields: Option<Vec<NamedField>>,
    #[serde(rename = "Nv", default = "default_nv")]
    pub nv: OneOrMany,
    #[serde(rename = "Kx", default = "default_kx")]
    pub kx: usize,
    #[serde(default = "default_buffer")]
    pub buffer: usize,
    #[serde(default = "default_form")]
    pub form: EstimateForm,
    #[serde(default)]
    pub path: D3Path,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_dense_limit")]
    pub dense_limit: usize,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default = "default_b_values")]
    pub b_values: Vec<String>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Shift for the accretivity run; defaults to `d/2 + 1`.
    #[serde(default)]
    pub lambda_shift: Option<f64>,
    #[serde(default = "default_resolvent_rhs")]
    pub resolvent_rhs: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error in field \"{}\"", self.field)?;
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Validated configuration with resolved defaults.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub kind: Kind,
    pub raw: ExperimentConfig,
    pub fields: Vec<(String, FieldSpec)>,
    pub nv: Vec<usize>,
    pub b_values: Vec<Q>,
    pub lambda_shift: f64,
    pub seed: u64,
}

/// Line of the first `"key":` occurrence, for diagnostics.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| {
        l.find(&needle)
            .map(|i| l[i + needle.len()..].trim_start().starts_with(':'))
            .unwrap_or(false)
    })
    .map(|i| i + 1)
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." {
            inner
                .to_string()
                .split('`')
                .nth(1)
                .map(str::to_string)
                .unwrap_or_else(|| "<document>".into())
        } else {
            path
        };
        let key = field.split(['.', '[']).next().unwrap_or_default();
        let line = key_line(text, key).or(Some(inner.line()));
        ConfigError { field, line, message: inner.to_string() }
    })
}

pub fn load(path: &Path) -> Result<(String, ExperimentConfig), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        field: "<file>".into(),
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let cfg = parse(&text)?;
    Ok((text, cfg))
}

impl ExperimentConfig {
    /// Checks ranges and builds fields; `text` is the source document, used only
    /// to point at offending lines.
    pub fn validate(self, kind: Kind, seed_override: Option<u64>, text: &str) -> Result<Experiment, ConfigError> {
        let err = |field: &str, message: String| ConfigError { field: field.into(), line: key_line(text, field), message };
        if let Some(k) = self.kind {
            if k != kind {
                return Err(err("kind", format!("document is for {} but {} was requested", k.name(), kind.name())));
            }
        }
        if !(2..=3).contains(&self.d) {
            return Err(err("d", format!("expected 2 or 3, got {}", self.d)));
        }
        let nv = self.nv.values();
        if nv.is_empty() {
            return Err(err("Nv", "at least one value is required".into()));
        }
        if let Some(&bad) = nv.iter().find(|&&n| n < 4) {
            return Err(err("Nv", format!("values must be ≥ 4, got {bad}")));
        }
        if self.buffer < 2 {
            return Err(err("buffer", format!("must be ≥ 2, got {}", self.buffer)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(err("tol", format!("must lie in (0, 1), got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(err("max_iter", "must be positive".into()));
        }
        for &n in &nv {
            HermiteFourierBasis::with_buffer(self.d, n, self.kx, self.buffer).map_err(|e| err("Nv", e.to_string()))?;
        }
        let b_values = self
            .b_values
            .iter()
            .map(|s| parse_q(s).map_err(|e| err("b_values", format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let lambda_shift = self.lambda_shift.unwrap_or(self.d as f64 / 2.0 + 1.0);
        if !(lambda_shift.is_finite() && lambda_shift >= 0.0) {
            return Err(err("lambda_shift", format!("must be finite and ≥ 0, got {lambda_shift}")));
        }
        let mut fields = Vec::new();
        match (&self.field, &self.fields) {
            (Some(_), Some(_)) => return Err(err("fields", "give either \"field\" or \"fields\", not both".into())),
            (Some(doc), None) => {
                let f = FieldSpec::from_doc(self.d, doc).map_err(|e| err("field", e.to_string()))?;
                fields.push(("field".to_string(), f));
            }
            (None, Some(list)) => {
                if list.is_empty() {
                    return Err(err("fields", "list is empty".into()));
                }
                for nf in list {
                    let f = FieldSpec::from_doc(self.d, &nf.field)
                        .map_err(|e| err("fields", format!("field {:?}: {e}", nf.id)))?;
                    if fields.iter().any(|(id, _)| id == &nf.id) {
                        return Err(err("fields", format!("duplicate id {:?}", nf.id)));
                    }
                    fields.push((nf.id.clone(), f));
                }
            }
            (None, None) if kind.spectral() => return Err(err("field", "a field is required for this kind".into())),
            (None, None) => {}
        }
        for (id, f) in &fields {
            if f.bandwidth() > self.kx {
                return Err(err(
                    "Kx",
                    format!("field {id:?} has Fourier bandwidth {} > Kx = {}", f.bandwidth(), self.kx),
                ));
            }
        }
        let seed = seed_override.or(self.seed).unwrap_or(0);
        Ok(Experiment { kind, nv, b_values, lambda_shift, seed, fields, raw: self })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_dimension_names_d() {
        let text = "{\n  \"d\": 4,\n  \"field\": {\"constant\": [1.0]}\n}";
        let e = parse(text).unwrap().validate(Kind::Estimate, None, text).unwrap_err();
        assert_eq!(e.field, "d");
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn type_errors_carry_path_and_line() {
        let text = "{\n  \"d\": 2,\n  \"Nv\": [8, \"x\"]\n}";
        let e = parse(text).unwrap_err();
        assert_eq!(e.field, "Nv");
        assert_eq!(e.line, Some(3));
        let e = parse("{\"d\": 2, \"bogus\": 1}").unwrap_err();
        assert_eq!(e.field, "bogus");
    }

    #[test]
    fn defaults_and_seed_override() {
        let text = r#"{"d": 2, "field": {"constant": [1.0]}, "seed": 5}"#;
        let x = parse(text).unwrap().validate(Kind::Estimate, Some(9), text).unwrap();
        assert_eq!(x.nv, vec![DEFAULT_NV]);
        assert_eq!(x.seed, 9);
        assert_eq!(x.lambda_shift, 2.0);
        assert_eq!(x.b_values.len(), 5);
    }

    #[test]
    fn rejects_out_of_range_values() {
        for (text, field) in [
            (r#"{"d": 2, "field": {"constant": [1.0]}, "Nv": [3]}"#, "Nv"),
            (r#"{"d": 2, "field": {"constant": [1.0, 2.0]}}"#, "field"),
            (r#"{"d": 2}"#, "field"),
            (r#"{"d": 2, "field": {"trig": {"mean": [1.0], "terms": [{"mode": [3, 0], "cos": [1.0]}]}}}"#, "Kx"),
            (r#"{"d": 2, "kind": "sweep", "field": {"constant": [1.0]}}"#, "kind"),
            (r#"{"d": 2, "b_values": ["1/0"]}"#, "b_values"),
        ] {
            let e = parse(text).unwrap().validate(Kind::Estimate, None, text).unwrap_err();
            assert_eq!(e.field, field, "{text}: {e}");
        }
    }
}
