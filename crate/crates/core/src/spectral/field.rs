use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const REALNESS_TOL: f64 = 1e-12;

/// One Fourier coefficient `ĉ_m` (one complex value per field component) of
/// `b(x) = Σ_m ĉ_m e^{2πi m·x}` on `𝕋^d = [0,1)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub mode: Vec<i64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// `cos`/`sin` amplitudes of one wave vector, `a·cos(2πm·x) + s·sin(2πm·x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub mode: Vec<i64>,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

/// Serialized field description: a constant vector, a real trigonometric sum, or
/// raw Fourier coefficients (which must satisfy `ĉ_{−m} = conj(ĉ_m)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDoc {
    Constant(Vec<f64>),
    Trig {
        mean: Vec<f64>,
        #[serde(default)]
        terms: Vec<TrigTerm>,
    },
    Fourier(Vec<FourierTerm>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldMode {
    Constant(Vec<f64>),
    /// Deduplicated coefficients, sorted by mode.
    Trig(Vec<(Vec<i64>, Vec<Complex64>)>),
}

/// Magnetic field on `𝕋^d` with `d(d−1)/2` components (a scalar for `d = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    d: usize,
    mode: FieldMode,
}

const MAX_MODE: u64 = 1_000;

pub fn component_count(d: usize) -> usize {
    d * (d - 1) / 2
}

impl FieldSpec {
    pub fn constant(d: usize, b: Vec<f64>) -> Result<Self> {
        check_d(d)?;
        if b.len() != component_count(d) {
            return Err(Error::InvalidField(format!("expected {} components, got {}", component_count(d), b.len())));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidField("non-finite component".into()));
        }
        Ok(Self { d, mode: FieldMode::Constant(b) })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::constant(d, vec![0.0; component_count(d)])
    }

    /// Raw coefficients; duplicates are summed and realness is validated.
    pub fn fourier(d: usize, terms: Vec<(Vec<i64>, Vec<Complex64>)>) -> Result<Self> {
        check_d(d)?;
        let k = component_count(d);
        let mut merged: std::collections::BTreeMap<Vec<i64>, Vec<Complex64>> = Default::default();
        for (m, c) in terms {
            if m.len() != d {
                return Err(Error::InvalidField(format!("mode {m:?} must have {d} entries")));
            }
            if m.iter().any(|x| x.unsigned_abs() > MAX_MODE) {
                return Err(Error::InvalidField(format!("mode {m:?} is out of range")));
            }
            if c.len() != k {
                return Err(Error::InvalidField(format!("mode {m:?}: expected {k} components, got {}", c.len())));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidField(format!("mode {m:?}: non-finite coefficient")));
            }
            let slot = merged.entry(m).or_insert_with(|| vec![Complex64::new(0.0, 0.0); k]);
            for (s, z) in slot.iter_mut().zip(c) {
                *s += z;
            }
        }
        for (m, c) in &merged {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            let zero = vec![Complex64::new(0.0, 0.0); k];
            let partner = merged.get(&neg).unwrap_or(&zero);
            for (comp, (a, b)) in c.iter().zip(partner).enumerate() {
                if (a - b.conj()).norm() > REALNESS_TOL {
                    return Err(Error::InvalidField(format!(
                        "not real: coefficient of mode {m:?} (component {comp}) is {a}, but mode {neg:?} has {b}"
                    )));
                }
            }
        }
        Ok(Self { d, mode: FieldMode::Trig(merged.into_iter().collect()) })
    }

    /// `mean + Σ (cos_m cos(2πm·x) + sin_m sin(2πm·x))`, real by construction.
    pub fn trig(d: usize, mean: Vec<f64>, terms: &[TrigTerm]) -> Result<Self> {
        check_d(d)?;
        let k = component_count(d);
        if mean.len() != k {
            return Err(Error::InvalidField(format!("mean: expected {k} components, got {}", mean.len())));
        }
        let mut coeffs = vec![(vec![0; d], mean.iter().map(|&x| Complex64::new(x, 0.0)).collect())];
        for t in terms {
            let cos = if t.cos.is_empty() { vec![0.0; k] } else { t.cos.clone() };
            let sin = if t.sin.is_empty() { vec![0.0; k] } else { t.sin.clone() };
            if cos.len() != k || sin.len() != k {
                return Err(Error::InvalidField(format!("mode {:?}: expected {k} components", t.mode)));
            }
            if t.mode.iter().any(|x| x.unsigned_abs() > MAX_MODE) {
                return Err(Error::InvalidField(format!("mode {:?} is out of range", t.mode)));
            }
            if t.mode.iter().all(|&x| x == 0) {
                return Err(Error::InvalidField("trig terms need a nonzero mode; use mean".into()));
            }
            // a cos θ + s sin θ = (a − is)/2 e^{iθ} + (a + is)/2 e^{−iθ}
            let plus = cos.iter().zip(&sin).map(|(&a, &s)| Complex64::new(a / 2.0, -s / 2.0)).collect::<Vec<_>>();
            let minus = plus.iter().map(|z| z.conj()).collect();
            coeffs.push((t.mode.clone(), plus));
            coeffs.push((t.mode.iter().map(|x| -x).collect(), minus));
        }
        Self::fourier(d, coeffs)
    }

    pub fn from_doc(d: usize, doc: &FieldDoc) -> Result<Self> {
        match doc {
            FieldDoc::Constant(b) => Self::constant(d, b.clone()),
            FieldDoc::Trig { mean, terms } => Self::trig(d, mean.clone(), terms),
            FieldDoc::Fourier(terms) => Self::fourier(
                d,
                terms
                    .iter()
                    .map(|t| {
                        if t.re.len() != t.im.len() {
                            return Err(Error::InvalidField(format!("mode {:?}: re and im lengths differ", t.mode)));
                        }
                        Ok((t.mode.clone(), t.re.iter().zip(&t.im).map(|(&r, &i)| Complex64::new(r, i)).collect()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    pub fn to_doc(&self) -> FieldDoc {
        match &self.mode {
            FieldMode::Constant(b) => FieldDoc::Constant(b.clone()),
            FieldMode::Trig(terms) => FieldDoc::Fourier(
                terms
                    .iter()
                    .map(|(m, c)| FourierTerm {
                        mode: m.clone(),
                        re: c.iter().map(|z| z.re).collect(),
                        im: c.iter().map(|z| z.im).collect(),
                    })
                    .collect(),
            ),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> &FieldMode {
        &self.mode
    }

    pub fn components(&self) -> usize {
        component_count(self.d)
    }

    /// Largest `|m|_∞` with a nonzero coefficient.
    pub fn bandwidth(&self) -> usize {
        match &self.mode {
            FieldMode::Constant(_) => 0,
            FieldMode::Trig(terms) => terms
                .iter()
                .filter(|(_, c)| c.iter().any(|z| z.norm() != 0.0))
                .map(|(m, _)| m.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0))
                .max()
                .unwrap_or(0),
        }
    }

    /// Fourier coefficients including the mean, as `(mode, per-component value)`.
    pub fn coefficients(&self) -> Vec<(Vec<i64>, Vec<Complex64>)> {
        match &self.mode {
            FieldMode::Constant(b) => vec![(vec![0; self.d], b.iter().map(|&x| Complex64::new(x, 0.0)).collect())],
            FieldMode::Trig(terms) => terms.clone(),
        }
    }

    /// The constant vector when the field has no nonzero mode.
    pub fn as_constant(&self) -> Option<Vec<f64>> {
        match &self.mode {
            FieldMode::Constant(b) => Some(b.clone()),
            FieldMode::Trig(_) => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.components()];
        for (m, c) in self.coefficients() {
            let phase = 2.0 * PI * m.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum::<f64>();
            let e = Complex64::from_polar(1.0, phase);
            for (o, z) in out.iter_mut().zip(&c) {
                *o += (z * e).re;
            }
        }
        out
    }

    /// Jacobian `∂b_c/∂x_j` as rows per component.
    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.d]; self.components()];
        for (m, c) in self.coefficients() {
            if m.iter().all(|&k| k == 0) {
                continue;
            }
            let phase = 2.0 * PI * m.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum::<f64>();
            let e = Complex64::from_polar(1.0, phase) * Complex64::new(0.0, 2.0 * PI);
            for (row, z) in out.iter_mut().zip(&c) {
                let v = (z * e).re;
                for (slot, &k) in row.iter_mut().zip(&m) {
                    *slot += v * k as f64;
                }
            }
        }
        out
    }

    /// `sup |b| + sup ‖Db‖` (Euclidean norm on values, spectral norm on the
    /// Jacobian). Constant fields give `|b|`; trigonometric fields are sampled on
    /// a uniform grid with 16 points per highest mode per dimension.
    pub fn lipschitz_norm(&self) -> f64 {
        if let FieldMode::Constant(b) = &self.mode {
            return b.iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        let n = 16 * self.bandwidth().max(1);
        let total = n.pow(self.d as u32);
        let (mut sup_b, mut sup_grad): (f64, f64) = (0.0, 0.0);
        for idx in 0..total {
            let mut x = vec![0.0; self.d];
            let mut r = idx;
            for xi in x.iter_mut().rev() {
                *xi = (r % n) as f64 / n as f64;
                r /= n;
            }
            let b = self.eval(&x);
            sup_b = sup_b.max(b.iter().map(|v| v * v).sum::<f64>().sqrt());
            let jac = self.jacobian(&x);
            let j = DMatrix::from_fn(jac.len(), self.d, |i, k| jac[i][k]);
            sup_grad = sup_grad.max(j.singular_values().max());
        }
        sup_b + sup_grad
    }

    /// Short canonical description for reports.
    pub fn describe(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }
}

fn check_d(d: usize) -> Result<()> {
    if (2..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}
