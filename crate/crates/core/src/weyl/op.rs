use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{cq, cq_i, cq_int, cq_is_zero, format_q, parse_q, q_to_f64, DisplayCQ, CQ};

/// Scalar field for operator coefficients: exact complex rationals or `Complex64`.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_i64(n: i64) -> Self;
    fn imag_unit() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    /// `(re, im)` text: `p/q` rationals or Rust float literals.
    fn to_text(&self) -> (String, String);
    fn from_text(re: &str, im: &str) -> Result<Self>;

    fn one() -> Self {
        Self::from_i64(1)
    }
}

impl Coeff for CQ {
    fn zero() -> Self {
        cq_int(0)
    }
    fn from_i64(n: i64) -> Self {
        cq_int(n)
    }
    fn imag_unit() -> Self {
        cq_i()
    }
    fn is_zero(&self) -> bool {
        cq_is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    fn to_text(&self) -> (String, String) {
        (format_q(&self.re), format_q(&self.im))
    }
    fn from_text(re: &str, im: &str) -> Result<Self> {
        Ok(cq(parse_q(re)?, parse_q(im)?))
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn to_text(&self) -> (String, String) {
        (format!("{:?}", self.re), format!("{:?}", self.im))
    }
    fn from_text(re: &str, im: &str) -> Result<Self> {
        let p = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("invalid decimal coefficient {s:?}")))
        };
        Ok(Complex64::new(p(re)?, p(im)?))
    }
}

/// Exponents of one normal-ordered term `y^poly ∂^deriv`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub poly: Vec<u32>,
    pub deriv: Vec<u32>,
}

impl Monomial {
    pub fn constant(k: usize) -> Self {
        Self { poly: vec![0; k], deriv: vec![0; k] }
    }

    pub fn poly_degree(&self) -> u32 {
        self.poly.iter().sum()
    }

    pub fn deriv_order(&self) -> u32 {
        self.deriv.iter().sum()
    }
}

/// Differential operator with polynomial coefficients on `ℝ^k`, stored in normal
/// order `Σ c · y^α ∂^β` (coefficients to the left of derivatives).
///
/// Zero coefficients are never stored, so two operators are equal exactly when
/// their term maps are equal.
#[derive(Clone, PartialEq)]
pub struct PolyDiffOp<C: Coeff = CQ> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, C>,
}

/// Variables `v1..vd, x1..xd` of the phase-space models.
pub fn phase_space_vars(d: usize) -> Vec<String> {
    (1..=d).map(|k| format!("v{k}")).chain((1..=d).map(|k| format!("x{k}"))).collect()
}

impl<C: Coeff> PolyDiffOp<C> {
    pub fn zero(vars: Vec<String>) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn scalar(vars: Vec<String>, c: C) -> Self {
        let k = vars.len();
        let mut op = Self::zero(vars);
        op.add_term(Monomial::constant(k), c);
        op
    }

    pub fn identity(vars: Vec<String>) -> Self {
        Self::scalar(vars, C::one())
    }

    /// Multiplication by the coordinate `y_i`.
    pub fn coordinate(vars: Vec<String>, i: usize) -> Self {
        let mut m = Monomial::constant(vars.len());
        m.poly[i] = 1;
        Self::monomial(vars, m, C::one())
    }

    /// `∂_{y_i}`.
    pub fn derivative(vars: Vec<String>, i: usize) -> Self {
        let mut m = Monomial::constant(vars.len());
        m.deriv[i] = 1;
        Self::monomial(vars, m, C::one())
    }

    pub fn monomial(vars: Vec<String>, m: Monomial, c: C) -> Self {
        let mut op = Self::zero(vars);
        op.add_term(m, c);
        op
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        assert!(m.poly.len() == self.vars.len() && m.deriv.len() == self.vars.len(), "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// `Some(c)` when the operator is `c·id` (including zero).
    pub fn as_scalar(&self) -> Option<C> {
        let constant = Monomial::constant(self.vars.len());
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&constant).cloned(),
            _ => None,
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.vars.clone(), right: other.vars.clone() })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&C::from_i64(-1)))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(s));
        }
        out
    }

    /// Normal-ordered product `self ∘ other`.
    ///
    /// Uses `∂^β ∘ y^γ = Σ_{κ ≤ β, γ} C(β, κ) γ!/(γ−κ)! y^{γ−κ} ∂^{β−κ}` per variable.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let k = self.vars.len();
        let mut out = Self::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let base = ca.mul(cb);
                let mut kappa = vec![0u32; k];
                leibniz_terms(ma, mb, 0, &mut kappa, 1, &mut |kappa, weight| {
                    let poly = (0..k).map(|i| ma.poly[i] + mb.poly[i] - kappa[i]).collect();
                    let deriv = (0..k).map(|i| ma.deriv[i] - kappa[i] + mb.deriv[i]).collect();
                    out.add_term(Monomial { poly, deriv }, base.mul(&C::from_i64(weight)));
                });
            }
        }
        Ok(out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Formal adjoint for `⟨u, w⟩ = ∫ u·conj(w)`: `c y^β ∂^γ ↦ (−1)^{|γ|} ∂^γ ∘ conj(c) y^β`.
    pub fn formal_adjoint(&self) -> Self {
        let k = self.vars.len();
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let sign = if m.deriv_order() % 2 == 0 { 1 } else { -1 };
            let d = Self::monomial(
                self.vars.clone(),
                Monomial { poly: vec![0; k], deriv: m.deriv.clone() },
                C::from_i64(sign),
            );
            let p = Self::monomial(self.vars.clone(), Monomial { poly: m.poly.clone(), deriv: vec![0; k] }, c.conj());
            let term = d.compose(&p).expect("same variables");
            for (mm, cc) in term.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PolyDiffOp<D> {
        let mut out = PolyDiffOp::zero(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_c64(&self) -> PolyDiffOp<Complex64> {
        self.map_coeffs(C::to_c64)
    }

    /// Largest total order `|poly| + |deriv|` over the terms.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|m| m.poly_degree() + m.deriv_order()).max().unwrap_or(0)
    }

    /// Largest coefficient difference, over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_vars(other)?;
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max((c.to_c64() - other.coefficient(m).to_c64()).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.to_c64().norm());
            }
        }
        Ok(worst)
    }
}

impl PolyDiffOp<CQ> {
    /// `½(A + A*)`, the formally symmetric part.
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.formal_adjoint()).expect("same variables").scale(&crate::exact::cq_real(crate::exact::qf(1, 2)))
    }
}

impl PolyDiffOp<Complex64> {
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.formal_adjoint()).expect("same variables").scale(&Complex64::new(0.5, 0.0))
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64)
}

fn leibniz_terms(
    left: &Monomial,
    right: &Monomial,
    i: usize,
    kappa: &mut Vec<u32>,
    weight: i64,
    emit: &mut impl FnMut(&[u32], i64),
) {
    if i == kappa.len() {
        emit(kappa, weight);
        return;
    }
    let top = left.deriv[i].min(right.poly[i]);
    for k in 0..=top {
        kappa[i] = k;
        let w = binomial(left.deriv[i], k) * falling(right.poly[i], k);
        leibniz_terms(left, right, i + 1, kappa, weight * w, emit);
    }
    kappa[i] = 0;
}

impl<C: Coeff> fmt::Debug for PolyDiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyDiffOp[{}]({})", self.vars.join(","), self)
    }
}

impl<C: Coeff> fmt::Display for PolyDiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (re, im) = c.to_text();
            write!(f, "({re}{}{im}i)", if im.starts_with('-') { "" } else { "+" })?;
            for (name, &e) in self.vars.iter().zip(&m.poly) {
                match e {
                    0 => {}
                    1 => write!(f, "·{name}")?,
                    _ => write!(f, "·{name}^{e}")?,
                }
            }
            for (name, &e) in self.vars.iter().zip(&m.deriv) {
                match e {
                    0 => {}
                    1 => write!(f, "·∂{name}")?,
                    _ => write!(f, "·∂{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Readable form of an exact coefficient, for reports.
pub fn describe_cq(c: &CQ) -> String {
    DisplayCQ(c).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cq_real, qf};

    fn vars1() -> Vec<String> {
        vec!["v1".into(), "v2".into()]
    }

    type Op = PolyDiffOp<CQ>;

    #[test]
    fn leibniz_basic() {
        let d1 = Op::derivative(vars1(), 0);
        let v1 = Op::coordinate(vars1(), 0);
        let expected = v1.compose(&d1).unwrap().add(&Op::identity(vars1())).unwrap();
        assert_eq!(d1.compose(&v1).unwrap(), expected);
        let iv1 = v1.scale(&cq_i());
        let sq = iv1.compose(&iv1).unwrap();
        assert_eq!(sq, v1.compose(&v1).unwrap().scale(&cq_int(-1)));
    }

    #[test]
    fn second_order_leibniz() {
        // ∂² ∘ y² = y²∂² + 4y∂ + 2
        let v = vec!["y".to_string()];
        let d = Op::derivative(v.clone(), 0);
        let y = Op::coordinate(v.clone(), 0);
        let d2 = d.compose(&d).unwrap();
        let y2 = y.compose(&y).unwrap();
        let got = d2.compose(&y2).unwrap();
        let m = |p, q| Monomial { poly: vec![p], deriv: vec![q] };
        assert_eq!(got.coefficient(&m(2, 2)), cq_int(1));
        assert_eq!(got.coefficient(&m(1, 1)), cq_int(4));
        assert_eq!(got.coefficient(&m(0, 0)), cq_int(2));
        assert_eq!(got.terms().len(), 3);
    }

    #[test]
    fn commutators() {
        let d1 = Op::derivative(vars1(), 0);
        let d2 = Op::derivative(vars1(), 1);
        let iv1 = Op::coordinate(vars1(), 0).scale(&cq_i());
        assert_eq!(d1.commutator(&iv1).unwrap(), Op::scalar(vars1(), cq_i()));
        assert!(d1.commutator(&d2).unwrap().is_zero());
    }

    #[test]
    fn adjoints() {
        let d1 = Op::derivative(vars1(), 0);
        assert_eq!(d1.formal_adjoint(), d1.scale(&cq_int(-1)));
        let iv1 = Op::coordinate(vars1(), 0).scale(&cq_i());
        assert_eq!(iv1.formal_adjoint(), iv1.scale(&cq_int(-1)));
        // (v1 ∂1)* = −∂1 v1 = −v1∂1 − 1
        let e = Op::coordinate(vars1(), 0).compose(&d1).unwrap();
        let expected = e.scale(&cq_int(-1)).sub(&Op::identity(vars1())).unwrap();
        assert_eq!(e.formal_adjoint(), expected);
        assert_eq!(e.symmetric_part(), Op::scalar(vars1(), cq_real(qf(-1, 2))));
    }

    #[test]
    fn variable_mismatch() {
        let a = Op::identity(vars1());
        let b = Op::identity(vec!["v1".into()]);
        assert!(matches!(a.compose(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.commutator(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn float_text_round_trip() {
        let z = Complex64::new(0.1, -1.0 / 3.0);
        let (re, im) = z.to_text();
        assert_eq!(Complex64::from_text(&re, &im).unwrap(), z);
        assert!(Complex64::from_text("nan", "0").is_err());
    }
}
