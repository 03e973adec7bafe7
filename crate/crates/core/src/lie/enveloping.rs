use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::{build_algebra, AlgebraElement, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::exact::{cq_i, cq_int, cq_is_zero, cq_real, qf, DisplayCQ, CQ, Q};

/// A word `Y^α = Y_{α_1} Y_{α_2} ... Y_{α_k}` as generator indices.
pub type Word = Vec<usize>;

/// Element of the enveloping algebra: a finite sum `Σ a_α Y^α` of noncommutative
/// words with exact complex-rational coefficients.
///
/// Words are kept exactly as written; no reordering modulo the bracket is done here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopingPolynomial {
    algebra: Arc<GradedLieAlgebra>,
    terms: BTreeMap<Word, CQ>,
}

impl EnvelopingPolynomial {
    pub fn zero(algebra: Arc<GradedLieAlgebra>) -> Self {
        Self { algebra, terms: BTreeMap::new() }
    }

    /// The unit (empty word).
    pub fn one(algebra: Arc<GradedLieAlgebra>) -> Self {
        Self::from_word(algebra, Vec::new(), cq_int(1))
    }

    pub fn from_word(algebra: Arc<GradedLieAlgebra>, word: Word, coeff: CQ) -> Self {
        let mut p = Self::zero(algebra);
        p.add_term(word, coeff);
        p
    }

    /// Word from generator names.
    pub fn word(algebra: &Arc<GradedLieAlgebra>, names: &[&str], coeff: CQ) -> Result<Self> {
        let w = names.iter().map(|n| algebra.index_of(n)).collect::<Result<Word>>()?;
        Ok(Self::from_word(algebra.clone(), w, coeff))
    }

    pub fn generator(algebra: &Arc<GradedLieAlgebra>, name: &str) -> Result<Self> {
        Self::word(algebra, &[name], cq_int(1))
    }

    /// Degree-one embedding of an algebra element.
    pub fn from_element(algebra: &Arc<GradedLieAlgebra>, x: &AlgebraElement) -> Result<Self> {
        if x.dim() != algebra.dim() {
            return Err(Error::Dimension(format!("element of dimension {} in algebra of dimension {}", x.dim(), algebra.dim())));
        }
        let mut p = Self::zero(algebra.clone());
        for (i, c) in x.coeffs.iter().enumerate() {
            p.add_term(vec![i], cq_real(c.clone()));
        }
        Ok(p)
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Word, CQ> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Word, coeff: CQ) {
        assert!(word.iter().all(|&g| g < self.algebra.dim()), "generator index out of range");
        if cq_is_zero(&coeff) {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_insert_with(|| cq_int(0));
        *slot += coeff;
        if cq_is_zero(slot) {
            self.terms.remove(&word);
        }
    }

    /// Coefficient of the word spelled by `names` (zero when absent).
    pub fn coefficient(&self, names: &[&str]) -> Result<CQ> {
        let w = names.iter().map(|n| self.algebra.index_of(n)).collect::<Result<Word>>()?;
        Ok(self.terms.get(&w).cloned().unwrap_or_else(|| cq_int(0)))
    }

    /// Weighted length `|α| = Σ deg(α_j)`.
    pub fn grading(&self, word: &[usize]) -> u32 {
        word.iter().map(|&g| self.algebra.degree(g)).sum()
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch("enveloping polynomials over different algebras".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&cq_int(-1)))
    }

    pub fn scale(&self, s: &CQ) -> Self {
        let mut out = Self::zero(self.algebra.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Noncommutative product (word concatenation).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = Self::zero(self.algebra.clone());
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// True when every word has grading exactly `m`.
    pub fn is_homogeneous(&self, m: u32) -> bool {
        self.terms.keys().all(|w| self.grading(w) == m)
    }

    /// Formal dilation `δ_t(P) = Σ a_α t^{|α|} Y^α`, grouped by the power of `t`.
    pub fn dilate(&self) -> FormalDilation {
        let mut by_power: BTreeMap<u32, EnvelopingPolynomial> = BTreeMap::new();
        for (w, c) in &self.terms {
            by_power
                .entry(self.grading(w))
                .or_insert_with(|| Self::zero(self.algebra.clone()))
                .add_term(w.clone(), c.clone());
        }
        FormalDilation { algebra: self.algebra.clone(), by_power }
    }

    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|&g| self.algebra.names()[g].as_str()).collect();
                let word = if word.is_empty() { "1".to_string() } else { word.join("·") };
                format!("({}) {}", DisplayCQ(c), word)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `δ_t(P)` with `t` kept formal: a polynomial in `t` with enveloping-algebra coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalDilation {
    algebra: Arc<GradedLieAlgebra>,
    by_power: BTreeMap<u32, EnvelopingPolynomial>,
}

impl FormalDilation {
    pub fn powers(&self) -> impl Iterator<Item = (u32, &EnvelopingPolynomial)> {
        self.by_power.iter().map(|(k, p)| (*k, p))
    }

    /// Returns `Some(P)` when the dilation equals `t^m · P`.
    pub fn as_monomial(&self, m: u32) -> Option<&EnvelopingPolynomial> {
        match self.by_power.len() {
            1 => self.by_power.get(&m),
            _ => None,
        }
    }

    /// Substitutes a concrete rational value for `t`.
    pub fn evaluate(&self, t: &Q) -> EnvelopingPolynomial {
        let mut out = EnvelopingPolynomial::zero(self.algebra.clone());
        for (&k, p) in &self.by_power {
            let s = cq_real(num_traits::pow(t.clone(), k as usize));
            for (w, c) in &p.terms {
                out.add_term(w.clone(), c * &s);
            }
        }
        out
    }
}

/// The dilation family `δ_t(e_a) = t^{deg a} e_a` for concrete rational `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilationAction {
    degrees: Vec<u32>,
}

impl DilationAction {
    pub fn new(algebra: &GradedLieAlgebra) -> Self {
        Self { degrees: algebra.degrees().to_vec() }
    }

    pub fn apply_element(&self, t: &Q, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: x
                .coeffs
                .iter()
                .zip(&self.degrees)
                .map(|(c, &k)| c * num_traits::pow(t.clone(), k as usize))
                .collect(),
        }
    }

    pub fn apply(&self, t: &Q, p: &EnvelopingPolynomial) -> EnvelopingPolynomial {
        let mut out = EnvelopingPolynomial::zero(p.algebra.clone());
        for (w, c) in &p.terms {
            let k: u32 = w.iter().map(|&g| self.degrees[g]).sum();
            out.add_term(w.clone(), c * cq_real(num_traits::pow(t.clone(), k as usize)));
        }
        out
    }
}

/// The degree-2 enveloping element whose image under the standard representation
/// is the constant-field operator
/// `v·∇_x - b(v_1∂_{v_2} - v_2∂_{v_1}) - Δ_v + v²/4 - d/2`:
///
/// `Y_1_2 - Σ_k [Yp_k² + ¼ Ypp_k² - (i/2)(Yp_k Ypp_k - Ypp_k Yp_k)] - i b (Yp_1 Ypp_2 - Yp_2 Ypp_1)`.
///
/// For `d = 3`, `b` is the field magnitude after rotating the field onto the third axis.
pub fn build_ktilde(b: &Q, d: usize) -> Result<EnvelopingPolynomial> {
    let g = Arc::new(build_algebra(d)?);
    build_ktilde_in(&g, b, d)
}

/// As [`build_ktilde`], over an existing shared copy of the standard algebra.
pub fn build_ktilde_in(g: &Arc<GradedLieAlgebra>, b: &Q, d: usize) -> Result<EnvelopingPolynomial> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if g.names() != super::algebra::standard_generator_names(d).as_slice() {
        return Err(Error::AlgebraMismatch(format!("algebra of dimension {} is not the d = {d} algebra", g.dim())));
    }
    let i = cq_i();
    let half_i = &i * cq_real(qf(1, 2));
    let mut p = EnvelopingPolynomial::generator(g, "Y_1_2")?;
    for k in 1..=d {
        let yp = format!("Yp_{k}_1");
        let ypp = format!("Ypp_{k}_1");
        p.add_term(word(g, &[&yp, &yp])?, cq_int(-1));
        p.add_term(word(g, &[&ypp, &ypp])?, cq_real(qf(-1, 4)));
        p.add_term(word(g, &[&yp, &ypp])?, half_i.clone());
        p.add_term(word(g, &[&ypp, &yp])?, -half_i.clone());
    }
    let ib = &i * cq_real(b.clone());
    p.add_term(word(g, &["Yp_1_1", "Ypp_2_1"])?, -ib.clone());
    p.add_term(word(g, &["Yp_2_1", "Ypp_1_1"])?, ib);
    Ok(p)
}

fn word(g: &GradedLieAlgebra, names: &[&str]) -> Result<Word> {
    names.iter().map(|n| g.index_of(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cq, q};
    use crate::lie::algebra::build_algebra_d2;

    fn alg() -> Arc<GradedLieAlgebra> {
        Arc::new(build_algebra_d2())
    }

    #[test]
    fn ktilde_coefficients() {
        let k = build_ktilde(&q(1), 2).unwrap();
        assert_eq!(k.coefficient(&["Y_1_2"]).unwrap(), cq_int(1));
        assert_eq!(k.coefficient(&["Yp_1_1", "Yp_1_1"]).unwrap(), cq_int(-1));
        assert_eq!(k.coefficient(&["Ypp_2_1", "Ypp_2_1"]).unwrap(), cq_real(qf(-1, 4)));
        assert_eq!(k.coefficient(&["Yp_1_1", "Ypp_2_1"]).unwrap(), cq(q(0), q(-1)));
        assert_eq!(k.coefficient(&["Yp_2_1", "Ypp_1_1"]).unwrap(), cq(q(0), q(1)));

        let k0 = build_ktilde(&q(0), 2).unwrap();
        assert_eq!(k0.coefficient(&["Yp_1_1", "Ypp_2_1"]).unwrap(), cq_int(0));
        assert_eq!(k0.terms().len(), 9);
    }

    #[test]
    fn ktilde_is_homogeneous_of_degree_two() {
        for b in [q(0), q(1), qf(-3, 2), qf(7, 5)] {
            for d in [2, 3] {
                let k = build_ktilde(&b, d).unwrap();
                assert!(k.is_homogeneous(2));
                assert_eq!(k.dilate().as_monomial(2), Some(&k));
            }
        }
        assert!(matches!(build_ktilde(&q(1), 4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn dilation_of_generator_and_identity() {
        let g = alg();
        let y = EnvelopingPolynomial::generator(&g, "Yp_1_1").unwrap();
        assert_eq!(y.dilate().as_monomial(1), Some(&y));
        let k = build_ktilde_in(&g, &qf(2, 3), 2).unwrap();
        assert_eq!(k.dilate().evaluate(&q(1)), k);
        assert_eq!(k.dilate().evaluate(&q(3)), k.scale(&cq_int(9)));
    }

    #[test]
    fn inhomogeneous_polynomial_splits_by_power() {
        let g = alg();
        let p = EnvelopingPolynomial::generator(&g, "Yp_1_1")
            .unwrap()
            .add(&EnvelopingPolynomial::generator(&g, "Y_1_3").unwrap())
            .unwrap();
        let dil = p.dilate();
        assert!(dil.as_monomial(1).is_none());
        assert_eq!(dil.powers().map(|(k, _)| k).collect::<Vec<_>>(), vec![1, 3]);
        assert!(!p.is_homogeneous(1));
    }

    #[test]
    fn dilation_group_law_on_elements() {
        let g = build_algebra_d2();
        let act = DilationAction::new(&g);
        let x = AlgebraElement { coeffs: (0..8).map(|i| qf(i as i64 - 3, 2)).collect() };
        let (t, s) = (qf(2, 3), qf(-5, 7));
        assert_eq!(act.apply_element(&t, &act.apply_element(&s, &x)), act.apply_element(&(&t * &s), &x));
        assert_eq!(act.apply_element(&q(1), &x), x);
        // dilations are algebra automorphisms
        let y = AlgebraElement::basis(8, 4);
        let lhs = act.apply_element(&t, &g.bracket(&x, &y).unwrap());
        let rhs = g.bracket(&act.apply_element(&t, &x), &act.apply_element(&t, &y)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_concatenate_words() {
        let g = alg();
        let a = EnvelopingPolynomial::generator(&g, "Yp_1_1").unwrap();
        let b = EnvelopingPolynomial::generator(&g, "Ypp_1_1").unwrap();
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_ne!(ab, ba);
        assert_eq!(ab.coefficient(&["Yp_1_1", "Ypp_1_1"]).unwrap(), cq_int(1));
        assert!(ab.sub(&ab).unwrap().is_zero());
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = EnvelopingPolynomial::one(alg());
        let b = EnvelopingPolynomial::one(Arc::new(crate::lie::algebra::build_algebra_d3()));
        assert!(matches!(a.add(&b), Err(Error::AlgebraMismatch(_))));
    }
}
