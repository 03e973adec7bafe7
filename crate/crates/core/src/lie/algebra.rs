use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_q, q, Q};
use crate::linalg_q::EchelonBasis;
use crate::report::CheckReport;

/// A graded nilpotent Lie algebra given on a basis of homogeneous generators.
///
/// Only the brackets `[e_a, e_b]` with `a < b` are stored; the opposite order is
/// obtained by antisymmetry, so the stored table is antisymmetric by construction.
/// Grading and the Jacobi identity are *not* enforced here, see
/// [`check_grading_stratified`] and [`check_jacobi`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    names: Vec<String>,
    degrees: Vec<u32>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, Q>>,
}

/// An element of a [`GradedLieAlgebra`], as exact coordinates on its basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coeffs: Vec<Q>,
}

impl AlgebraElement {
    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![Q::zero(); dim] }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[index] = Q::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }
}

impl GradedLieAlgebra {
    /// Builds an algebra from generator names, degrees and structure triples
    /// `(a, b, c, coeff)` meaning `[e_a, e_b] ∋ coeff·e_c`.
    ///
    /// A triple with `a > b` is stored as `(b, a, c, -coeff)`. Repeated triples for
    /// the same unordered pair and target are rejected, as is `a == b`.
    pub fn new(
        names: Vec<String>,
        degrees: Vec<u32>,
        triples: impl IntoIterator<Item = (usize, usize, usize, Q)>,
    ) -> Result<Self> {
        let n = names.len();
        if degrees.len() != n {
            return Err(Error::InvalidAlgebra(format!("{} names but {} degrees", n, degrees.len())));
        }
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || names[..i].contains(name) {
                return Err(Error::InvalidAlgebra(format!("empty or duplicate generator name {name:?}")));
            }
        }
        if let Some(pos) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidAlgebra(format!("generator {:?} has degree 0", names[pos])));
        }
        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for (a, b, c, coeff) in triples {
            if a >= n || b >= n || c >= n {
                return Err(Error::InvalidAlgebra(format!("structure index out of range in ({a}, {b}, {c})")));
            }
            if a == b {
                return Err(Error::InvalidAlgebra(format!("bracket of {:?} with itself must vanish", names[a])));
            }
            if coeff.is_zero() {
                continue;
            }
            let (key, coeff) = if a < b { ((a, b), coeff) } else { ((b, a), -coeff) };
            if brackets.entry(key).or_default().insert(c, coeff).is_some() {
                return Err(Error::InvalidAlgebra(format!(
                    "repeated structure constant for [{}, {}] -> {}",
                    names[key.0], names[key.1], names[c]
                )));
            }
        }
        Ok(Self { names, degrees, brackets })
    }

    /// Abelian algebra: every bracket vanishes.
    pub fn abelian(names: Vec<String>, degrees: Vec<u32>) -> Result<Self> {
        Self::new(names, degrees, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, index: usize) -> u32 {
        self.degrees[index]
    }

    pub fn rank(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Basis element by name.
    pub fn generator(&self, name: &str) -> Result<AlgebraElement> {
        Ok(AlgebraElement::basis(self.dim(), self.index_of(name)?))
    }

    /// Nonzero structure triples `(a, b, c, coeff)` with `a < b`, in canonical order.
    pub fn structure_triples(&self) -> impl Iterator<Item = (usize, usize, usize, &Q)> + '_ {
        self.brackets.iter().flat_map(|(&(a, b), row)| row.iter().map(move |(&c, v)| (a, b, c, v)))
    }

    /// `[e_a, e_b]` on basis elements.
    pub fn bracket_basis(&self, a: usize, b: usize) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.dim());
        if a == b {
            return out;
        }
        let (key, sign) = if a < b { ((a, b), Q::one()) } else { ((b, a), -Q::one()) };
        if let Some(row) = self.brackets.get(&key) {
            for (&c, v) in row {
                out.coeffs[c] = v * &sign;
            }
        }
        out
    }

    /// Structure constant `c_{ab}^c`.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> Q {
        self.bracket_basis(a, b).coeffs[c].clone()
    }

    /// Bilinear extension of the structure tensor.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let n = self.dim();
        if x.dim() != n || y.dim() != n {
            return Err(Error::Dimension(format!(
                "bracket of elements of dimension {} and {} in an algebra of dimension {n}",
                x.dim(),
                y.dim()
            )));
        }
        let mut out = AlgebraElement::zero(n);
        for (&(a, b), row) in &self.brackets {
            // [x, y] picks up x_a y_b - x_b y_a on the stored pair (a, b)
            let w = &x.coeffs[a] * &y.coeffs[b] - &x.coeffs[b] * &y.coeffs[a];
            if w.is_zero() {
                continue;
            }
            for (&c, v) in row {
                out.coeffs[c] += &w * v;
            }
        }
        Ok(out)
    }

    /// Human-readable form of an element, e.g. `Y_2_2 - 1/2 Y_1_3`.
    pub fn describe(&self, x: &AlgebraElement) -> String {
        let parts: Vec<String> = x
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.names[i].clone() } else { format!("({}) {}", format_q(c), self.names[i]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Returns a copy of the algebra with one extra structure triple (or a changed
    /// coefficient). Used to build deliberately broken tables.
    pub fn with_bracket(&self, a: usize, b: usize, c: usize, coeff: Q) -> Result<Self> {
        let mut triples: Vec<(usize, usize, usize, Q)> = self
            .structure_triples()
            .filter(|&(x, y, z, _)| !((x, y) == (a.min(b), a.max(b)) && z == c))
            .map(|(x, y, z, v)| (x, y, z, v.clone()))
            .collect();
        triples.push((a, b, c, coeff));
        Self::new(self.names.clone(), self.degrees.clone(), triples)
    }
}

/// Generator names of the standard algebras, in canonical order
/// (degree-major, then primes, then index).
pub fn standard_generator_names(d: usize) -> Vec<String> {
    let mut names = Vec::new();
    names.extend((1..=d).map(|k| format!("Yp_{k}_1")));
    names.extend((1..=d).map(|k| format!("Ypp_{k}_1")));
    names.push("Y_1_2".into());
    names.push("Y_2_2".into());
    names.extend((1..=d).map(|k| format!("Y_{k}_3")));
    names
}

fn build_standard_algebra(d: usize) -> GradedLieAlgebra {
    let names = standard_generator_names(d);
    let mut degrees = vec![1; 2 * d];
    degrees.extend([2, 2]);
    degrees.extend(std::iter::repeat_n(3, d));
    let yp = |k: usize| k;
    let ypp = |k: usize| d + k;
    let y12 = 2 * d;
    let y22 = 2 * d + 1;
    let y3 = |k: usize| 2 * d + 2 + k;
    let mut triples = Vec::new();
    for k in 0..d {
        // [∂_{v_k}, i v_k] = i
        triples.push((yp(k), ypp(k), y22, q(1)));
        // [∂_{v_k}, v·∇_x] = ∂_{x_k}
        triples.push((yp(k), y12, y3(k), q(1)));
    }
    GradedLieAlgebra::new(names, degrees, triples).expect("standard table is well formed")
}

/// The eight-dimensional rank-3 algebra underlying the two-dimensional model.
///
/// Nonzero brackets: `[Yp_k_1, Ypp_k_1] = Y_2_2` and `[Yp_k_1, Y_1_2] = Y_k_3`,
/// i.e. `[Y_1_2, Yp_k_1] = -Y_k_3` under `[A, B] = AB - BA`.
pub fn build_algebra_d2() -> GradedLieAlgebra {
    build_standard_algebra(2)
}

/// The eleven-dimensional three-dimensional analogue, same bracket pattern with
/// `k = 1..3`.
pub fn build_algebra_d3() -> GradedLieAlgebra {
    build_standard_algebra(3)
}

pub fn build_algebra(d: usize) -> Result<GradedLieAlgebra> {
    match d {
        2 => Ok(build_algebra_d2()),
        3 => Ok(build_algebra_d3()),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Exhaustive Jacobi check over all ordered basis triples.
pub fn check_jacobi(g: &GradedLieAlgebra) -> CheckReport {
    let n = g.dim();
    let mut report = CheckReport::new("jacobi");
    let basis: Vec<AlgebraElement> = (0..n).map(|i| AlgebraElement::basis(n, i)).collect();
    let br = |x: &AlgebraElement, y: &AlgebraElement| g.bracket(x, y).expect("same algebra");
    for a in 0..n {
        for b in 0..n {
            let ab = g.bracket_basis(a, b);
            for c in 0..n {
                report.examined += 1;
                let bc = g.bracket_basis(b, c);
                let ca = g.bracket_basis(c, a);
                let residual = br(&basis[a], &bc)
                    .add(&br(&basis[b], &ca))
                    .and_then(|s| s.add(&br(&basis[c], &ab)))
                    .expect("same dimension");
                if !residual.is_zero() {
                    report.violation(format!(
                        "({}, {}, {}): residual {}",
                        g.names[a],
                        g.names[b],
                        g.names[c],
                        g.describe(&residual)
                    ));
                }
            }
        }
    }
    report
}

/// Checks `[G_i, G_j] ⊆ G_{i+j}` and that the generators of degree at most
/// `stratification_type` generate the whole algebra under iterated brackets.
pub fn check_grading_stratified(g: &GradedLieAlgebra, stratification_type: u32) -> CheckReport {
    let n = g.dim();
    let mut report = CheckReport::new(format!("grading+stratified(type {stratification_type})"));
    for a in 0..n {
        for b in 0..n {
            report.examined += 1;
            let target = g.degrees[a] + g.degrees[b];
            for (c, v) in g.bracket_basis(a, b).coeffs.iter().enumerate() {
                if !v.is_zero() && g.degrees[c] != target {
                    report.violation(format!(
                        "[{}, {}] has a component on {} of degree {} (expected degree {target})",
                        g.names[a], g.names[b], g.names[c], g.degrees[c]
                    ));
                }
            }
        }
    }

    let gens: Vec<usize> = (0..n).filter(|&i| g.degrees[i] <= stratification_type).collect();
    let mut span = EchelonBasis::new(n);
    let mut layer: Vec<AlgebraElement> = Vec::new();
    for &i in &gens {
        let e = AlgebraElement::basis(n, i);
        if span.insert(&e.coeffs) {
            layer.push(e);
        }
    }
    // left-normed brackets [x_1, [x_2, ... [x_{k-1}, x_k]]] span the generated subalgebra
    while !layer.is_empty() && span.rank() < n {
        let mut next = Vec::new();
        for &i in &gens {
            let x = AlgebraElement::basis(n, i);
            for y in &layer {
                let z = g.bracket(&x, y).expect("same algebra");
                if span.insert(&z.coeffs) {
                    next.push(z);
                }
            }
        }
        layer = next;
    }
    if span.rank() < n {
        let missing: Vec<&str> = (0..n)
            .filter(|&i| !span.contains(&AlgebraElement::basis(n, i).coeffs))
            .map(|i| g.names[i].as_str())
            .collect();
        report.violation(format!(
            "degree <= {stratification_type} generators span a subalgebra of dimension {} < {n}; not reached: {}",
            span.rank(),
            missing.join(", ")
        ));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    fn idx(g: &GradedLieAlgebra, name: &str) -> usize {
        g.index_of(name).unwrap()
    }

    #[test]
    fn d2_shape() {
        let g = build_algebra_d2();
        assert_eq!(g.dim(), 8);
        assert_eq!(g.rank(), 3);
        assert_eq!(g.degrees(), &[1, 1, 1, 1, 2, 2, 3, 3]);
        assert_eq!(
            g.names(),
            &["Yp_1_1", "Yp_2_1", "Ypp_1_1", "Ypp_2_1", "Y_1_2", "Y_2_2", "Y_1_3", "Y_2_3"]
        );
    }

    #[test]
    fn d2_table_entries() {
        let g = build_algebra_d2();
        let y22 = g.generator("Y_2_2").unwrap();
        let br = |a: &str, b: &str| g.bracket(&g.generator(a).unwrap(), &g.generator(b).unwrap()).unwrap();
        assert_eq!(br("Yp_1_1", "Ypp_1_1"), y22);
        assert_eq!(br("Yp_2_1", "Ypp_2_1"), y22);
        assert!(br("Yp_1_1", "Yp_2_1").is_zero());
        assert!(br("Ypp_1_1", "Ypp_2_1").is_zero());
        assert!(br("Y_2_2", "Y_1_3").is_zero());
        assert!(br("Yp_1_1", "Y_2_3").is_zero());
        // sign fixed by the differential-operator realization
        assert_eq!(br("Y_1_2", "Yp_1_1"), g.generator("Y_1_3").unwrap().scale(&q(-1)));
        assert_eq!(g.structure_constant(idx(&g, "Yp_2_1"), idx(&g, "Y_1_2"), idx(&g, "Y_2_3")), q(1));
    }

    #[test]
    fn d3_shape() {
        let g = build_algebra_d3();
        assert_eq!(g.dim(), 11);
        assert_eq!(g.rank(), 3);
        for k in 1..=3 {
            let x = g.generator(&format!("Yp_{k}_1")).unwrap();
            let y = g.generator(&format!("Ypp_{k}_1")).unwrap();
            assert_eq!(g.bracket(&x, &y).unwrap(), g.generator("Y_2_2").unwrap());
        }
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = build_algebra_d2();
        let err = g.bracket(&AlgebraElement::zero(8), &AlgebraElement::zero(11)).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn jacobi_passes_on_standard_tables() {
        assert!(check_jacobi(&build_algebra_d2()).passed());
        assert!(check_jacobi(&build_algebra_d3()).passed());
    }

    #[test]
    fn jacobi_abelian() {
        let g = GradedLieAlgebra::abelian(vec!["a".into(), "b".into(), "c".into()], vec![1, 1, 2]).unwrap();
        assert!(check_jacobi(&g).passed());
    }

    #[test]
    fn jacobi_detects_spurious_degree_one_bracket() {
        // [Ypp_1_1, Ypp_2_1] = Y_1_2 breaks the identity on (Yp_1_1, Ypp_1_1, Ypp_2_1)
        let g = build_algebra_d2();
        let bad = g
            .with_bracket(idx(&g, "Ypp_1_1"), idx(&g, "Ypp_2_1"), idx(&g, "Y_1_2"), q(1))
            .unwrap();
        let report = check_jacobi(&bad);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.starts_with("(Yp_1_1, Ypp_1_1, Ypp_2_1)")), "{:?}", report.violations);
    }

    #[test]
    fn spurious_bracket_into_top_degree_is_jacobi_consistent() {
        // every triple bracket through [Ypp_1_1, Y_1_2] lands in degree 4, so this table
        // is still a Lie algebra (just not the one realized by the standard fields)
        let g = build_algebra_d2();
        let odd = g
            .with_bracket(idx(&g, "Ypp_1_1"), idx(&g, "Y_1_2"), idx(&g, "Y_1_3"), q(1))
            .unwrap();
        assert!(check_jacobi(&odd).passed());
    }

    #[test]
    fn stratification() {
        let g = build_algebra_d2();
        assert!(check_grading_stratified(&g, 2).passed());
        let t1 = check_grading_stratified(&g, 1);
        assert!(!t1.passed());
        assert!(t1.violations[0].contains("Y_1_2"));
        assert!(check_grading_stratified(&build_algebra_d3(), 2).passed());

        let ab = GradedLieAlgebra::abelian(vec!["a".into(), "z".into()], vec![1, 2]).unwrap();
        assert!(check_grading_stratified(&ab, 2).passed());
    }

    #[test]
    fn grading_violation_reported() {
        let g = build_algebra_d2();
        let bad = g.with_bracket(idx(&g, "Yp_1_1"), idx(&g, "Yp_2_1"), idx(&g, "Y_1_3"), qf(1, 2)).unwrap();
        let r = check_grading_stratified(&bad, 2);
        assert!(r.violations.iter().any(|v| v.contains("expected degree 2")));
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        let names = || vec!["a".to_string(), "b".to_string()];
        assert!(GradedLieAlgebra::new(names(), vec![1], []).is_err());
        assert!(GradedLieAlgebra::new(names(), vec![1, 0], []).is_err());
        assert!(GradedLieAlgebra::new(names(), vec![1, 1], [(0, 0, 1, q(1))]).is_err());
        assert!(GradedLieAlgebra::new(names(), vec![1, 1], [(0, 1, 1, q(1)), (1, 0, 1, q(2))]).is_err());
        assert!(GradedLieAlgebra::new(vec!["a".into(), "a".into()], vec![1, 1], []).is_err());
    }
}
