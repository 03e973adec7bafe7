use std::sync::Arc;

use num_traits::Zero;

use super::models;
use super::op::{phase_space_vars, Monomial, PolyDiffOp};
use crate::error::{Error, Result};
use crate::exact::{cq_i, cq_int, cq_real, qf, DisplayCQ, CQ, Q};
use crate::lie::{build_algebra, build_ktilde_in, AlgebraElement, EnvelopingPolynomial, GradedLieAlgebra};
use crate::linalg_q::{nullspace, rank, solve_in_span, EchelonBasis};
use crate::report::CheckReport;

/// A linear map from an algebra's generators to differential operators on a fixed
/// variable list. Whether it respects brackets is checked, not assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    algebra: Arc<GradedLieAlgebra>,
    vars: Vec<String>,
    images: Vec<PolyDiffOp>,
}

impl Representation {
    pub fn new(algebra: Arc<GradedLieAlgebra>, vars: Vec<String>, images: Vec<PolyDiffOp>) -> Result<Self> {
        if images.len() != algebra.dim() {
            return Err(Error::Dimension(format!("{} images for an algebra of dimension {}", images.len(), algebra.dim())));
        }
        for img in &images {
            if img.vars() != vars.as_slice() {
                return Err(Error::VariableMismatch { left: vars.clone(), right: img.vars().to_vec() });
            }
        }
        Ok(Self { algebra, vars, images })
    }

    /// Every generator mapped to zero.
    pub fn trivial(algebra: Arc<GradedLieAlgebra>, vars: Vec<String>) -> Self {
        let images = vec![PolyDiffOp::zero(vars.clone()); algebra.dim()];
        Self { algebra, vars, images }
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.algebra
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn image(&self, generator: usize) -> &PolyDiffOp {
        &self.images[generator]
    }

    pub fn image_of(&self, name: &str) -> Result<&PolyDiffOp> {
        Ok(&self.images[self.algebra.index_of(name)?])
    }

    /// Replaces one generator image (used to build deliberately wrong maps).
    pub fn with_image(&self, name: &str, op: PolyDiffOp) -> Result<Self> {
        let mut images = self.images.clone();
        images[self.algebra.index_of(name)?] = op;
        Self::new(self.algebra.clone(), self.vars.clone(), images)
    }

    /// Linear extension to algebra elements.
    pub fn apply_element(&self, x: &AlgebraElement) -> Result<PolyDiffOp> {
        if x.dim() != self.algebra.dim() {
            return Err(Error::Dimension(format!("element of dimension {} for algebra of dimension {}", x.dim(), self.algebra.dim())));
        }
        let mut out = PolyDiffOp::zero(self.vars.clone());
        for (img, c) in self.images.iter().zip(&x.coeffs) {
            if !c.is_zero() {
                out = out.add(&img.scale(&cq_real(c.clone())))?;
            }
        }
        Ok(out)
    }
}

/// The standard realization on `(v_1..v_d, x_1..x_d)`:
/// `Yp_k ↦ ∂_{v_k}`, `Ypp_k ↦ i v_k`, `Y_1_2 ↦ v·∇_x`, `Y_2_2 ↦ i`, `Y_k_3 ↦ ∂_{x_k}`.
pub fn build_standard_rep(d: usize) -> Result<Representation> {
    let g = Arc::new(build_algebra(d)?);
    Ok(standard_rep_over(g, d))
}

fn standard_rep_over(g: Arc<GradedLieAlgebra>, d: usize) -> Representation {
    let vars = phase_space_vars(d);
    let mut images = Vec::with_capacity(g.dim());
    images.extend((0..d).map(|k| PolyDiffOp::derivative(vars.clone(), k)));
    images.extend((0..d).map(|k| PolyDiffOp::coordinate(vars.clone(), k).scale(&cq_i())));
    images.push(models::transport(d));
    images.push(PolyDiffOp::scalar(vars.clone(), cq_i()));
    images.extend((0..d).map(|k| PolyDiffOp::derivative(vars.clone(), d + k)));
    Representation { algebra: g, vars, images }
}

/// For every ordered basis pair, `[ρ(A), ρ(B)] = ρ([A, B])` exactly.
pub fn check_homomorphism(rep: &Representation) -> CheckReport {
    let g = &rep.algebra;
    let n = g.dim();
    let mut report = CheckReport::new("homomorphism");
    for a in 0..n {
        for b in 0..n {
            report.examined += 1;
            let lhs = rep.images[a].commutator(&rep.images[b]).expect("shared variables");
            let rhs = rep.apply_element(&g.bracket_basis(a, b)).expect("same algebra");
            if lhs != rhs {
                report.violation(format!(
                    "({}, {}): commutator {} but image of bracket {}",
                    g.names()[a],
                    g.names()[b],
                    lhs,
                    rhs
                ));
            }
        }
    }
    report
}

/// For every generator, `ρ(Y)* = −ρ(Y)` exactly.
pub fn check_skew(rep: &Representation) -> CheckReport {
    let mut report = CheckReport::new("skew-adjoint");
    for (name, img) in rep.algebra.names().iter().zip(&rep.images) {
        report.examined += 1;
        if !is_skew(img) {
            report.violation(format!("{name}: adjoint of {img} is {}", img.formal_adjoint()));
        }
    }
    report
}

pub fn is_skew(op: &PolyDiffOp) -> bool {
    op.formal_adjoint() == op.scale(&cq_int(-1))
}

/// Image of an enveloping polynomial: each word becomes the composition of the
/// generator images, normal ordered.
pub fn rep_apply(rep: &Representation, p: &EnvelopingPolynomial) -> Result<PolyDiffOp> {
    if **p.algebra() != *rep.algebra {
        return Err(Error::AlgebraMismatch("polynomial and representation use different algebras".into()));
    }
    let mut out = PolyDiffOp::zero(rep.vars.clone());
    for (word, c) in p.terms() {
        let mut op = PolyDiffOp::identity(rep.vars.clone());
        for &g in word {
            op = op.compose(&rep.images[g])?;
        }
        out = out.add(&op.scale(c))?;
    }
    Ok(out)
}

/// Outcome of the symmetric-part identity for the degree-2 element `K̃_b`.
#[derive(Debug, Clone)]
pub struct SymmetricPartReport {
    pub report: CheckReport,
    /// `S = ½(P + P*)` with `P = ρ(K̃_b)`.
    pub symmetric_part: PolyDiffOp,
    /// `Σ_k [−ρ(Yp_k)² − ¼ ρ(Ypp_k)²]`.
    pub sum_of_squares: PolyDiffOp,
    /// The scalar `c` with `S = sum_of_squares + c·id`, when it exists.
    pub constant: Option<CQ>,
    /// Symmetric part of the transport word `ρ(Y_1_2)`.
    pub transport_part: PolyDiffOp,
    /// Symmetric part of the magnetic words `−ib ρ(Yp_1 Ypp_2 − Yp_2 Ypp_1)`.
    pub magnetic_part: PolyDiffOp,
}

impl SymmetricPartReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Verifies that `Re⟨ρ(K̃_b)u, u⟩` is the weighted sum of squares
/// `Σ_k (‖ρ(Yp_k)u‖² + ¼‖ρ(Ypp_k)u‖²) + c‖u‖²`, symbolically: the transport and
/// magnetic words have vanishing symmetric part and the remainder is `c·id`.
pub fn symmetric_part_identity(rep: &Representation, b: &Q, d: usize) -> Result<SymmetricPartReport> {
    let g = rep.algebra.clone();
    let k = build_ktilde_in(&g, b, d)?;
    let p = rep_apply(rep, &k)?;
    let s = p.symmetric_part();

    let mut squares = PolyDiffOp::zero(rep.vars.clone());
    for k in 1..=d {
        let yp = rep.image_of(&format!("Yp_{k}_1"))?;
        let ypp = rep.image_of(&format!("Ypp_{k}_1"))?;
        squares = squares
            .sub(&yp.compose(yp)?)?
            .sub(&ypp.compose(ypp)?.scale(&cq_real(qf(1, 4))))?;
    }
    let constant = s.sub(&squares)?.as_scalar();

    let transport_part = rep.image_of("Y_1_2")?.symmetric_part();
    let magnetic = EnvelopingPolynomial::word(&g, &["Yp_1_1", "Ypp_2_1"], cq_int(1))?
        .sub(&EnvelopingPolynomial::word(&g, &["Yp_2_1", "Ypp_1_1"], cq_int(1))?)?
        .scale(&(-cq_i() * cq_real(b.clone())));
    let magnetic_part = rep_apply(rep, &magnetic)?.symmetric_part();

    let mut report = CheckReport::new(format!("symmetric-part identity (d = {d}, b = {})", DisplayCQ(&cq_real(b.clone()))));
    report.examined = 3;
    if !transport_part.is_zero() {
        report.violation(format!("transport word has symmetric part {transport_part}"));
    }
    if !magnetic_part.is_zero() {
        report.violation(format!("magnetic words have symmetric part {magnetic_part}"));
    }
    match &constant {
        Some(c) if c.im.is_zero() => {}
        Some(c) => report.violation(format!("remainder constant {} is not real", DisplayCQ(c))),
        None => report.violation(format!("S − Σ squares = {} is not a multiple of the identity", s.sub(&squares)?)),
    }
    Ok(SymmetricPartReport { report, symmetric_part: s, sum_of_squares: squares, constant, transport_part, magnetic_part })
}

/// The linear form and subalgebra of an induced representation, read off a
/// triangular normal form `ρ(X) = Σ_j P_j(y; X) ∂_{y_j} + i Q(y; X)`.
#[derive(Debug, Clone)]
pub struct InducedData {
    /// `⟨ℓ, e_a⟩ = Q(0; e_a)` per generator.
    pub ell: Vec<Q>,
    /// Basis of `ℋ = {X : P_j(0; X) = 0 ∀j}`, in reduced form.
    pub subalgebra: Vec<AlgebraElement>,
    /// Closure of `ℋ` under brackets and `ℓ([ℋ, ℋ]) = 0`.
    pub report: CheckReport,
}

/// Validates the triangular normal form (real `P_j` depending on `y_1..y_{j−1}`
/// only, purely imaginary zeroth-order part) and extracts `(ℓ, ℋ)`.
pub fn extract_induced_data(rep: &Representation) -> Result<InducedData> {
    let g = &rep.algebra;
    let k = rep.vars.len();
    let n = g.dim();
    // leading[j][a] = P_j(0; e_a)
    let mut leading = vec![vec![Q::zero(); n]; k];
    let mut ell = vec![Q::zero(); n];
    for (a, img) in rep.images.iter().enumerate() {
        let name = &g.names()[a];
        for (m, c) in img.terms() {
            match m.deriv_order() {
                0 => {
                    if !c.re.is_zero() {
                        return Err(Error::NotNormalForm(format!("{name}: zeroth-order part has a real component")));
                    }
                    if m.poly_degree() == 0 {
                        ell[a] = c.im.clone();
                    }
                }
                1 => {
                    let j = m.deriv.iter().position(|&e| e == 1).expect("first order");
                    if !c.im.is_zero() {
                        return Err(Error::NotNormalForm(format!("{name}: coefficient of ∂{} is not real", rep.vars[j])));
                    }
                    if m.poly[j..].iter().any(|&e| e > 0) {
                        return Err(Error::NotNormalForm(format!(
                            "{name}: coefficient of ∂{} depends on {} or later variables",
                            rep.vars[j], rep.vars[j]
                        )));
                    }
                    if m.poly_degree() == 0 {
                        leading[j][a] = c.re.clone();
                    }
                }
                _ => return Err(Error::NotNormalForm(format!("{name}: image has order > 1"))),
            }
        }
    }
    let r = rank(&leading, n);
    if r < k {
        return Err(Error::DependentForms { rank: r, expected: k });
    }
    let subalgebra: Vec<AlgebraElement> =
        nullspace(&leading, n).into_iter().map(|coeffs| AlgebraElement { coeffs }).collect();

    let mut report = CheckReport::new("induced data");
    let mut span = EchelonBasis::new(n);
    for h in &subalgebra {
        span.insert(&h.coeffs);
    }
    for (i, h1) in subalgebra.iter().enumerate() {
        for h2 in &subalgebra[i + 1..] {
            report.examined += 1;
            let z = g.bracket(h1, h2)?;
            if !span.contains(&z.coeffs) {
                report.violation(format!("[{}, {}] = {} leaves the subalgebra", g.describe(h1), g.describe(h2), g.describe(&z)));
            }
            let pairing: Q = ell.iter().zip(&z.coeffs).map(|(l, c)| l * c).sum();
            if !pairing.is_zero() {
                report.violation(format!("ℓ([{}, {}]) = {} ≠ 0", g.describe(h1), g.describe(h2), crate::exact::format_q(&pairing)));
            }
        }
    }
    Ok(InducedData { ell, subalgebra, report })
}

/// Reads a structure table off a list of operators closed under commutators:
/// `[X_a, X_b]` is expanded in the span of the `X_c` with rational coefficients.
pub fn structure_from_images(names: Vec<String>, degrees: Vec<u32>, images: &[PolyDiffOp]) -> Result<GradedLieAlgebra> {
    let monomials: Vec<Monomial> = {
        let mut all: Vec<Monomial> = Vec::new();
        for a in images {
            for b in images {
                all.extend(a.commutator(b)?.terms().keys().cloned());
            }
            all.extend(a.terms().keys().cloned());
        }
        all.sort();
        all.dedup();
        all
    };
    let coords = |op: &PolyDiffOp| -> Vec<Q> {
        monomials
            .iter()
            .flat_map(|m| {
                let c = op.coefficient(m);
                [c.re, c.im]
            })
            .collect()
    };
    let cols: Vec<Vec<Q>> = images.iter().map(coords).collect();
    let mut triples = Vec::new();
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            let target = coords(&images[a].commutator(&images[b])?);
            let x = solve_in_span(&cols, &target).ok_or_else(|| {
                Error::InvalidAlgebra(format!("[{}, {}] is not in the span of the operators", names[a], names[b]))
            })?;
            triples.extend(x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (a, b, c, v)));
        }
    }
    GradedLieAlgebra::new(names, degrees, triples)
}
