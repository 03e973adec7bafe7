//! Named batteries of exact checks, shared by the command-line runner and the
//! acceptance tests.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{cq_real, format_q, q, qf, Q};
use crate::lie::{
    build_algebra, build_ktilde_in, check_grading_stratified, check_jacobi, AlgebraElement, DilationAction,
    EnvelopingPolynomial, GradedLieAlgebra,
};
use crate::report::CheckReport;
use crate::weyl::models::{kinetic_operator, magnetic_d3, oscillator, rotation_generator, transport};
use crate::weyl::{
    build_standard_rep, check_homomorphism, check_skew, conjugate_by_point_transform, extract_induced_data, rep_apply,
    rotation_matrix, symmetric_part_identity, PolyDiffOp,
};

/// Fields used by the rotation-reduction check.
pub const ROTATION_FIELDS: [[f64; 3]; 4] = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 2.0, 2.0], [-1.0, 0.0, 0.0]];

pub const ROTATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub examined: usize,
    /// Violations, or a numeric residual for float checks.
    pub detail: Vec<String>,
}

impl From<CheckReport> for SuiteCheck {
    fn from(r: CheckReport) -> Self {
        Self { passed: r.passed(), name: r.name, examined: r.examined, detail: r.violations }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub d: usize,
    pub passed: bool,
    pub checks: Vec<SuiteCheck>,
    pub wall_ms: f64,
}

impl SuiteResult {
    fn finish(suite: &str, d: usize, checks: Vec<SuiteCheck>, start: Instant) -> Self {
        Self {
            suite: suite.into(),
            d,
            passed: checks.iter().all(|c| c.passed),
            checks,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=7))
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraElement {
    AlgebraElement { coeffs: (0..n).map(|_| random_q(rng)).collect() }
}

fn bracket_axioms(g: &GradedLieAlgebra, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = CheckReport::new("bracket bilinear and antisymmetric");
    let n = g.dim();
    for _ in 0..samples {
        r.examined += 1;
        let (x, y, z) = (random_element(&mut rng, n), random_element(&mut rng, n), random_element(&mut rng, n));
        let s = random_q(&mut rng);
        let lhs = g.bracket(&x.scale(&s).add(&z)?, &y)?;
        let rhs = g.bracket(&x, &y)?.scale(&s).add(&g.bracket(&z, &y)?)?;
        if lhs != rhs {
            r.violation(format!("linearity fails for {} and {}", g.describe(&x), g.describe(&y)));
        }
        if !g.bracket(&x, &y)?.add(&g.bracket(&y, &x)?)?.is_zero() {
            r.violation(format!("[x, y] + [y, x] ≠ 0 for x = {}", g.describe(&x)));
        }
        if !g.bracket(&x, &x)?.is_zero() {
            r.violation(format!("[x, x] ≠ 0 for x = {}", g.describe(&x)));
        }
    }
    Ok(r)
}

fn ktilde_homogeneity(g: &Arc<GradedLieAlgebra>, b: &Q, d: usize) -> Result<CheckReport> {
    let p = build_ktilde_in(g, b, d)?;
    let mut r = CheckReport::new(format!("K̃_b homogeneous of degree 2 (b = {})", format_q(b)));
    r.examined = p.terms().len();
    if !p.is_homogeneous(2) {
        r.violation("a word has grading ≠ 2");
    }
    if p.dilate().as_monomial(2) != Some(&p) {
        r.violation("δ_t(K̃_b) ≠ t²·K̃_b");
    }
    Ok(r)
}

fn dilation_laws(g: &Arc<GradedLieAlgebra>, d: usize) -> Result<CheckReport> {
    let delta = DilationAction::new(g);
    let mut r = CheckReport::new("dilations: δ_t∘δ_s = δ_ts, δ_1 = id");
    let p = build_ktilde_in(g, &qf(3, 2), d)?;
    let ts = [qf(2, 1), qf(-1, 3), qf(5, 7)];
    for t in &ts {
        for s in &ts {
            r.examined += 1;
            if delta.apply(t, &delta.apply(s, &p)) != delta.apply(&(t * s), &p) {
                r.violation(format!("composition fails at t = {}, s = {}", format_q(t), format_q(s)));
            }
        }
    }
    r.examined += 1;
    if delta.apply(&q(1), &p) != p {
        r.violation("δ_1 is not the identity");
    }
    Ok(r)
}

fn grade_additivity(g: &Arc<GradedLieAlgebra>) -> Result<CheckReport> {
    let n = g.dim();
    let mut words: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
    words.extend((0..n).flat_map(|a| (0..n).map(move |b| vec![a, b])));
    let mut r = CheckReport::new("grading additive under concatenation (words up to length 4)");
    let one = EnvelopingPolynomial::one(g.clone());
    for u in &words {
        for w in &words {
            r.examined += 1;
            let joined: Vec<usize> = u.iter().chain(w).copied().collect();
            if one.grading(&joined) != one.grading(u) + one.grading(w) {
                r.violation(format!("{u:?}·{w:?}"));
            }
        }
    }
    Ok(r)
}

/// Jacobi identity, type-2 stratification, `K̃_b` homogeneity, dilation laws,
/// grade additivity and bracket axioms on `samples` seeded random pairs.
pub fn algebra_suite(d: usize, b_values: &[Q], samples: usize, seed: u64) -> Result<SuiteResult> {
    let start = Instant::now();
    let g = Arc::new(build_algebra(d)?);
    let mut checks: Vec<SuiteCheck> = vec![check_jacobi(&g).into(), check_grading_stratified(&g, 2).into()];
    let type1 = check_grading_stratified(&g, 1);
    checks.push(SuiteCheck {
        name: "not generated by degree 1 (type 1 rejected)".into(),
        passed: !type1.passed(),
        examined: type1.examined,
        detail: type1.violations,
    });
    for b in b_values {
        checks.push(ktilde_homogeneity(&g, b, d)?.into());
    }
    checks.push(dilation_laws(&g, d)?.into());
    checks.push(grade_additivity(&g)?.into());
    checks.push(bracket_axioms(&g, samples, seed)?.into());
    Ok(SuiteResult::finish("algebra-suite", d, checks, start))
}

fn rotation_check(b: [f64; 3]) -> Result<SuiteCheck> {
    let m = rotation_matrix(b)?;
    let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let field: PolyDiffOp<Complex64> = magnetic_d3(&b.map(|x| Complex64::new(x, 0.0)));
    let vars = crate::weyl::phase_space_vars(3);
    let field_q = {
        let mut op = PolyDiffOp::zero(vars);
        for (mono, c) in field.terms() {
            op.add_term(mono.clone(), cq_real(Q::from_float(c.re).expect("finite")));
        }
        op
    };
    let target = rotation_generator::<Complex64>(3, 0, 1).scale(&Complex64::new(norm, 0.0));
    let err_field = conjugate_by_point_transform(&field_q, &m)?.max_abs_diff(&target)?;
    let err_transport = conjugate_by_point_transform(&transport(3), &m)?.max_abs_diff(&transport::<Complex64>(3))?;
    let err_osc = conjugate_by_point_transform(&oscillator(3), &m)?.max_abs_diff(&oscillator(3).to_c64())?;
    let worst = err_field.max(err_transport).max(err_osc);
    Ok(SuiteCheck {
        name: format!("rotation reduction b = {b:?}"),
        passed: worst <= ROTATION_TOL && m.orthogonality_defect() <= ROTATION_TOL,
        examined: 3,
        detail: vec![format!(
            "field {err_field:.3e}, transport {err_transport:.3e}, oscillator {err_osc:.3e}, orthogonality {:.3e}",
            m.orthogonality_defect()
        )],
    })
}

/// Homomorphism and skewness of the standard representation, `ρ(K̃_b)` against
/// the kinetic operator, the symmetric-part identity, induced data and (for
/// `d = 3`) the rotation reduction.
pub fn rep_suite(d: usize, b_values: &[Q]) -> Result<SuiteResult> {
    let start = Instant::now();
    let rep = build_standard_rep(d)?;
    let g = rep.algebra().clone();
    let mut checks: Vec<SuiteCheck> = vec![check_homomorphism(&rep).into(), check_skew(&rep).into()];
    for b in b_values {
        let p = rep_apply(&rep, &build_ktilde_in(&g, b, d)?)?;
        let expected = kinetic_operator(d, &cq_real(b.clone()));
        let mut r = CheckReport::new(format!("ρ(K̃_b) = K_b (b = {})", format_q(b)));
        r.examined = expected.terms().len().max(p.terms().len());
        if p != expected {
            r.violation(format!("difference {}", p.sub(&expected)?));
        }
        checks.push(r.into());
        let sym = symmetric_part_identity(&rep, b, d)?;
        let mut c: SuiteCheck = sym.report.clone().into();
        if let Some(k) = &sym.constant {
            c.detail.push(format!("c = {}", format_q(&k.re)));
        }
        checks.push(c);
    }
    let induced = extract_induced_data(&rep)?;
    checks.push(induced.report.into());
    if d == 3 {
        for b in ROTATION_FIELDS {
            checks.push(rotation_check(b)?);
        }
    }
    Ok(SuiteResult::finish("rep-suite", d, checks, start))
}

/// The rational field values used by default: `0, 1, −3/2, 2/3, 5`.
pub fn default_b_values() -> Vec<Q> {
    vec![q(0), q(1), qf(-3, 2), qf(2, 3), q(5)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_in_both_dimensions() {
        for d in [2, 3] {
            let a = algebra_suite(d, &default_b_values(), 20, 1).unwrap();
            assert!(a.passed, "{:?}", a.failed().collect::<Vec<_>>());
            let r = rep_suite(d, &default_b_values()).unwrap();
            assert!(r.passed, "{:?}", r.failed().collect::<Vec<_>>());
        }
    }
}
