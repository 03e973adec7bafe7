use std::collections::BTreeMap;

use num_complex::Complex64;

use super::op::{phase_space_vars, Coeff, Monomial, PolyDiffOp};
use crate::error::{Error, Result};
use crate::exact::{cq_int, CQ};

/// Orthogonal `M` with `M e_3 = b/|b|`, built as `R_z(φ)·R_x(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix3 {
    pub entries: [[f64; 3]; 3],
    /// Present when every entry is exactly `0` or `±1`.
    pub exact: Option<[[i8; 3]; 3]>,
    pub field: [f64; 3],
    /// Polar angle `θ = atan2(√(b₁²+b₂²), b₃)` (rotation about the first axis).
    pub theta: f64,
    /// Azimuth `φ = atan2(b₁, −b₂)`, or 0 when `b₁ = b₂ = 0` (rotation about the third axis).
    pub phi: f64,
}

impl RotationMatrix3 {
    pub fn identity() -> Self {
        let mut entries = [[0.0; 3]; 3];
        let mut exact = [[0; 3]; 3];
        for i in 0..3 {
            entries[i][i] = 1.0;
            exact[i][i] = 1;
        }
        Self { entries, exact: Some(exact), field: [0.0, 0.0, 1.0], theta: 0.0, phi: 0.0 }
    }

    /// `max |M Mᵗ − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn exact_entries(&self) -> Option<[[CQ; 3]; 3]> {
        self.exact.map(|e| e.map(|row| row.map(|x| cq_int(x as i64))))
    }

    pub fn float_entries(&self) -> [[Complex64; 3]; 3] {
        self.entries.map(|row| row.map(|x| Complex64::new(x, 0.0)))
    }
}

pub fn rotation_matrix(b: [f64; 3]) -> Result<RotationMatrix3> {
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidField(format!("non-finite field {b:?}")));
    }
    if b.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateField);
    }
    let rho = b[0].hypot(b[1]);
    let theta = rho.atan2(b[2]);
    let phi = if rho == 0.0 { 0.0 } else { b[0].atan2(-b[1]) };
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rz = [[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]];
    let rx = [[1.0, 0.0, 0.0], [0.0, ct, -st], [0.0, st, ct]];
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = (0..3).map(|k| rz[i][k] * rx[k][j]).sum();
        }
    }
    let axis_aligned = b.iter().filter(|&&x| x != 0.0).count() == 1;
    let exact = axis_aligned.then(|| {
        let mut e = [[0i8; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                e[i][j] = entries[i][j].round() as i8;
                entries[i][j] = e[i][j] as f64;
            }
        }
        e
    });
    Ok(RotationMatrix3 { entries, exact, field: b, theta, phi })
}

type Poly<C> = BTreeMap<Vec<u32>, C>;

fn poly_mul<C: Coeff>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    let mut out: Poly<C> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.mul(cb);
            let slot = out.entry(e).or_insert_with(C::zero);
            *slot = slot.add(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn linear_form<C: Coeff>(k: usize, coeffs: impl IntoIterator<Item = (usize, C)>) -> Poly<C> {
    let mut p = BTreeMap::new();
    for (j, c) in coeffs {
        if !c.is_zero() {
            let mut e = vec![0; k];
            e[j] = 1;
            p.insert(e, c);
        }
    }
    p
}

fn power_product<C: Coeff>(k: usize, forms: &[Poly<C>], exps: &[u32]) -> Poly<C> {
    let mut acc: Poly<C> = BTreeMap::from([(vec![0; k], C::one())]);
    for (f, &e) in forms.iter().zip(exps) {
        for _ in 0..e {
            acc = poly_mul(&acc, f);
        }
    }
    acc
}

/// `V_M A V_M⁻¹` for the pull-back `(V_M u)(v, x) = u(Mv, Mx)` and orthogonal `M`:
/// `y_i ↦ (My)_i` and `∂_{y_j} ↦ Σ_k M_{jk} ∂_{y_k}` on each 3-block.
pub fn conjugate_with<C: Coeff>(a: &PolyDiffOp<C>, m: &[[C; 3]; 3]) -> Result<PolyDiffOp<C>> {
    let vars = phase_space_vars(3);
    if a.vars() != vars.as_slice() {
        return Err(Error::VariableMismatch { left: vars, right: a.vars().to_vec() });
    }
    let k = 6;
    let forms: Vec<Poly<C>> = (0..k)
        .map(|i| {
            let base = i / 3 * 3;
            linear_form(k, (0..3).map(|j| (base + j, m[i % 3][j].clone())))
        })
        .collect();
    let mut out = PolyDiffOp::zero(vars);
    for (mono, c) in a.terms() {
        let poly = power_product(k, &forms, &mono.poly);
        let deriv = power_product(k, &forms, &mono.deriv);
        for (pe, pc) in &poly {
            for (de, dc) in &deriv {
                let term = Monomial { poly: pe.clone(), deriv: de.clone() };
                out.add_term(term, c.mul(pc).mul(dc));
            }
        }
    }
    Ok(out)
}

/// Conjugation in floating point; exact entries are used when `M` has them, so
/// axis-aligned cases carry no rounding.
pub fn conjugate_by_point_transform(a: &PolyDiffOp, m: &RotationMatrix3) -> Result<PolyDiffOp<Complex64>> {
    match m.exact_entries() {
        Some(e) => Ok(conjugate_with(a, &e)?.to_c64()),
        None => conjugate_with(&a.to_c64(), &m.float_entries()),
    }
}

/// Exact conjugation; requires `M` with entries in `{0, ±1}`.
pub fn conjugate_exact(a: &PolyDiffOp, m: &RotationMatrix3) -> Result<PolyDiffOp> {
    let e = m
        .exact_entries()
        .ok_or_else(|| Error::InvalidField(format!("rotation for {:?} has no exact entries", m.field)))?;
    conjugate_with(a, &e)
}
