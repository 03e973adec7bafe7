use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{HermiteFourierBasis, Space};
use super::field::FieldSpec;
use super::hermite::{ladder_1d, monomial_1d};
use super::sparse::{CsrMatrix, C64};
use crate::error::{Error, Result};
use crate::weyl::op::{phase_space_vars, Coeff, PolyDiffOp};
use crate::weyl::rotation::rotation_matrix;

/// Columns of a Hermite-space operator: for each domain multi-index, the
/// `(codomain Hermite index, value)` pairs.
type HermiteColumns = Vec<Vec<(usize, C64)>>;

/// Matrix of an operator between truncated Hermite–Fourier spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteFourierOperator {
    pub basis: HermiteFourierBasis,
    pub domain: Space,
    pub codomain: Space,
    pub matrix: CsrMatrix,
}

impl HermiteFourierOperator {
    fn rectangular(basis: &HermiteFourierBasis, matrix: CsrMatrix) -> Self {
        Self { basis: *basis, domain: basis.domain(), codomain: basis.codomain(), matrix }
    }

    fn square_op(basis: &HermiteFourierBasis, matrix: CsrMatrix) -> Self {
        Self { basis: *basis, domain: basis.domain(), codomain: basis.domain(), matrix }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.matvec(x)
    }

    pub fn is_rectangular(&self) -> bool {
        self.domain != self.codomain
    }

    /// Restriction of the rows to the embedded domain (`P F` with `P` the codomain
    /// projection onto domain degrees).
    pub fn square(&self) -> CsrMatrix {
        if !self.is_rectangular() {
            return self.matrix.clone();
        }
        let cols: Vec<usize> = (0..self.domain.dim()).collect();
        self.matrix.submatrix(&self.basis.embedding(), &cols)
    }

    /// `Fᴴ F` on the domain.
    pub fn gram(&self) -> CsrMatrix {
        self.matrix.gram()
    }

    fn combine(&self, s: C64, other: &Self) -> Result<Self> {
        if (self.domain, self.codomain) != (other.domain, other.codomain) {
            return Err(Error::Dimension("operators act between different spaces".into()));
        }
        Ok(Self { matrix: self.matrix.axpy(s, &other.matrix)?, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { matrix: self.matrix.scale(s), ..self.clone() }
    }
}

fn identity_1d(n: usize) -> Vec<Vec<(usize, f64)>> {
    (0..n).map(|k| vec![(k, 1.0)]).collect()
}

/// Tensor product of per-dimension column lists.
fn kron_hermite(dom: Space, cod: Space, factors: &[Vec<Vec<(usize, f64)>>], coeff: C64) -> HermiteColumns {
    (0..dom.hermite_count())
        .map(|h| {
            let multi = dom.hermite_multi(h);
            let mut entries = vec![(0usize, coeff)];
            for (j, f) in factors.iter().enumerate() {
                let mut next = Vec::with_capacity(entries.len() * f[multi[j]].len());
                for &(row, v) in &entries {
                    for &(r, w) in &f[multi[j]] {
                        next.push((row * cod.n + r, v * w));
                    }
                }
                entries = next;
            }
            entries
        })
        .collect()
}

/// Hermite columns of `c · Π_j v_j^{p_j} ∂_{v_j}^{q_j}`.
fn hermite_monomial(basis: &HermiteFourierBasis, powers: &[(u32, u32)], coeff: C64) -> Result<HermiteColumns> {
    let (dom, cod) = (basis.domain(), basis.codomain());
    let factors = powers
        .iter()
        .map(|&(p, q)| if p == 0 && q == 0 { Ok(identity_1d(dom.n)) } else { monomial_1d(p, q, dom.n, cod.n) })
        .collect::<Result<Vec<_>>>()?;
    Ok(kron_hermite(dom, cod, &factors, coeff))
}

fn sum_columns(parts: Vec<HermiteColumns>) -> HermiteColumns {
    let mut it = parts.into_iter();
    let mut acc = it.next().unwrap_or_default();
    for p in it {
        for (a, b) in acc.iter_mut().zip(p) {
            a.extend(b);
        }
    }
    acc
}

/// `Σ_m H ⊗ s(m) e_m e_mᵀ` for a Hermite block `H` and Fourier symbol `s`.
fn fourier_diagonal(basis: &HermiteFourierBasis, herm: &HermiteColumns, symbol: impl Fn(&[i64]) -> C64 + Sync) -> CsrMatrix {
    let (dom, cod) = (basis.domain(), basis.codomain());
    let (hd, hc) = (dom.hermite_count(), cod.hermite_count());
    let triplets: Vec<(usize, usize, C64)> = (0..dom.fourier_count())
        .into_par_iter()
        .flat_map_iter(|f| {
            let s = symbol(&dom.fourier_mode(f));
            let block: Vec<_> = if s == C64::new(0.0, 0.0) {
                vec![]
            } else {
                herm.iter()
                    .enumerate()
                    .flat_map(|(h, col)| col.iter().map(move |&(r, v)| (f * hc + r, f * hd + h, v * s)))
                    .collect()
            };
            block
        })
        .collect();
    CsrMatrix::from_triplets(cod.dim(), dom.dim(), triplets)
}

/// `Σ_k H ⊗ ĉ_k S_k` with `S_k e_m = e_{m+k}` (dropped outside the truncation).
fn fourier_convolution(basis: &HermiteFourierBasis, herm: &HermiteColumns, coeffs: &[(Vec<i64>, C64)]) -> CsrMatrix {
    let (dom, cod) = (basis.domain(), basis.codomain());
    let (hd, hc) = (dom.hermite_count(), cod.hermite_count());
    let triplets: Vec<(usize, usize, C64)> = (0..dom.fourier_count())
        .into_par_iter()
        .flat_map_iter(|f| {
            let m = dom.fourier_mode(f);
            let mut block = Vec::new();
            for (k, c) in coeffs {
                if *c == C64::new(0.0, 0.0) {
                    continue;
                }
                let target: Vec<i64> = m.iter().zip(k).map(|(a, b)| a + b).collect();
                let Some(g) = cod.fourier_index(&target) else { continue };
                for (h, col) in herm.iter().enumerate() {
                    block.extend(col.iter().map(|&(r, v)| (g * hc + r, f * hd + h, v * c)));
                }
            }
            block
        })
        .collect();
    CsrMatrix::from_triplets(cod.dim(), dom.dim(), triplets)
}

fn unit_powers(d: usize, j: usize, p: u32, q: u32) -> Vec<(u32, u32)> {
    let mut w = vec![(0, 0); d];
    w[j] = (p, q);
    w
}

/// `a_j` and `a_j†` for each velocity dimension, domain → codomain.
pub fn ladder_matrices(basis: &HermiteFourierBasis) -> Vec<(HermiteFourierOperator, HermiteFourierOperator)> {
    let (dom, cod) = (basis.domain(), basis.codomain());
    (0..basis.d)
        .map(|j| {
            let build = |raising: bool| {
                let factors: Vec<_> = (0..basis.d)
                    .map(|k| if k == j { ladder_1d(raising, dom.n, cod.n) } else { identity_1d(dom.n) })
                    .collect();
                let herm = kron_hermite(dom, cod, &factors, C64::new(1.0, 0.0));
                HermiteFourierOperator::rectangular(basis, fourier_diagonal(basis, &herm, |_| C64::new(1.0, 0.0)))
            };
            (build(false), build(true))
        })
        .collect()
}

/// Number operator `Σ n_j`, i.e. `−Δ_v + v²/4 − d/2`, embedded in the codomain.
pub fn assemble_oscillator(basis: &HermiteFourierBasis) -> HermiteFourierOperator {
    let (dom, cod) = (basis.domain(), basis.codomain());
    let herm: HermiteColumns = (0..dom.hermite_count())
        .map(|h| {
            let multi = dom.hermite_multi(h);
            let n: usize = multi.iter().sum();
            if n == 0 {
                vec![]
            } else {
                vec![(cod.hermite_index(&multi), C64::new(n as f64, 0.0))]
            }
        })
        .collect();
    HermiteFourierOperator::rectangular(basis, fourier_diagonal(basis, &herm, |_| C64::new(1.0, 0.0)))
}

/// Inclusion of the domain into the codomain.
pub fn assemble_embedding(basis: &HermiteFourierBasis) -> HermiteFourierOperator {
    let dom = basis.domain();
    let triplets = basis.embedding().into_iter().enumerate().map(|(j, i)| (i, j, C64::new(1.0, 0.0)));
    HermiteFourierOperator::rectangular(basis, CsrMatrix::from_triplets(basis.codomain().dim(), dom.dim(), triplets))
}

/// `v·∇_x = Σ_j (a_j + a_j†) ⊗ 2πi m_j`.
pub fn assemble_transport(basis: &HermiteFourierBasis) -> HermiteFourierOperator {
    assemble_transport_with(basis, |m| m.iter().map(|&k| 2.0 * PI * k as f64).collect())
}

/// Transport with a general wave-vector map `m ↦ k(m)`: `Σ_j v_j ⊗ i k_j(m)`.
pub fn assemble_transport_with(basis: &HermiteFourierBasis, wave: impl Fn(&[i64]) -> Vec<f64> + Sync) -> HermiteFourierOperator {
    let d = basis.d;
    let parts = (0..d).map(|j| {
        let herm = hermite_monomial(basis, &unit_powers(d, j, 1, 0), C64::new(1.0, 0.0)).expect("buffer ≥ 1");
        fourier_diagonal(basis, &herm, |m| C64::new(0.0, wave(m)[j]))
    });
    let matrix = parts.reduce(|a, b| a.add(&b).expect("same shape")).expect("d ≥ 2");
    HermiteFourierOperator::rectangular(basis, matrix)
}

/// Hermite columns of `v_i ∂_{v_j} − v_j ∂_{v_i}` (`= a_i†a_j − a_j†a_i`).
fn rotation_columns(basis: &HermiteFourierBasis, i: usize, j: usize) -> HermiteColumns {
    let mut p = vec![(0, 0); basis.d];
    p[i] = (1, 0);
    p[j] = (0, 1);
    let mut q = vec![(0, 0); basis.d];
    q[j] = (1, 0);
    q[i] = (0, 1);
    sum_columns(vec![
        hermite_monomial(basis, &p, C64::new(1.0, 0.0)).expect("buffer ≥ 1"),
        hermite_monomial(basis, &q, C64::new(-1.0, 0.0)).expect("buffer ≥ 1"),
    ])
}

/// Index pairs of the field components: `v_1∂_2 − v_2∂_1` for `d = 2`;
/// `(v_2∂_3 − v_3∂_2, v_3∂_1 − v_1∂_3, v_1∂_2 − v_2∂_1)` for `d = 3`.
fn field_generators(d: usize) -> Vec<(usize, usize)> {
    if d == 2 {
        vec![(0, 1)]
    } else {
        vec![(1, 2), (2, 0), (0, 1)]
    }
}

/// `(v∧B)·∇_v` assembled component by component; variable fields act by
/// Fourier convolution.
pub fn assemble_magnetic(basis: &HermiteFourierBasis, field: &FieldSpec) -> Result<HermiteFourierOperator> {
    check_field(basis, field)?;
    let coeffs = field.coefficients();
    let mut matrix = CsrMatrix::zeros(basis.codomain().dim(), basis.dim());
    for (c, &(i, j)) in field_generators(basis.d).iter().enumerate() {
        let herm = rotation_columns(basis, i, j);
        let comp: Vec<(Vec<i64>, C64)> = coeffs.iter().map(|(m, v)| (m.clone(), v[c])).collect();
        let part = if comp.iter().all(|(m, _)| m.iter().all(|&k| k == 0)) {
            let b: C64 = comp.iter().map(|(_, v)| *v).sum();
            fourier_diagonal(basis, &herm, |_| b)
        } else {
            fourier_convolution(basis, &herm, &comp)
        };
        matrix = matrix.add(&part)?;
    }
    Ok(HermiteFourierOperator::rectangular(basis, matrix))
}

fn check_field(basis: &HermiteFourierBasis, field: &FieldSpec) -> Result<()> {
    if field.d() != basis.d {
        return Err(Error::InvalidField(format!("field is for d = {}, basis has d = {}", field.d(), basis.d)));
    }
    if field.bandwidth() > basis.kx {
        return Err(Error::InvalidField(format!(
            "field bandwidth {} exceeds the Fourier cutoff Kx = {}",
            field.bandwidth(),
            basis.kx
        )));
    }
    Ok(())
}

/// How a constant three-dimensional field is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum D3Path {
    /// Rotate velocities so the field lies along `e_3`: magnetic part
    /// `|b|(v_1∂_2 − v_2∂_1)`, transport with wave vectors `2π Mᵀm`.
    #[default]
    Rotated,
    /// Assemble all three components as given.
    Direct,
}

/// `(T, Mag)` with `T = v·∇_x` and `Mag = (v∧B)·∇_v`, following `path` for
/// constant `d = 3` fields.
pub fn first_order_parts(
    basis: &HermiteFourierBasis,
    field: &FieldSpec,
    path: D3Path,
) -> Result<(HermiteFourierOperator, HermiteFourierOperator)> {
    check_field(basis, field)?;
    if let (3, D3Path::Rotated, Some(b)) = (basis.d, path, field.as_constant()) {
        if b.iter().any(|&x| x != 0.0) {
            let m = rotation_matrix([b[0], b[1], b[2]])?;
            let e = m.entries;
            let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            let transport = assemble_transport_with(basis, |mode| {
                (0..3).map(|j| 2.0 * PI * (0..3).map(|i| e[i][j] * mode[i] as f64).sum::<f64>()).collect()
            });
            let herm = rotation_columns(basis, 0, 1);
            let magnetic = fourier_diagonal(basis, &herm, |_| C64::new(norm, 0.0));
            return Ok((transport, HermiteFourierOperator::rectangular(basis, magnetic)));
        }
    }
    Ok((assemble_transport(basis), assemble_magnetic(basis, field)?))
}

/// `K + λ = v·∇_x − (v∧B)·∇_v − Δ_v + v²/4 − d/2 + λ`, domain → codomain.
pub fn assemble_k(basis: &HermiteFourierBasis, field: &FieldSpec, lambda_shift: f64) -> Result<HermiteFourierOperator> {
    assemble_k_with(basis, field, lambda_shift, D3Path::default())
}

pub fn assemble_k_with(
    basis: &HermiteFourierBasis,
    field: &FieldSpec,
    lambda_shift: f64,
    path: D3Path,
) -> Result<HermiteFourierOperator> {
    if basis.buffer < 1 {
        return Err(Error::InvalidBasis("K needs a codomain buffer of at least 1".into()));
    }
    let (t, mag) = first_order_parts(basis, field, path)?;
    let mut k = t.sub(&mag)?.add(&assemble_oscillator(basis))?;
    if lambda_shift != 0.0 {
        k = k.add(&assemble_embedding(basis).scale(C64::new(lambda_shift, 0.0)))?;
    }
    Ok(k)
}

/// Multi-indices `(α, β) ∈ ℕ^{2d}` with `|α| + |β| ≤ 2`, as per-dimension
/// `(α_j, β_j)` powers.
pub fn b2_multi_indices(d: usize) -> Vec<Vec<(u32, u32)>> {
    let mut out = vec![vec![(0, 0); d]];
    let slots = 2 * d;
    let bump = |w: &mut Vec<(u32, u32)>, s: usize| {
        if s < d {
            w[s].0 += 1
        } else {
            w[s - d].1 += 1
        }
    };
    for s in 0..slots {
        let mut w = vec![(0, 0); d];
        bump(&mut w, s);
        out.push(w);
    }
    for s in 0..slots {
        for t in s..slots {
            let mut w = vec![(0, 0); d];
            bump(&mut w, s);
            bump(&mut w, t);
            out.push(w);
        }
    }
    out
}

/// Gram matrix of `‖u‖²_{B̃²} = Σ_{|α|+|β|≤2} ‖v^α ∂_v^β u‖²` on the domain.
///
/// The form does not involve `x`, so the Hermite block is built once and repeated
/// on every Fourier mode.
pub fn assemble_b2_gram(basis: &HermiteFourierBasis) -> Result<HermiteFourierOperator> {
    if basis.buffer < 2 {
        return Err(Error::InvalidBasis("the B̃² form needs a codomain buffer of at least 2".into()));
    }
    let (dom, cod) = (basis.domain(), basis.codomain());
    let (hd, hc) = (dom.hermite_count(), cod.hermite_count());
    let mut block = CsrMatrix::zeros(hd, hd);
    for powers in b2_multi_indices(basis.d) {
        let cols = hermite_monomial(basis, &powers, C64::new(1.0, 0.0))?;
        let f = CsrMatrix::from_triplets(
            hc,
            hd,
            cols.iter().enumerate().flat_map(|(h, col)| col.iter().map(move |&(r, v)| (r, h, v))),
        );
        block = block.add(&f.gram())?;
    }
    let triplets: Vec<_> = (0..dom.fourier_count())
        .flat_map(|f| block.triplets().map(move |(i, j, v)| (f * hd + i, f * hd + j, v)).collect::<Vec<_>>())
        .collect();
    Ok(HermiteFourierOperator::square_op(basis, CsrMatrix::from_triplets(dom.dim(), dom.dim(), triplets)))
}

/// Matrix of a polynomial-coefficient operator on `(v_1..v_d, x_1..x_d)`:
/// `v`-monomials through Hermite products, `∂_x` through the Fourier symbol.
/// Coefficients may not depend on `x`.
pub fn assemble_polydiffop<C: Coeff>(basis: &HermiteFourierBasis, op: &PolyDiffOp<C>) -> Result<HermiteFourierOperator> {
    let d = basis.d;
    let vars = phase_space_vars(d);
    if op.vars() != vars.as_slice() {
        return Err(Error::VariableMismatch { left: vars, right: op.vars().to_vec() });
    }
    let mut matrix = CsrMatrix::zeros(basis.codomain().dim(), basis.dim());
    for (mono, c) in op.terms() {
        if mono.poly[d..].iter().any(|&e| e > 0) {
            return Err(Error::InvalidBasis("coefficients depending on x are not periodic polynomials".into()));
        }
        let powers: Vec<(u32, u32)> = (0..d).map(|j| (mono.poly[j], mono.deriv[j])).collect();
        let herm = hermite_monomial(basis, &powers, c.to_c64())?;
        let xd: Vec<u32> = mono.deriv[d..].to_vec();
        let part = fourier_diagonal(basis, &herm, |m| {
            m.iter()
                .zip(&xd)
                .map(|(&k, &e)| Complex64::new(0.0, 2.0 * PI * k as f64).powu(e))
                .product()
        });
        matrix = matrix.add(&part)?;
    }
    Ok(HermiteFourierOperator::rectangular(basis, matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;
    use crate::lie::build_ktilde;
    use crate::spectral::field::TrigTerm;
    use crate::weyl::{build_standard_rep, rep_apply};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn basis() -> HermiteFourierBasis {
        HermiteFourierBasis::new(2, 5, 1).unwrap()
    }

    fn unit(space: Space, h: &[usize], m: &[i64]) -> Vec<C64> {
        let mut x = vec![c(0.0); space.dim()];
        x[space.index(h, m).unwrap()] = c(1.0);
        x
    }

    #[test]
    fn ladder_actions() {
        let b = basis();
        let lad = ladder_matrices(&b);
        let y = lad[0].0.apply(&unit(b.domain(), &[3, 0], &[0, 1]));
        let i = b.codomain().index(&[2, 0], &[0, 1]).unwrap();
        assert!((y[i] - c(3f64.sqrt())).norm() < 1e-15);
        let z = lad[0].1.apply(&unit(b.domain(), &[0, 0], &[0, 0]));
        assert_eq!(z[b.codomain().index(&[1, 0], &[0, 0]).unwrap()], c(1.0));
    }

    #[test]
    fn oscillator_is_number_operator() {
        let b = basis();
        let n = assemble_oscillator(&b);
        let y = n.apply(&unit(b.domain(), &[2, 1], &[1, -1]));
        assert_eq!(y[b.codomain().index(&[2, 1], &[1, -1]).unwrap()], c(3.0));
        assert!(n.apply(&unit(b.domain(), &[0, 0], &[1, 1])).iter().all(|v| *v == c(0.0)));
    }

    #[test]
    fn transport_entry_and_zero_mode() {
        let b = basis();
        let t = assemble_transport(&b);
        let y = t.apply(&unit(b.domain(), &[0, 0], &[1, 0]));
        let i = b.codomain().index(&[1, 0], &[1, 0]).unwrap();
        assert!((y[i] - C64::new(0.0, 2.0 * PI)).norm() < 1e-14);
        assert!(t.apply(&unit(b.domain(), &[2, 3], &[0, 0])).iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn magnetic_ladder_oracle() {
        let b = basis();
        let f = FieldSpec::constant(2, vec![1.5]).unwrap();
        let mag = assemble_magnetic(&b, &f).unwrap();
        let (n1, n2) = (2usize, 3usize);
        let y = mag.apply(&unit(b.domain(), &[n1, n2], &[0, 0]));
        let cod = b.codomain();
        let up = cod.index(&[n1 + 1, n2 - 1], &[0, 0]).unwrap();
        let down = cod.index(&[n1 - 1, n2 + 1], &[0, 0]).unwrap();
        assert!((y[up] - c(1.5 * ((n2 * (n1 + 1)) as f64).sqrt())).norm() < 1e-12);
        assert!((y[down] - c(-1.5 * ((n1 * (n2 + 1)) as f64).sqrt())).norm() < 1e-12);
        assert_eq!(y.iter().filter(|v| v.norm() > 0.0).count(), 2);
        assert_eq!(assemble_magnetic(&b, &FieldSpec::zero(2).unwrap()).unwrap().matrix.nnz(), 0);
    }

    #[test]
    fn variable_field_bandwidth() {
        let b = HermiteFourierBasis::new(2, 3, 2).unwrap();
        let f = FieldSpec::trig(2, vec![1.0], &[TrigTerm { mode: vec![1, 0], cos: vec![0.5], sin: vec![] }]).unwrap();
        let mag = assemble_magnetic(&b, &f).unwrap();
        let (dom, cod) = (b.domain(), b.codomain());
        let mut band = 0;
        for (i, j, _) in mag.matrix.triplets() {
            let (_, mi) = cod.decode(i);
            let (_, mj) = dom.decode(j);
            band = band.max(mi.iter().zip(&mj).map(|(a, b)| (a - b).abs()).max().unwrap());
        }
        assert_eq!(band, 1);
        let wide = FieldSpec::trig(2, vec![0.0], &[TrigTerm { mode: vec![3, 0], cos: vec![1.0], sin: vec![] }]).unwrap();
        assert!(assemble_magnetic(&b, &wide).is_err());
    }

    #[test]
    fn kernel_vector_and_shift() {
        let b = basis();
        let f = FieldSpec::constant(2, vec![2.0]).unwrap();
        let e = unit(b.domain(), &[0, 0], &[0, 0]);
        let k0 = assemble_k(&b, &f, 0.0).unwrap();
        assert!(k0.apply(&e).iter().all(|v| v.norm() < 1e-15));
        let k = assemble_k(&b, &f, 2.0).unwrap();
        let y = k.apply(&e);
        assert_eq!(y[b.codomain().index(&[0, 0], &[0, 0]).unwrap()], c(2.0));
        let no_buffer = HermiteFourierBasis::with_buffer(2, 4, 1, 0).unwrap();
        assert!(assemble_k(&no_buffer, &f, 0.0).is_err());
    }

    #[test]
    fn b2_gram_ground_state() {
        // 15 terms for d = 2: 1 + 2·1 + 2·¼ + 2·3 + 1 + 2·3/16 + 1/16 + 2·¾ + 2·¼ = 207/16
        let b = basis();
        assert_eq!(b2_multi_indices(2).len(), 15);
        let g = assemble_b2_gram(&b).unwrap();
        let i = b.domain().index(&[0, 0], &[1, 0]).unwrap();
        assert!((g.matrix.get(i, i) - c(207.0 / 16.0)).norm() < 1e-12);
    }

    #[test]
    fn polydiffop_assembler_matches_k() {
        let b = basis();
        let rep = build_standard_rep(2).unwrap();
        for bv in [qf(0, 1), qf(1, 1), qf(-3, 2)] {
            let op = rep_apply(&rep, &build_ktilde(&bv, 2).unwrap()).unwrap();
            let generic = assemble_polydiffop(&b, &op).unwrap();
            let f = FieldSpec::constant(2, vec![crate::exact::q_to_f64(&bv)]).unwrap();
            let direct = assemble_k(&b, &f, 0.0).unwrap();
            assert!(generic.matrix.max_abs_diff(&direct.matrix).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rotated_and_direct_agree_on_axes() {
        let b = HermiteFourierBasis::new(3, 3, 1).unwrap();
        for v in [[0.0, 0.0, 2.0], [0.0, -1.5, 0.0], [3.0, 0.0, 0.0]] {
            let f = FieldSpec::constant(3, v.to_vec()).unwrap();
            let (t_r, m_r) = first_order_parts(&b, &f, D3Path::Rotated).unwrap();
            let (t_d, m_d) = first_order_parts(&b, &f, D3Path::Direct).unwrap();
            // an axis rotation permutes coordinates with signs: the Gram matrices of
            // the full first-order parts have the same spectrum block by block
            let gr = t_r.sub(&m_r).unwrap().gram().to_dense().symmetric_eigenvalues();
            let gd = t_d.sub(&m_d).unwrap().gram().to_dense().symmetric_eigenvalues();
            let mut a: Vec<f64> = gr.iter().copied().collect();
            let mut z: Vec<f64> = gd.iter().copied().collect();
            a.sort_by(f64::total_cmp);
            z.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&z) {
                assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{v:?}: {x} vs {y}");
            }
        }
    }
}
