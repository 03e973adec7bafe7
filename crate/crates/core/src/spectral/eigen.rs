//! Largest eigenpair of a Hermitian definite pencil `A x = λ B x` (`B ≻ 0`), and
//! extreme eigenvalues of Hermitian matrices.
//!
//! The pattern of `A` and `B` is split into connected components first. Each
//! component is solved densely (Cholesky of `B`, Hermitian eigensolve of
//! `L⁻¹AL⁻ᴴ`) when small, otherwise by Lanczos in the `B`-inner product with
//! conjugate-gradient solves for `B`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solvers::conjugate_gradient;
use super::sparse::{components, dot, norm, CsrMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative residual `‖Ax − λBx‖ / (|λ|‖Bx‖)` required of the returned pair.
    pub tol: f64,
    pub max_iter: usize,
    /// Components up to this size are solved densely.
    pub dense_limit: usize,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000, dense_limit: 2_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PencilSolution {
    pub lambda: f64,
    /// Eigenvector on the full index set, normalized to `xᴴBx = 1`.
    pub vector: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
    pub components: usize,
    pub largest_component: usize,
    pub method: Method,
}

struct Local {
    lambda: f64,
    vector: Vec<C64>,
    iterations: usize,
    method: Method,
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn dense_pencil(a: &CsrMatrix, b: &CsrMatrix) -> Result<Local> {
    let bd = hermitian_part(&b.to_dense());
    let ad = hermitian_part(&a.to_dense());
    let chol = nalgebra::Cholesky::new(bd).ok_or_else(|| Error::Dimension("B is not positive definite".into()))?;
    let l = chol.l();
    let y = l.solve_lower_triangular(&ad).expect("nonsingular factor");
    let c = l.solve_lower_triangular(&y.adjoint()).expect("nonsingular factor").adjoint();
    let eig = SymmetricEigen::new(hermitian_part(&c));
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty component");
    let z = eig.eigenvectors.column(k).into_owned();
    let x = l.adjoint().solve_upper_triangular(&z).expect("nonsingular factor");
    Ok(Local { lambda, vector: x.iter().copied().collect(), iterations: 1, method: Method::Dense })
}

fn residual(a: &CsrMatrix, b: &CsrMatrix, lambda: f64, x: &[C64]) -> f64 {
    let ax = a.matvec(x);
    let bx = b.matvec(x);
    let r: Vec<C64> = ax.iter().zip(&bx).map(|(p, q)| p - lambda * q).collect();
    let scale = lambda.abs() * norm(&bx);
    if scale == 0.0 {
        norm(&r)
    } else {
        norm(&r) / scale
    }
}

/// Lanczos for the largest eigenvalue of `B⁻¹A`, self-adjoint in `⟨x, y⟩_B`,
/// with full reorthogonalization and explicit restarts from the best Ritz vector.
fn lanczos_pencil(a: &CsrMatrix, b: &CsrMatrix, opts: &SolverOptions, seed: u64) -> Result<Local> {
    let n = a.nrows();
    let diag: Vec<f64> = (0..n).map(|i| b.get(i, i).re.max(f64::MIN_POSITIVE)).collect();
    let solve_b = |r: &[C64]| -> Result<Vec<C64>> {
        Ok(conjugate_gradient(|v| b.matvec(v), &diag, r, 1e-13, 20_000)?.0)
    };
    let b_normalize = |x: &mut Vec<C64>| {
        let s = dot(x, &b.matvec(x)).re.sqrt();
        x.iter_mut().for_each(|v| *v /= s);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    b_normalize(&mut start);
    let max_basis = 120.min(n);
    let mut iterations = 0;
    let mut best = (f64::NEG_INFINITY, start.clone(), f64::INFINITY);
    while iterations < opts.max_iter {
        let mut qs: Vec<Vec<C64>> = vec![start.clone()];
        let mut bqs: Vec<Vec<C64>> = vec![b.matvec(&start)];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..max_basis {
            iterations += 1;
            let aq = a.matvec(&qs[j]);
            alpha.push(dot(&qs[j], &aq).re);
            let mut w = solve_b(&aq)?;
            for _ in 0..2 {
                for (q, bq) in qs.iter().zip(&bqs) {
                    let c = dot(bq, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
                }
            }
            let bw = b.matvec(&w);
            let bnorm = dot(&w, &bw).re.max(0.0).sqrt();
            let k = alpha.len();
            let check = (k % 5 == 0) || bnorm < 1e-14 || j + 1 == max_basis || iterations >= opts.max_iter;
            if check {
                let t = DMatrix::from_fn(k, k, |r, c| {
                    if r == c {
                        alpha[r]
                    } else if r + 1 == c {
                        beta[r]
                    } else if c + 1 == r {
                        beta[c]
                    } else {
                        0.0
                    }
                });
                let eig = SymmetricEigen::new(t);
                let (idx, &theta) = eig.eigenvalues.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap();
                let s = eig.eigenvectors.column(idx);
                let mut x = vec![C64::new(0.0, 0.0); n];
                for (q, &si) in qs.iter().zip(s.iter()) {
                    x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += si * qi);
                }
                b_normalize(&mut x);
                let res = residual(a, b, theta, &x);
                if res < best.2 || theta > best.0 {
                    best = (theta, x.clone(), res);
                }
                if res <= opts.tol {
                    return Ok(Local { lambda: theta, vector: x, iterations, method: Method::Lanczos });
                }
                if bnorm < 1e-14 || j + 1 == max_basis || iterations >= opts.max_iter {
                    start = x;
                    break;
                }
            }
            beta.push(bnorm);
            qs.push(w.iter().map(|v| v / bnorm).collect());
            bqs.push(bw.iter().map(|v| v / bnorm).collect());
        }
    }
    Err(Error::NoConvergence { iterations, residual: best.2 })
}

/// Largest eigenpair of the Hermitian definite pencil `(A, B)`.
pub fn pencil_max(a: &CsrMatrix, b: &CsrMatrix, opts: &SolverOptions) -> Result<PencilSolution> {
    let n = a.nrows();
    if !a.is_square() || !b.is_square() || b.nrows() != n {
        return Err(Error::Dimension("pencil matrices must be square and of equal size".into()));
    }
    if n == 0 {
        return Err(Error::Dimension("empty pencil".into()));
    }
    let comps = components(n, &[a, b]);
    let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
    let locals: Vec<Result<Local>> = comps
        .par_iter()
        .enumerate()
        .map(|(ci, idx)| {
            let (ac, bc) = (a.submatrix(idx, idx), b.submatrix(idx, idx));
            if idx.len() <= opts.dense_limit {
                dense_pencil(&ac, &bc)
            } else {
                lanczos_pencil(&ac, &bc, opts, opts.seed.wrapping_add(ci as u64))
            }
        })
        .collect();
    let mut best: Option<(usize, Local)> = None;
    let mut iterations = 0;
    let mut method = Method::Dense;
    for (ci, local) in locals.into_iter().enumerate() {
        let local = local?;
        iterations += local.iterations;
        if local.method == Method::Lanczos {
            method = Method::Lanczos;
        }
        if best.as_ref().map_or(true, |(_, b)| local.lambda > b.lambda) {
            best = Some((ci, local));
        }
    }
    let (ci, local) = best.expect("at least one component");
    let mut vector = vec![C64::new(0.0, 0.0); n];
    for (&i, v) in comps[ci].iter().zip(&local.vector) {
        vector[i] = *v;
    }
    let s = dot(&vector, &b.matvec(&vector)).re.sqrt();
    vector.iter_mut().for_each(|v| *v /= s);
    let res = residual(a, b, local.lambda, &vector);
    if res > opts.tol {
        return Err(Error::NoConvergence { iterations, residual: res });
    }
    Ok(PencilSolution {
        lambda: local.lambda,
        vector,
        residual: res,
        iterations,
        components: comps.len(),
        largest_component: largest,
        method,
    })
}

/// Smallest eigenvalue of a Hermitian matrix with `‖Sx − μx‖` for its unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMin {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
    pub components: usize,
    pub method: Method,
}

pub fn hermitian_min(s: &CsrMatrix, opts: &SolverOptions) -> Result<HermitianMin> {
    let n = s.nrows();
    let comps = components(n, &[s]);
    let results: Vec<Result<(f64, Vec<C64>, Method)>> = comps
        .par_iter()
        .enumerate()
        .map(|(ci, idx)| {
            let sc = s.submatrix(idx, idx);
            if idx.len() <= opts.dense_limit {
                let eig = SymmetricEigen::new(hermitian_part(&sc.to_dense()));
                let (k, &mu) = eig.eigenvalues.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap();
                Ok((mu, eig.eigenvectors.column(k).iter().copied().collect(), Method::Dense))
            } else {
                // largest eigenvalue of the shifted, negated matrix c − S ⪰ 0
                let shift = gershgorin_upper(&sc);
                let neg = CsrMatrix::identity(idx.len()).scale(C64::new(shift, 0.0)).sub(&sc)?;
                let id = CsrMatrix::identity(idx.len());
                let abs_opts = SolverOptions { tol: opts.tol * 1e-2, ..*opts };
                let local = lanczos_pencil(&neg, &id, &abs_opts, opts.seed.wrapping_add(ci as u64))?;
                Ok((shift - local.lambda, local.vector, Method::Lanczos))
            }
        })
        .collect();
    let mut best: Option<(usize, f64, Vec<C64>)> = None;
    let mut method = Method::Dense;
    for (ci, r) in results.into_iter().enumerate() {
        let (mu, v, m) = r?;
        if m == Method::Lanczos {
            method = m;
        }
        if best.as_ref().map_or(true, |b| mu < b.1) {
            best = Some((ci, mu, v));
        }
    }
    let (ci, value, local) = best.ok_or_else(|| Error::Dimension("empty matrix".into()))?;
    let mut vector = vec![C64::new(0.0, 0.0); n];
    for (&i, v) in comps[ci].iter().zip(&local) {
        vector[i] = *v;
    }
    let nv = norm(&vector);
    vector.iter_mut().for_each(|v| *v /= nv);
    let sx = s.matvec(&vector);
    let r: Vec<C64> = sx.iter().zip(&vector).map(|(p, q)| p - value * q).collect();
    Ok(HermitianMin { value, vector, residual: norm(&r), components: comps.len(), method })
}

fn gershgorin_upper(s: &CsrMatrix) -> f64 {
    (0..s.nrows()).map(|i| s.row(i).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max) + 1.0
}

/// Largest eigenvalue of `(A, B)` from one dense solve of the whole pencil,
/// ignoring the component structure.
pub fn dense_pencil_max(a: &CsrMatrix, b: &CsrMatrix) -> Result<f64> {
    Ok(dense_pencil(a, b)?.lambda)
}

/// Dense Hermitian eigenvalues in ascending order (test and oracle helper).
pub fn dense_hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `xᴴ M x` for a Hermitian `M`.
pub fn quadratic_form(m: &CsrMatrix, x: &[C64]) -> f64 {
    dot(x, &m.matvec(x)).re
}

pub fn to_dvector(x: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_pencil(n: usize, seed: u64) -> (CsrMatrix, CsrMatrix) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ta = Vec::new();
        let mut tb = Vec::new();
        for i in 0..n {
            ta.push((i, i, c(rng.gen_range(0.0..3.0))));
            tb.push((i, i, c(2.0 + rng.gen_range(0.0..1.0))));
            if i + 1 < n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                ta.push((i, i + 1, z));
                ta.push((i + 1, i, z.conj()));
                let w = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                tb.push((i, i + 1, w));
                tb.push((i + 1, i, w.conj()));
            }
        }
        (CsrMatrix::from_triplets(n, n, ta), CsrMatrix::from_triplets(n, n, tb))
    }

    #[test]
    fn self_pencil_gives_one() {
        let (_, b) = random_pencil(40, 1);
        let sol = pencil_max(&b, &b, &SolverOptions::default()).unwrap();
        assert!((sol.lambda - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lanczos_matches_dense() {
        let (a, b) = random_pencil(300, 7);
        let dense = pencil_max(&a, &b, &SolverOptions::default()).unwrap();
        let it = pencil_max(&a, &b, &SolverOptions { dense_limit: 10, ..Default::default() }).unwrap();
        assert_eq!(dense.method, Method::Dense);
        assert_eq!(it.method, Method::Lanczos);
        assert!((dense.lambda - it.lambda).abs() < 1e-8 * dense.lambda.abs());
        assert!(it.residual <= 1e-8);
    }

    #[test]
    fn components_are_solved_separately() {
        let a = CsrMatrix::diagonal(&[c(1.0), c(5.0), c(3.0)]);
        let b = CsrMatrix::diagonal(&[c(1.0), c(2.0), c(1.0)]);
        let sol = pencil_max(&a, &b, &SolverOptions::default()).unwrap();
        assert_eq!(sol.components, 3);
        assert!((sol.lambda - 3.0).abs() < 1e-14);
        assert!(sol.vector[2].norm() > 0.99);
    }

    #[test]
    fn hermitian_min_dense_and_lanczos() {
        let (a, _) = random_pencil(200, 3);
        let d = hermitian_min(&a, &SolverOptions::default()).unwrap();
        let l = hermitian_min(&a, &SolverOptions { dense_limit: 5, ..Default::default() }).unwrap();
        let oracle = dense_hermitian_eigenvalues(&a.to_dense())[0];
        assert!((d.value - oracle).abs() < 1e-10);
        assert!((l.value - oracle).abs() < 1e-8, "{} vs {oracle}", l.value);
    }
}
