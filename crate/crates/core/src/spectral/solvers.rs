//! Krylov solvers on complex vectors: preconditioned CG for Hermitian
//! positive-definite systems and restarted GMRES with optional deflation.

use super::sparse::{dot, norm, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveInfo {
    pub iterations: usize,
    pub residual: f64,
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Jacobi-preconditioned conjugate gradients for `A x = b`; `residual` is
/// `‖b − Ax‖ / ‖b‖`.
pub fn conjugate_gradient(
    apply: impl Fn(&[C64]) -> Vec<C64>,
    diag: &[f64],
    b: &[C64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<C64>, SolveInfo)> {
    let n = b.len();
    let bn = norm(b);
    if bn == 0.0 {
        return Ok((vec![C64::new(0.0, 0.0); n], SolveInfo { iterations: 0, residual: 0.0 }));
    }
    let precond = |r: &[C64]| r.iter().zip(diag).map(|(v, d)| v / d).collect::<Vec<_>>();
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z).re;
    for it in 1..=max_iter {
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap).re;
        axpy(&mut x, C64::new(alpha, 0.0), &p);
        axpy(&mut r, C64::new(-alpha, 0.0), &ap);
        let res = norm(&r) / bn;
        if res <= tol {
            return Ok((x, SolveInfo { iterations: it, residual: res }));
        }
        z = precond(&r);
        let rz_new = dot(&r, &z).re;
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    let res = norm(&r) / bn;
    Err(Error::NoConvergence { iterations: max_iter, residual: res })
}

/// Restarted, right-preconditioned GMRES for `A x = b`.
///
/// With `deflate = Some(k)` (unit vector), iterates and right-hand side are kept
/// orthogonal to `k`; this solves consistent singular systems whose kernel and
/// cokernel are spanned by `k`.
pub fn gmres(
    apply: impl Fn(&[C64]) -> Vec<C64>,
    diag: &[f64],
    b: &[C64],
    deflate: Option<&[C64]>,
    restart: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<C64>, SolveInfo)> {
    let n = b.len();
    let project = |v: &mut Vec<C64>| {
        if let Some(k) = deflate {
            let c = dot(k, v);
            axpy(v, -c, k);
        }
    };
    let precond = |r: &[C64]| {
        let mut z: Vec<C64> = r.iter().zip(diag).map(|(v, d)| v / d).collect();
        project(&mut z);
        z
    };
    let mut rhs = b.to_vec();
    project(&mut rhs);
    let bn = norm(&rhs);
    let mut x = vec![C64::new(0.0, 0.0); n];
    if bn == 0.0 {
        return Ok((x, SolveInfo { iterations: 0, residual: 0.0 }));
    }
    let residual_of = |x: &[C64]| {
        let ax = apply(x);
        let mut r: Vec<C64> = rhs.iter().zip(&ax).map(|(a, b)| a - b).collect();
        project(&mut r);
        r
    };
    let mut total = 0;
    let mut r = rhs.clone();
    let mut beta = bn;
    while total < max_iter {
        let m = restart.min(max_iter - total).max(1);
        let mut v: Vec<Vec<C64>> = vec![r.iter().map(|x| x / beta).collect()];
        let mut zs: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut h = vec![vec![C64::new(0.0, 0.0); m]; m + 1];
        let (mut cs, mut sn) = (vec![C64::new(0.0, 0.0); m], vec![C64::new(0.0, 0.0); m]);
        let mut g = vec![C64::new(0.0, 0.0); m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k_used = 0;
        for k in 0..m {
            let z = precond(&v[k]);
            let mut w = apply(&z);
            project(&mut w);
            zs.push(z);
            for (i, vi) in v.iter().enumerate() {
                h[i][k] = dot(vi, &w);
                axpy(&mut w, -h[i][k], vi);
            }
            // second pass for orthogonality
            for (i, vi) in v.iter().enumerate() {
                let c = dot(vi, &w);
                h[i][k] += c;
                axpy(&mut w, -c, vi);
            }
            let wn = norm(&w);
            h[k + 1][k] = C64::new(wn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[i][k] + sn[i].conj() * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let (a, bb) = (h[k][k], h[k + 1][k]);
            let den = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if den == 0.0 {
                cs[k] = C64::new(1.0, 0.0);
                sn[k] = C64::new(0.0, 0.0);
            } else {
                cs[k] = a / den;
                sn[k] = bb / den;
            }
            h[k][k] = cs[k].conj() * a + sn[k].conj() * bb;
            h[k + 1][k] = C64::new(0.0, 0.0);
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k].conj() * g[k];
            k_used = k + 1;
            total += 1;
            if g[k + 1].norm() / bn <= tol * 0.1 || wn == 0.0 {
                break;
            }
            v.push(w.iter().map(|x| x / wn).collect());
        }
        let mut y = vec![C64::new(0.0, 0.0); k_used];
        for i in (0..k_used).rev() {
            let s: C64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (zi, yi) in zs.iter().zip(&y) {
            axpy(&mut x, *yi, zi);
        }
        r = residual_of(&x);
        beta = norm(&r);
        if beta / bn <= tol {
            return Ok((x, SolveInfo { iterations: total, residual: beta / bn }));
        }
    }
    Err(Error::NoConvergence { iterations: total, residual: beta / bn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::sparse::CsrMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tridiag(n: usize, skew: f64) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, c(2.0 + i as f64, 0.0)));
            if i + 1 < n {
                t.push((i, i + 1, c(-1.0, skew)));
                t.push((i + 1, i, c(-1.0, -skew)));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn cg_solves_hermitian_system() {
        let a = tridiag(50, 0.5);
        let b: Vec<C64> = (0..50).map(|i| c(i as f64, 1.0)).collect();
        let diag: Vec<f64> = (0..50).map(|i| a.get(i, i).re).collect();
        let (x, info) = conjugate_gradient(|v| a.matvec(v), &diag, &b, 1e-12, 500).unwrap();
        let r: Vec<C64> = a.matvec(&x).iter().zip(&b).map(|(u, v)| u - v).collect();
        assert!(norm(&r) / norm(&b) < 1e-11);
        assert!(info.iterations > 0);
    }

    #[test]
    fn gmres_solves_nonnormal_system() {
        let n = 60;
        let mut t: Vec<(usize, usize, C64)> = tridiag(n, 0.0).triplets().collect();
        for i in 0..n - 1 {
            t.push((i, i + 1, c(0.0, 3.0)));
            t.push((i + 1, i, c(0.0, 3.0)));
        }
        let a = CsrMatrix::from_triplets(n, n, t);
        let b: Vec<C64> = (0..n).map(|i| c((i as f64).sin(), 0.5)).collect();
        let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        let (x, info) = gmres(|v| a.matvec(v), &diag, &b, None, 20, 1e-12, 2000).unwrap();
        let r: Vec<C64> = a.matvec(&x).iter().zip(&b).map(|(u, v)| u - v).collect();
        assert!(norm(&r) / norm(&b) < 1e-11, "{info:?}");
    }

    #[test]
    fn gmres_reports_non_convergence() {
        let a = tridiag(40, 0.3);
        let b = vec![c(1.0, 0.0); 40];
        let err = gmres(|v| a.matvec(v), &[1.0; 40], &b, None, 2, 1e-14, 3).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 3, .. }));
    }
}
