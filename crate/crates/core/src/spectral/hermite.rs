//! One-dimensional Hermite matrices for `−∂² + v²/4` eigenfunctions:
//! `a e_n = √n e_{n−1}`, `a† e_n = √(n+1) e_{n+1}`, `v = a + a†`, `∂ = (a − a†)/2`.

use crate::error::{Error, Result};

fn lower(x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for n in 1..x.len() {
        y[n - 1] = (n as f64).sqrt() * x[n];
    }
    y
}

fn raise(x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for n in 0..x.len() - 1 {
        y[n + 1] = ((n + 1) as f64).sqrt() * x[n];
    }
    y
}

fn apply_v(x: &[f64]) -> Vec<f64> {
    lower(x).iter().zip(raise(x)).map(|(a, b)| a + b).collect()
}

fn apply_d(x: &[f64]) -> Vec<f64> {
    lower(x).iter().zip(raise(x)).map(|(a, b)| 0.5 * (a - b)).collect()
}

/// Column-sparse matrix of `v^p ∂^q` from degrees `< n_dom` to degrees `< n_cod`.
/// Column `n` lists `(row, value)` pairs. Fails when the image leaves the codomain.
pub fn monomial_1d(p: u32, q: u32, n_dom: usize, n_cod: usize) -> Result<Vec<Vec<(usize, f64)>>> {
    let len = n_dom + (p + q) as usize + 1;
    let mut cols = Vec::with_capacity(n_dom);
    for n in 0..n_dom {
        let mut x = vec![0.0; len];
        x[n] = 1.0;
        for _ in 0..q {
            x = apply_d(&x);
        }
        for _ in 0..p {
            x = apply_v(&x);
        }
        let mut col = Vec::new();
        for (row, &val) in x.iter().enumerate() {
            if val != 0.0 {
                if row >= n_cod {
                    return Err(Error::InvalidBasis(format!(
                        "v^{p} ∂^{q} raises degree {n} to {row}, beyond codomain cutoff {n_cod}"
                    )));
                }
                col.push((row, val));
            }
        }
        cols.push(col);
    }
    Ok(cols)
}

/// `a` (`raising = false`) or `a†` as columns.
pub fn ladder_1d(raising: bool, n_dom: usize, n_cod: usize) -> Vec<Vec<(usize, f64)>> {
    (0..n_dom)
        .map(|n| {
            if raising {
                if n + 1 < n_cod {
                    vec![(n + 1, ((n + 1) as f64).sqrt())]
                } else {
                    vec![]
                }
            } else if n > 0 {
                vec![(n - 1, (n as f64).sqrt())]
            } else {
                vec![]
            }
        })
        .collect()
}
