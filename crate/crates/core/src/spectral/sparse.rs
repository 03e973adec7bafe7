use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const PAR_ROWS: usize = 4096;

/// Compressed sparse row matrix with complex entries. Explicit zeros are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, indptr: vec![0; nrows + 1], indices: vec![], values: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(diag.len(), diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "entry ({i}, {j}) outside {nrows}x{ncols}");
            *rows[i].entry(j).or_insert(C64::new(0.0, 0.0)) += v;
        }
        Self::from_rows(ncols, rows)
    }

    fn from_rows(ncols: usize, rows: Vec<BTreeMap<usize, C64>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in &rows {
            for (&j, &v) in row {
                if v != C64::new(0.0, 0.0) {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { nrows: rows.len(), ncols, indptr, indices, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        let row = |i: usize| self.row(i).map(|(j, v)| v * x[j]).sum::<C64>();
        if self.nrows >= PAR_ROWS {
            (0..self.nrows).into_par_iter().map(row).collect()
        } else {
            (0..self.nrows).map(row).collect()
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); self.ncols];
        for (i, j, v) in self.triplets() {
            rows[j].insert(i, v.conj());
        }
        Self::from_rows(self.nrows, rows)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.prune();
        out
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| *v != C64::new(0.0, 0.0)) {
            return;
        }
        *self = Self::from_triplets(self.nrows, self.ncols, self.triplets().collect::<Vec<_>>());
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets().map(|(i, j, v)| (i, j, s * v))),
        ))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(())
    }

    /// `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let rows: Vec<BTreeMap<usize, C64>> = (0..self.nrows)
            .into_par_iter()
            .map(|i| {
                let mut acc = BTreeMap::new();
                for (k, a) in self.row(i) {
                    for (j, b) in other.row(k) {
                        *acc.entry(j).or_insert(C64::new(0.0, 0.0)) += a * b;
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_rows(other.ncols, rows))
    }

    /// `selfᴴ · self`, the Gram matrix of the columns.
    pub fn gram(&self) -> Self {
        self.adjoint().matmul(self).expect("conforming shapes")
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let out_rows = rows
            .iter()
            .map(|&r| {
                self.row(r).filter(|(j, _)| col_pos[*j] != usize::MAX).map(|(j, v)| (col_pos[j], v)).collect()
            })
            .collect();
        Self::from_rows(cols.len(), out_rows)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Drops entries with modulus at most `tol`; returns the largest row sum of
    /// dropped moduli (a bound on the induced eigenvalue perturbation for
    /// Hermitian matrices).
    pub fn drop_small(&self, tol: f64) -> (Self, f64) {
        let mut worst: f64 = 0.0;
        let rows = (0..self.nrows)
            .map(|i| {
                let mut dropped = 0.0;
                let kept = self
                    .row(i)
                    .filter(|(_, v)| {
                        let small = v.norm() <= tol;
                        if small {
                            dropped += v.norm();
                        }
                        !small
                    })
                    .collect();
                worst = worst.max(dropped);
                kept
            })
            .collect();
        (Self::from_rows(self.ncols, rows), worst)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Symmetric permutation `P A Pᵀ` with `new[i] = old[perm[i]]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.nrows);
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        Self::from_triplets(self.nrows, self.ncols, self.triplets().map(|(i, j, v)| (inv[i], inv[j], v)))
    }
}

/// Connected components of the union of the sparsity patterns, each sorted, listed
/// by smallest index.
pub fn components(n: usize, mats: &[&CsrMatrix]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for m in mats {
        assert!(m.nrows == n && m.ncols == n);
        for (i, j, _) in m.triplets() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = CsrMatrix::from_triplets(2, 3, [(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 2, c(0.0, 2.0))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 2), c(0.0, 2.0));
        assert_eq!(m.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn products_match_dense() {
        let a = CsrMatrix::from_triplets(3, 2, [(0, 0, c(1.0, 1.0)), (2, 1, c(2.0, 0.0)), (1, 0, c(0.0, -3.0))]);
        let b = CsrMatrix::from_triplets(2, 2, [(0, 1, c(1.0, 0.0)), (1, 0, c(0.5, 0.5))]);
        let p = a.matmul(&b).unwrap().to_dense();
        assert!((p - a.to_dense() * b.to_dense()).norm() < 1e-15);
        let g = a.gram().to_dense();
        assert!((g - a.to_dense().adjoint() * a.to_dense()).norm() < 1e-15);
        let x = vec![c(1.0, 2.0), c(-1.0, 0.5)];
        let y = a.matvec(&x);
        let yd = a.to_dense() * nalgebra::DVector::from_vec(x);
        assert!(y.iter().zip(yd.iter()).all(|(u, v)| (u - v).norm() < 1e-15));
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn component_split() {
        let m = CsrMatrix::from_triplets(5, 5, [(0, 3, c(1.0, 0.0)), (3, 0, c(1.0, 0.0)), (1, 1, c(2.0, 0.0))]);
        let n = CsrMatrix::from_triplets(5, 5, [(4, 3, c(1.0, 0.0))]);
        assert_eq!(components(5, &[&m, &n]), vec![vec![0, 3, 4], vec![1], vec![2]]);
    }

    #[test]
    fn submatrix_and_permutation() {
        let m = CsrMatrix::from_triplets(3, 3, [(0, 0, c(1.0, 0.0)), (1, 2, c(2.0, 0.0)), (2, 1, c(3.0, 0.0))]);
        let s = m.submatrix(&[2, 1], &[1, 2]);
        assert_eq!(s.get(0, 0), c(3.0, 0.0));
        assert_eq!(s.get(1, 1), c(2.0, 0.0));
        let p = m.permute_symmetric(&[2, 0, 1]);
        assert_eq!(p.get(0, 2), c(3.0, 0.0));
        assert_eq!(p.get(1, 1), c(1.0, 0.0));
    }

    #[test]
    fn drop_small_reports_mass() {
        let m = CsrMatrix::from_triplets(2, 2, [(0, 0, c(1.0, 0.0)), (0, 1, c(1e-16, 0.0)), (1, 0, c(2e-16, 0.0))]);
        let (k, mass) = m.drop_small(1e-14);
        assert_eq!(k.nnz(), 1);
        assert!((mass - 2e-16).abs() < 1e-30);
    }
}
