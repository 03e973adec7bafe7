//! Small exact linear-algebra kernels over the rationals.

use num_traits::{One, Zero};

use crate::exact::Q;

/// Incrementally maintained row-echelon basis of a subspace of `Q^n`.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    /// Each row is normalized so that its pivot entry equals one.
    rows: Vec<(usize, Vec<Q>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Residual of `v` after elimination against the stored rows.
    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut r = v.to_vec();
        for (pivot, row) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let f = r[*pivot].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &r[pivot];
        for x in r.iter_mut() {
            *x *= &inv;
        }
        // keep rows fully reduced so reduce() needs a single pass
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<Q>], dim: usize) -> usize {
    let mut e = EchelonBasis::new(dim);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}` for `M` given by rows over `Q^dim`, in reduced form
/// (one vector per free column, with a one in that column).
pub fn nullspace(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut e = EchelonBasis::new(dim);
    for r in rows {
        e.insert(r);
    }
    let pivots: Vec<usize> = e.rows.iter().map(|(p, _)| *p).collect();
    let mut out = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Q::zero(); dim];
        x[free] = Q::one();
        for (p, row) in &e.rows {
            x[*p] = -row[free].clone();
        }
        out.push(x);
    }
    out
}

/// Solves `Σ_j x_j col_j = target` when the columns are independent.
///
/// Returns `None` when the target is outside the span, and panics when the
/// columns are dependent (the coordinates would not be unique).
pub fn solve_in_span(cols: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let n = cols.len();
    let m = target.len();
    assert!(cols.iter().all(|c| c.len() == m));
    // augmented rows [A | b]
    let mut rows: Vec<Vec<Q>> = (0..m)
        .map(|i| cols.iter().map(|c| c[i].clone()).chain(std::iter::once(target[i].clone())).collect())
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(r) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            panic!("columns are linearly dependent");
        };
        rows.swap(pivot_row, r);
        let inv = Q::one() / &rows[pivot_row][col];
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let prow = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = EchelonBasis::new(3);
        assert!(e.insert(&v(&[1, 2, 3])));
        assert!(e.insert(&v(&[0, 1, 1])));
        assert!(!e.insert(&v(&[2, 5, 7])));
        assert!(e.contains(&v(&[1, 3, 4])));
        assert!(!e.contains(&v(&[0, 0, 1])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn solves_in_span() {
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve_in_span(&cols, &v(&[2, 3, 5])), Some(v(&[2, 3])));
        assert_eq!(solve_in_span(&cols, &v(&[2, 3, 4])), None);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![v(&[1, 1, 0, 0]), v(&[0, 0, 1, -1])];
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for row in &m {
                let dot: Q = row.iter().zip(x).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
