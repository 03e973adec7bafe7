use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Tensor Hermite ⊗ Fourier index space: Hermite degrees `0..n` per velocity
/// dimension and Fourier modes `|m|_∞ ≤ kx`.
///
/// Index of `(h, m)` is `f(m) · n^d + h(h)`, Fourier-major, with both multi-indices
/// laid out first-component-slowest (`m_j` shifted by `kx`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    pub d: usize,
    pub n: usize,
    pub kx: usize,
}

impl Space {
    pub fn hermite_count(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn fourier_count(&self) -> usize {
        (2 * self.kx + 1).pow(self.d as u32)
    }

    pub fn dim(&self) -> usize {
        self.hermite_count() * self.fourier_count()
    }

    pub fn hermite_index(&self, h: &[usize]) -> usize {
        h.iter().fold(0, |acc, &x| acc * self.n + x)
    }

    pub fn hermite_multi(&self, mut i: usize) -> Vec<usize> {
        let mut h = vec![0; self.d];
        for slot in h.iter_mut().rev() {
            *slot = i % self.n;
            i /= self.n;
        }
        h
    }

    /// `None` when some `|m_j| > kx`.
    pub fn fourier_index(&self, m: &[i64]) -> Option<usize> {
        let w = 2 * self.kx as i64 + 1;
        m.iter().try_fold(0usize, |acc, &x| {
            let s = x + self.kx as i64;
            (0..w).contains(&s).then(|| acc * w as usize + s as usize)
        })
    }

    pub fn fourier_mode(&self, mut i: usize) -> Vec<i64> {
        let w = 2 * self.kx + 1;
        let mut m = vec![0; self.d];
        for slot in m.iter_mut().rev() {
            *slot = (i % w) as i64 - self.kx as i64;
            i /= w;
        }
        m
    }

    pub fn index(&self, h: &[usize], m: &[i64]) -> Option<usize> {
        if h.len() != self.d || m.len() != self.d || h.iter().any(|&x| x >= self.n) {
            return None;
        }
        Some(self.fourier_index(m)? * self.hermite_count() + self.hermite_index(h))
    }

    /// `(Hermite multi-index, Fourier mode)` of a flat index.
    pub fn decode(&self, i: usize) -> (Vec<usize>, Vec<i64>) {
        let hc = self.hermite_count();
        (self.hermite_multi(i % hc), self.fourier_mode(i / hc))
    }

    pub fn modes(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.fourier_count()).map(|f| self.fourier_mode(f))
    }
}

/// Truncated basis: domain cutoff `nv`, codomain cutoff `nv + buffer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HermiteFourierBasis {
    pub d: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
    #[serde(rename = "Kx")]
    pub kx: usize,
    pub buffer: usize,
}

impl HermiteFourierBasis {
    pub const DEFAULT_BUFFER: usize = 2;

    pub fn new(d: usize, nv: usize, kx: usize) -> Result<Self> {
        Self::with_buffer(d, nv, kx, Self::DEFAULT_BUFFER)
    }

    pub fn with_buffer(d: usize, nv: usize, kx: usize, buffer: usize) -> Result<Self> {
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if nv == 0 {
            return Err(Error::InvalidBasis("Nv must be at least 1".into()));
        }
        let b = Self { d, nv, kx, buffer };
        if b.codomain().dim() > 50_000_000 {
            return Err(Error::InvalidBasis(format!("basis too large ({} codomain entries)", b.codomain().dim())));
        }
        Ok(b)
    }

    pub fn domain(&self) -> Space {
        Space { d: self.d, n: self.nv, kx: self.kx }
    }

    pub fn codomain(&self) -> Space {
        Space { d: self.d, n: self.nv + self.buffer, kx: self.kx }
    }

    pub fn dim(&self) -> usize {
        self.domain().dim()
    }

    /// Codomain index of each domain basis vector.
    pub fn embedding(&self) -> Vec<usize> {
        let (dom, cod) = (self.domain(), self.codomain());
        (0..dom.dim())
            .map(|i| {
                let (h, m) = dom.decode(i);
                cod.index(&h, &m).expect("domain embeds in codomain")
            })
            .collect()
    }

    pub fn descriptor(&self) -> String {
        format!("hermite-fourier;d={};Nv={};Kx={};buffer={};order=fourier-major", self.d, self.nv, self.kx, self.buffer)
    }

    /// First 16 hex digits of the SHA-256 of [`Self::descriptor`].
    pub fn descriptor_hash(&self) -> String {
        let digest = Sha256::digest(self.descriptor().as_bytes());
        hex::encode(&digest[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_maps_are_bijective() {
        for (d, n, kx) in [(2, 3, 1), (3, 2, 2), (2, 5, 0)] {
            let s = Space { d, n, kx };
            for i in 0..s.dim() {
                let (h, m) = s.decode(i);
                assert_eq!(s.index(&h, &m), Some(i));
            }
        }
    }

    #[test]
    fn dimensions() {
        let b = HermiteFourierBasis::new(2, 8, 2).unwrap();
        assert_eq!(b.dim(), 64 * 25);
        assert_eq!(b.codomain().dim(), 100 * 25);
        let e = b.embedding();
        assert_eq!(e.len(), b.dim());
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert!(HermiteFourierBasis::new(4, 8, 2).is_err());
        assert!(HermiteFourierBasis::new(2, 0, 2).is_err());
    }

    #[test]
    fn out_of_range_modes() {
        let s = Space { d: 2, n: 3, kx: 1 };
        assert_eq!(s.fourier_index(&[2, 0]), None);
        assert_eq!(s.index(&[3, 0], &[0, 0]), None);
        assert_eq!(s.fourier_mode(0), vec![-1, -1]);
    }

    #[test]
    fn descriptor_hash_is_stable() {
        let b = HermiteFourierBasis::new(2, 8, 2).unwrap();
        assert_eq!(b.descriptor_hash().len(), 16);
        assert_eq!(b.descriptor_hash(), HermiteFourierBasis::new(2, 8, 2).unwrap().descriptor_hash());
        assert_ne!(b.descriptor_hash(), HermiteFourierBasis::new(2, 8, 1).unwrap().descriptor_hash());
    }
}
