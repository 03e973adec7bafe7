//! Maximal-estimate constant, accretivity floor and resolvent solves on a
//! truncated Hermite–Fourier space.
//!
//! The estimate is measured in squared form: `λ_max` of the pencil
//! `A x = λ B x` with `B = K̄ᴴK̄ + I` is the smallest `C²` such that
//! `xᴴAx ≤ C²(‖K̄x‖² + ‖x‖²)` on the truncation.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assembly::{assemble_b2_gram, assemble_k_with, assemble_polydiffop, first_order_parts, D3Path, HermiteFourierOperator};
use super::basis::HermiteFourierBasis;
use super::eigen::{hermitian_min, pencil_max, quadratic_form, Method, SolverOptions};
use super::field::{FieldDoc, FieldSpec};
use super::solvers::gmres;
use super::sparse::{dot, norm, CsrMatrix, C64};
use crate::error::{Error, Result};
use crate::weyl::op::{phase_space_vars, PolyDiffOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateForm {
    /// `‖(v·∇_x − (v∧B)·∇_v)u‖² + ‖u‖²_{B̃²}`.
    Theorem,
    /// `‖X_{1,2}u‖² + Σ_k ‖(X'_k)²u‖² + ‖(X''_k)²u‖² + Σ_{k,l} ‖X'_k X''_l u‖²`.
    Ing11,
    /// Sum of the two forms above.
    Union,
    /// `A := B`; the answer is 1.
    SelfTest,
}

impl EstimateForm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Theorem => "theorem",
            Self::Ing11 => "ing11",
            Self::Union => "union",
            Self::SelfTest => "self_test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EstimateOptions {
    pub solver: SolverOptions,
    pub path: D3Path,
}

/// Assembled pencil with the pieces needed for Rayleigh diagnostics.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub a: CsrMatrix,
    pub b: CsrMatrix,
    pub k: HermiteFourierOperator,
    /// `v·∇_x − (v∧B)·∇_v` (rectangular).
    pub first_order: HermiteFourierOperator,
    pub b2_gram: CsrMatrix,
}

fn ing11_gram(basis: &HermiteFourierBasis, transport: &HermiteFourierOperator) -> Result<CsrMatrix> {
    let d = basis.d;
    let vars = phase_space_vars(d);
    let dv = |k: usize| PolyDiffOp::<Complex64>::derivative(vars.clone(), k);
    let iv = |k: usize| PolyDiffOp::<Complex64>::coordinate(vars.clone(), k).scale(&Complex64::new(0.0, 1.0));
    let mut words = Vec::new();
    for k in 0..d {
        words.push(dv(k).compose(&dv(k))?);
        words.push(iv(k).compose(&iv(k))?);
        for l in 0..d {
            words.push(dv(k).compose(&iv(l))?);
        }
    }
    let mut gram = transport.gram();
    for w in &words {
        gram = gram.add(&assemble_polydiffop(basis, w)?.gram())?;
    }
    Ok(gram)
}

pub fn build_pencil(basis: &HermiteFourierBasis, field: &FieldSpec, form: EstimateForm, path: D3Path) -> Result<Pencil> {
    let k = assemble_k_with(basis, field, 0.0, path)?;
    let n = basis.dim();
    let b = k.gram().add(&CsrMatrix::identity(n))?;
    let (transport, magnetic) = first_order_parts(basis, field, path)?;
    let first_order = transport.sub(&magnetic)?;
    let b2_gram = assemble_b2_gram(basis)?.matrix;
    let theorem = || first_order.gram().add(&b2_gram);
    let a = match form {
        EstimateForm::Theorem => theorem()?,
        EstimateForm::Ing11 => ing11_gram(basis, &transport)?,
        EstimateForm::Union => theorem()?.add(&ing11_gram(basis, &transport)?)?,
        EstimateForm::SelfTest => b.clone(),
    };
    Ok(Pencil { a, b, k, first_order, b2_gram })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rayleigh {
    /// `xᴴGx` for the `B`-normalized eigenvector.
    pub b2: f64,
    /// `‖(v·∇_x − (v∧B)·∇_v)x‖²`.
    pub transport: f64,
    /// `‖K̄x‖²`.
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverInfo {
    pub method: Method,
    pub components: usize,
    pub largest_component: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub d: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
    #[serde(rename = "Kx")]
    pub kx: usize,
    pub buffer: usize,
    pub field: FieldDoc,
    pub form: EstimateForm,
    pub lambda_max: f64,
    pub residual: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    pub basis_hash: String,
    pub rayleigh: Rayleigh,
    pub solver: SolverInfo,
}

pub fn maximal_constant(basis: &HermiteFourierBasis, field: &FieldSpec, form: EstimateForm) -> Result<EstimateReport> {
    maximal_constant_with(basis, field, form, &EstimateOptions::default())
}

pub fn maximal_constant_with(
    basis: &HermiteFourierBasis,
    field: &FieldSpec,
    form: EstimateForm,
    opts: &EstimateOptions,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let pencil = build_pencil(basis, field, form, opts.path)?;
    let sol = pencil_max(&pencil.a, &pencil.b, &opts.solver)?;
    let x = &sol.vector;
    let kx = pencil.k.apply(x);
    let tx = pencil.first_order.apply(x);
    let rayleigh = Rayleigh {
        b2: quadratic_form(&pencil.b2_gram, x),
        transport: dot(&tx, &tx).re,
        k: dot(&kx, &kx).re,
    };
    Ok(EstimateReport {
        d: basis.d,
        nv: basis.nv,
        kx: basis.kx,
        buffer: basis.buffer,
        field: field.to_doc(),
        form,
        lambda_max: sol.lambda,
        residual: sol.residual,
        iterations: sol.iterations,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        basis_hash: basis.descriptor_hash(),
        rayleigh,
        solver: SolverInfo {
            method: sol.method,
            components: sol.components,
            largest_component: sol.largest_component,
            dimension: basis.dim(),
        },
    })
}

/// Entries of the Hermitian part below this magnitude are rounding noise from
/// the skew blocks and are dropped before the eigensolve.
pub const HERMITIAN_DROP_TOL: f64 = 1e-13;

/// Hermitian part `½(K̄ + K̄ᴴ)` of the square restriction of `K + λ`, with the
/// absolute mass of dropped entries.
pub fn hermitian_part(basis: &HermiteFourierBasis, field: &FieldSpec, lambda_shift: f64, path: D3Path) -> Result<(CsrMatrix, f64)> {
    let sq = assemble_k_with(basis, field, lambda_shift, path)?.square();
    let h = sq.add(&sq.adjoint())?.scale(C64::new(0.5, 0.0));
    Ok(h.drop_small(HERMITIAN_DROP_TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccretivityReport {
    pub d: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
    #[serde(rename = "Kx")]
    pub kx: usize,
    pub field: FieldDoc,
    pub lambda_shift: f64,
    pub floor: f64,
    pub residual: f64,
    pub dropped_mass: f64,
    pub components: usize,
    pub method: Method,
    pub wall_ms: f64,
}

impl AccretivityReport {
    pub fn accretive(&self) -> bool {
        self.floor >= -1e-10
    }
}

pub fn accretivity_floor(basis: &HermiteFourierBasis, field: &FieldSpec, lambda_shift: f64) -> Result<AccretivityReport> {
    accretivity_floor_with(basis, field, lambda_shift, &EstimateOptions::default())
}

pub fn accretivity_floor_with(
    basis: &HermiteFourierBasis,
    field: &FieldSpec,
    lambda_shift: f64,
    opts: &EstimateOptions,
) -> Result<AccretivityReport> {
    let start = Instant::now();
    let (h, dropped_mass) = hermitian_part(basis, field, lambda_shift, opts.path)?;
    let min = hermitian_min(&h, &opts.solver)?;
    Ok(AccretivityReport {
        d: basis.d,
        nv: basis.nv,
        kx: basis.kx,
        field: field.to_doc(),
        lambda_shift,
        floor: min.value,
        residual: min.residual,
        dropped_mass,
        components: min.components,
        method: min.method,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Maxwellian ⊗ constant: Hermite ground state on Fourier mode 0.
pub fn kernel_vector(basis: &HermiteFourierBasis) -> Vec<C64> {
    let dom = basis.domain();
    let mut x = vec![C64::new(0.0, 0.0); dom.dim()];
    let i = dom.index(&vec![0; basis.d], &vec![0; basis.d]).expect("mode 0 is always present");
    x[i] = C64::new(1.0, 0.0);
    x
}

/// Seeded complex vector with entries uniform in the unit square.
pub fn random_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSolution {
    pub u: Vec<C64>,
    /// `‖(K̄ + λ)u − f‖ / ‖f‖` by direct multiplication (`f` deflated when `λ = 0`).
    pub residual: f64,
    pub iterations: usize,
}

pub const RESOLVENT_TOL: f64 = 1e-10;

/// Solves `(K̄ + λ)u = f` on the square restriction. For `λ = 0` the kernel
/// vector is deflated: `f` is projected onto its orthogonal complement and `u`
/// is sought there.
pub fn resolvent_solve(basis: &HermiteFourierBasis, field: &FieldSpec, lambda_shift: f64, rhs: &[C64]) -> Result<ResolventSolution> {
    resolvent_solve_with(basis, field, lambda_shift, rhs, &EstimateOptions::default())
}

pub fn resolvent_solve_with(
    basis: &HermiteFourierBasis,
    field: &FieldSpec,
    lambda_shift: f64,
    rhs: &[C64],
    opts: &EstimateOptions,
) -> Result<ResolventSolution> {
    if !(lambda_shift >= 0.0 && lambda_shift.is_finite()) {
        return Err(Error::InvalidBasis(format!("resolvent shift must be finite and ≥ 0, got {lambda_shift}")));
    }
    let n = basis.dim();
    if rhs.len() != n {
        return Err(Error::Dimension(format!("rhs has {} entries, basis has {n}", rhs.len())));
    }
    let m = assemble_k_with(basis, field, lambda_shift, opts.path)?.square();
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let v = m.get(i, i).re;
            if v.abs() < 0.5 {
                1.0
            } else {
                v
            }
        })
        .collect();
    let kernel = kernel_vector(basis);
    let deflate = (lambda_shift == 0.0).then_some(kernel.as_slice());
    let (u, info) = gmres(|x| m.matvec(x), &diag, rhs, deflate, 60, RESOLVENT_TOL * 1e-2, opts.solver.max_iter)?;
    let mut f = rhs.to_vec();
    if let Some(k) = deflate {
        let c = dot(k, &f);
        f.iter_mut().zip(k).for_each(|(fi, ki)| *fi -= c * ki);
    }
    let mu = m.matvec(&u);
    let r: Vec<C64> = mu.iter().zip(&f).map(|(a, b)| a - b).collect();
    let fnorm = norm(&f);
    let residual = if fnorm == 0.0 { norm(&r) } else { norm(&r) / fnorm };
    if residual > RESOLVENT_TOL {
        return Err(Error::NoConvergence { iterations: info.iterations, residual });
    }
    Ok(ResolventSolution { u, residual, iterations: info.iterations })
}
