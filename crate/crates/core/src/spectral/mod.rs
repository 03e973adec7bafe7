//! Hermite–Fourier discretization of the magnetic Fokker–Planck operator on
//! `𝕋^d × ℝ^d` and the numerical experiments built on it.
//!
//! Velocity uses the normalized eigenfunctions of `−∂² + v²/4` with a tensor
//! cutoff `n_j < Nv`; space uses Fourier modes `|m_j| ≤ Kx`. Operators map the
//! domain into a codomain with `Nv + buffer` Hermite functions per dimension, so
//! second-order actions are represented without truncation.

pub mod assembly;
pub mod basis;
pub mod coo;
pub mod eigen;
pub mod estimate;
pub mod field;
pub mod hermite;
pub mod solvers;
pub mod sparse;

pub use assembly::{
    assemble_b2_gram, assemble_embedding, assemble_k, assemble_k_with, assemble_magnetic, assemble_oscillator,
    assemble_polydiffop, assemble_transport, first_order_parts, ladder_matrices, D3Path, HermiteFourierOperator,
};
pub use basis::{HermiteFourierBasis, Space};
pub use coo::{from_coo, to_coo, CooDocument};
pub use eigen::{dense_pencil_max, hermitian_min, pencil_max, Method, PencilSolution, SolverOptions};
pub use estimate::{
    accretivity_floor, accretivity_floor_with, build_pencil, hermitian_part, kernel_vector, maximal_constant, maximal_constant_with,
    random_vector, resolvent_solve, resolvent_solve_with, ResolventSolution, AccretivityReport, EstimateForm, EstimateOptions, EstimateReport, Pencil,
};
pub use field::{FieldDoc, FieldSpec, FourierTerm, TrigTerm};
pub use sparse::{CsrMatrix, C64};
