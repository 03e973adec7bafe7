//! Verification toolkit for the kinetic Fokker–Planck operator with an external
//! magnetic field,
//!
//! ```text
//! K = v·∇_x − (v∧B_e)·∇_v − Δ_v + v²/4 − d/2   on 𝕋^d × ℝ^d, d ∈ {2, 3}.
//! ```
//!
//! * [`lie`]: exact graded nilpotent Lie algebras, enveloping algebras and dilations.
//! * [`weyl`]: exact polynomial-coefficient differential operators, the standard
//!   representation and the symbolic identities built on it.
//! * [`spectral`]: Hermite–Fourier discretization of `K`, the maximal-estimate
//!   pencil, accretivity and resolvent checks.

pub mod error;
pub mod exact;
pub mod lie;
pub mod linalg_q;
pub mod report;
pub mod spectral;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};
pub use report::CheckReport;
