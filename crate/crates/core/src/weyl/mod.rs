//! Exact differential operators with polynomial coefficients and the standard
//! representation of the kinetic Lie algebras.

pub mod json;
pub mod models;
pub mod op;
pub mod rep;
pub mod rotation;

pub use op::{phase_space_vars, Coeff, Monomial, PolyDiffOp};
pub use rep::{
    build_standard_rep, check_homomorphism, check_skew, extract_induced_data, rep_apply, structure_from_images,
    symmetric_part_identity, InducedData, Representation, SymmetricPartReport,
};
pub use rotation::{conjugate_by_point_transform, conjugate_exact, rotation_matrix, RotationMatrix3};
