//! Graded nilpotent Lie algebras, their enveloping algebras and dilations.

mod algebra;
mod enveloping;
pub mod json;

pub use algebra::{
    build_algebra, build_algebra_d2, build_algebra_d3, check_grading_stratified, check_jacobi,
    standard_generator_names, AlgebraElement, GradedLieAlgebra,
};
pub use enveloping::{build_ktilde, build_ktilde_in, DilationAction, EnvelopingPolynomial, FormalDilation, Word};
