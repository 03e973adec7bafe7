//! The concrete operators of the kinetic model as exact [`PolyDiffOp`]s on the
//! variables `v1..vd, x1..xd`.

use super::op::{phase_space_vars, Coeff, Monomial, PolyDiffOp};
use crate::exact::{cq_real, qf, CQ};

fn term<C: Coeff>(d: usize, poly: &[(usize, u32)], deriv: &[(usize, u32)], c: C) -> PolyDiffOp<C> {
    let mut m = Monomial::constant(2 * d);
    for &(i, e) in poly {
        m.poly[i] += e;
    }
    for &(i, e) in deriv {
        m.deriv[i] += e;
    }
    PolyDiffOp::monomial(phase_space_vars(d), m, c)
}

fn sum<C: Coeff>(d: usize, parts: impl IntoIterator<Item = PolyDiffOp<C>>) -> PolyDiffOp<C> {
    parts
        .into_iter()
        .fold(PolyDiffOp::zero(phase_space_vars(d)), |acc, p| acc.add(&p).expect("same variables"))
}

/// `v·∇_x`.
pub fn transport<C: Coeff>(d: usize) -> PolyDiffOp<C> {
    sum(d, (0..d).map(|k| term(d, &[(k, 1)], &[(d + k, 1)], C::one())))
}

/// `v_i ∂_{v_j} − v_j ∂_{v_i}`.
pub fn rotation_generator<C: Coeff>(d: usize, i: usize, j: usize) -> PolyDiffOp<C> {
    term(d, &[(i, 1)], &[(j, 1)], C::one())
        .sub(&term(d, &[(j, 1)], &[(i, 1)], C::one()))
        .expect("same variables")
}

/// `(v∧b)·∇_v` for a constant three-component field:
/// `b_1(v_2∂_3 − v_3∂_2) + b_2(v_3∂_1 − v_1∂_3) + b_3(v_1∂_2 − v_2∂_1)`.
pub fn magnetic_d3<C: Coeff>(b: &[C; 3]) -> PolyDiffOp<C> {
    sum(
        3,
        [
            rotation_generator::<C>(3, 1, 2).scale(&b[0]),
            rotation_generator::<C>(3, 2, 0).scale(&b[1]),
            rotation_generator::<C>(3, 0, 1).scale(&b[2]),
        ],
    )
}

/// `−Δ_v + v²/4 − d/2`.
pub fn oscillator(d: usize) -> PolyDiffOp<CQ> {
    let mut parts = Vec::new();
    for k in 0..d {
        parts.push(term(d, &[], &[(k, 2)], cq_real(qf(-1, 1))));
        parts.push(term(d, &[(k, 2)], &[], cq_real(qf(1, 4))));
    }
    parts.push(PolyDiffOp::scalar(phase_space_vars(d), cq_real(qf(-(d as i64), 2))));
    sum(d, parts)
}

/// Constant-field model `v·∇_x − b(v_1∂_{v_2} − v_2∂_{v_1}) − Δ_v + v²/4 − d/2`.
///
/// For `d = 2` this is the full operator with field `b`; for `d = 3` it is the
/// operator with field `b·e_3`, i.e. the rotated normal form with `b = |B|`.
pub fn kinetic_operator(d: usize, b: &CQ) -> PolyDiffOp<CQ> {
    transport::<CQ>(d)
        .sub(&rotation_generator::<CQ>(d, 0, 1).scale(b))
        .and_then(|k| k.add(&oscillator(d)))
        .expect("same variables")
}
