use hypolab::exact::cq_int;
use hypolab::spectral::{
    assemble_b2_gram, assemble_k, assemble_oscillator, assemble_polydiffop, dense_pencil_max, hermitian_part,
    ladder_matrices, maximal_constant, D3Path, EstimateForm, FieldSpec, HermiteFourierBasis, TrigTerm, C64,
};
use hypolab::weyl::{phase_space_vars, Monomial, PolyDiffOp};

const STEP: f64 = 0.02;
const HALF_WIDTH: f64 = 30.0;

/// Normalized eigenfunctions of `−∂² + v²/4` and their derivatives on a grid,
/// from the probabilists' Hermite recurrence.
struct Grid {
    values: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
    points: Vec<f64>,
}

impl Grid {
    fn new(n: usize) -> Self {
        let count = (2.0 * HALF_WIDTH / STEP) as usize + 1;
        let points: Vec<f64> = (0..count).map(|i| -HALF_WIDTH + i as f64 * STEP).collect();
        let mut values = vec![vec![0.0; count]; n];
        let mut derivs = vec![vec![0.0; count]; n];
        for (i, &v) in points.iter().enumerate() {
            let mut he = vec![1.0, v];
            for k in 1..n {
                he.push(v * he[k] - k as f64 * he[k - 1]);
            }
            let gauss = (-v * v / 4.0).exp();
            let mut norm = (2.0 * std::f64::consts::PI).sqrt();
            for k in 0..n {
                if k > 0 {
                    norm *= k as f64;
                }
                let scale = gauss / norm.sqrt();
                values[k][i] = he[k] * scale;
                let lower = if k > 0 { k as f64 * he[k - 1] } else { 0.0 };
                derivs[k][i] = (lower - v / 2.0 * he[k]) * scale;
            }
        }
        Self { values, derivs, points }
    }

    /// `⟨e_m, v^p ∂^q e_n⟩` for `q ≤ 1`.
    fn element(&self, m: usize, n: usize, p: u32, q: u32) -> f64 {
        let f = if q == 0 { &self.values[n] } else { &self.derivs[n] };
        self.points.iter().enumerate().map(|(i, &v)| self.values[m][i] * v.powi(p as i32) * f[i]).sum::<f64>() * STEP
    }
}

fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut x = vec![C64::new(0.0, 0.0); n];
    x[i] = C64::new(1.0, 0.0);
    x
}

#[test]
fn velocity_monomials_match_quadrature() {
    let basis = HermiteFourierBasis::new(2, 8, 1).unwrap();
    let grid = Grid::new(12);
    let (dom, cod) = (basis.domain(), basis.codomain());
    for (p, q) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
        let mono = Monomial { poly: vec![p, 0, 0, 0], deriv: vec![q, 0, 0, 0] };
        let op = assemble_polydiffop(&basis, &PolyDiffOp::monomial(phase_space_vars(2), mono, cq_int(1))).unwrap();
        for n in 0..8 {
            let y = op.apply(&unit(dom.dim(), dom.index(&[n, 0], &[1, 0]).unwrap()));
            for m in 0..10 {
                let got = y[cod.index(&[m, 0], &[1, 0]).unwrap()];
                let want = grid.element(m, n, p, q);
                assert!((got - C64::new(want, 0.0)).norm() < 1e-11, "v^{p} ∂^{q}: <{m}|{n}> = {got} vs {want}");
            }
        }
    }
}

#[test]
fn ladder_operators_satisfy_canonical_commutation() {
    let basis = HermiteFourierBasis::new(2, 6, 1).unwrap();
    let lad = ladder_matrices(&basis);
    let (dom, cod) = (basis.domain(), basis.codomain());
    for (j, (a, adag)) in lad.iter().enumerate() {
        for n in 1..5 {
            let mut h = [2, 2];
            h[j] = n;
            let e = unit(dom.dim(), dom.index(&h, &[0, 1]).unwrap());
            let lowered = a.apply(&e);
            let raised = adag.apply(&e);
            let mut below = h;
            below[j] = n - 1;
            let mut above = h;
            above[j] = n + 1;
            let lo = lowered[cod.index(&below, &[0, 1]).unwrap()].re;
            let hi = raised[cod.index(&above, &[0, 1]).unwrap()].re;
            assert!((hi * hi - lo * lo - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hermitian_part_of_k_is_the_number_operator() {
    let basis = HermiteFourierBasis::new(2, 6, 2).unwrap();
    let field = FieldSpec::trig(2, vec![1.0], &[TrigTerm { mode: vec![1, 1], cos: vec![0.7], sin: vec![-0.3] }]).unwrap();
    let (h, _) = hermitian_part(&basis, &field, 0.0, D3Path::Rotated).unwrap();
    let n = assemble_oscillator(&basis).square();
    assert!(h.max_abs_diff(&n).unwrap() < 1e-12);
    let k = assemble_k(&basis, &field, 0.0).unwrap().square();
    let skew = k.sub(&n).unwrap();
    assert!(skew.add(&skew.adjoint()).unwrap().max_abs() < 1e-12);
}

#[test]
fn b2_gram_on_ground_state() {
    let basis = HermiteFourierBasis::new(2, 5, 1).unwrap();
    let g = assemble_b2_gram(&basis).unwrap();
    let i = basis.domain().index(&[0, 0], &[0, 0]).unwrap();
    assert!((g.matrix.get(i, i) - C64::new(207.0 / 16.0, 0.0)).norm() < 1e-12);
}

#[test]
fn estimate_agrees_with_dense_solve_of_the_pencil() {
    let basis = HermiteFourierBasis::new(2, 5, 1).unwrap();
    for field in [
        FieldSpec::constant(2, vec![0.0]).unwrap(),
        FieldSpec::trig(2, vec![0.5], &[TrigTerm { mode: vec![0, 1], cos: vec![], sin: vec![1.0] }]).unwrap(),
    ] {
        for form in [EstimateForm::Theorem, EstimateForm::Ing11, EstimateForm::Union] {
            let report = maximal_constant(&basis, &field, form).unwrap();
            let p = hypolab::spectral::build_pencil(&basis, &field, form, D3Path::Rotated).unwrap();
            let dense = dense_pencil_max(&p.a, &p.b).unwrap();
            assert!((report.lambda_max - dense).abs() <= 1e-8 * dense, "{form:?}: {} vs {dense}", report.lambda_max);
            assert!(report.residual <= 1e-8);
        }
    }
}
