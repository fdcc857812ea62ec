mod common;

use common::oracle::dense;
use nalgebra::{DMatrix, DVector};
use pcgqp::linsys::{PcgWorkspace, ReducedKktOperator};
use pcgqp::{pcg_solve, CsrMatrix};
use proptest::prelude::*;

#[derive(Debug)]
struct System {
    p: CsrMatrix<f64>,
    a: CsrMatrix<f64>,
    a_t: CsrMatrix<f64>,
    sigma: f64,
    rho: f64,
    b: Vec<f64>,
}

impl System {
    fn dense_k(&self) -> DMatrix<f64> {
        let n = self.p.rows();
        let a = dense(&self.a);
        dense(&self.p) + DMatrix::identity(n, n) * self.sigma + a.transpose() * &a * self.rho
    }

    fn op(&self) -> ReducedKktOperator<'_, f64> {
        ReducedKktOperator::new(&self.p, &self.a, &self.a_t, self.sigma, self.rho).unwrap()
    }
}

/// `P̄ = GᵀG` with a sparse square `G`, sparse `Ā` with up to `2n` rows.
fn system() -> impl Strategy<Value = System> {
    (
        1usize..=50,
        0usize..=100,
        prop::sample::select(vec![0.01, 0.1, 1.0, 10.0]),
        any::<u64>(),
    )
        .prop_map(|(n, m_raw, rho, seed)| {
            let m = m_raw.min(2 * n);
            let mut state = seed | 1;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let mut sparse = |rows: usize, cols: usize, density: f64| {
                let d: Vec<f64> = (0..rows * cols)
                    .map(|_| if next() < density { 2.0 * next() - 1.0 } else { 0.0 })
                    .collect();
                DMatrix::from_row_slice(rows, cols, &d)
            };
            let g = sparse(n, n, 0.3);
            let a = sparse(m, n, 0.3);
            let pd = g.transpose() * &g;
            let p = CsrMatrix::from_dense(n, n, pd.transpose().as_slice());
            let a = CsrMatrix::from_dense(m, n, a.transpose().as_slice());
            let b: Vec<f64> = (0..n).map(|_| 2.0 * next() - 1.0).collect();
            System {
                a_t: a.transpose(),
                p,
                a,
                sigma: 1e-6,
                rho,
                b,
            }
        })
}

fn rel_inf_error(x: &[f64], want: &DVector<f64>) -> f64 {
    let diff = x.iter().zip(want.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    diff / want.amax().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_dense_cholesky(sys in system()) {
        let k = sys.dense_k();
        let Some(chol) = k.clone().cholesky() else {
            return Err(TestCaseError::reject("K not numerically positive definite"));
        };
        let want = chol.solve(&DVector::from_column_slice(&sys.b));
        let mut op = sys.op();
        let pre = op.build_preconditioner();
        let n = sys.b.len();
        let res = pcg_solve(&mut op, &pre, &sys.b, &vec![0.0; n], 1e-10, 50 * n).unwrap();
        prop_assert!(res.converged);
        let err = rel_inf_error(&res.solution, &want);
        prop_assert!(err <= 1e-6, "relative error {err:e}");
        // The converged residual satisfies the stopping rule.
        let kx = k * DVector::from_column_slice(&res.solution);
        let r = (kx - DVector::from_column_slice(&sys.b)).amax();
        prop_assert!(r <= 1e-10 * DVector::from_column_slice(&sys.b).amax() * 10.0);
    }

    #[test]
    fn operator_is_symmetric_and_matches_dense(sys in system()) {
        let n = sys.b.len();
        let k = sys.dense_k();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut op = sys.op();
        let kx = op.apply(&x).unwrap();
        let ky = op.apply(&sys.b).unwrap();
        let want = &k * DVector::from_column_slice(&x);
        prop_assert!(rel_inf_error(&kx, &want) <= 1e-10);
        let xky: f64 = x.iter().zip(&ky).map(|(a, b)| a * b).sum();
        let ykx: f64 = sys.b.iter().zip(&kx).map(|(a, b)| a * b).sum();
        prop_assert!((xky - ykx).abs() <= 1e-10 * (1.0 + xky.abs()));
        let pre = op.build_preconditioner();
        for i in 0..n {
            prop_assert!((pre.diag()[i] - k[(i, i)]).abs() <= 1e-12 * (1.0 + k[(i, i)]));
            prop_assert_eq!(pre.inv_diag()[i], 1.0 / pre.diag()[i]);
        }
    }

    #[test]
    fn recursive_residual_tracks_true_residual(sys in system()) {
        let n = sys.b.len();
        let mut op = sys.op();
        let mut check = sys.op();
        let pre = op.build_preconditioner();
        let b_norm = sys.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        let mut x = vec![0.0; n];
        let mut ws = PcgWorkspace::new(n);
        ws.solve_observed(&mut op, &pre, &sys.b, &mut x, 1e-10, 10 * n, |it| {
            let kx = check.apply(it.x).unwrap();
            let gap = kx.iter().zip(&sys.b).zip(it.r).fold(0.0f64, |m, ((k, b), r)| m.max((k - b - r).abs()));
            worst = worst.max(gap);
        }).unwrap();
        prop_assert!(worst <= 1e-8 * b_norm.max(1.0), "gap {worst:e}");
    }
}

#[test]
fn search_directions_are_k_conjugate() {
    let n = 12;
    // Tridiagonal with a spread-out diagonal: well conditioned but far from
    // any multiple of the identity, so CG needs its full n steps.
    let pd = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0 + i as f64,
        1 => -0.5,
        _ => 0.0,
    });
    let p = CsrMatrix::from_dense(n, n, pd.transpose().as_slice());
    let a = CsrMatrix::from_dense(
        3,
        n,
        &(0..3 * n)
            .map(|k| if k % 4 == 0 { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
    );
    let a_t = a.transpose();
    let mut op = ReducedKktOperator::new(&p, &a, &a_t, 1e-6, 0.1).unwrap();
    let mut check = ReducedKktOperator::new(&p, &a, &a_t, 1e-6, 0.1).unwrap();
    let pre = op.build_preconditioner();
    let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let mut x = vec![0.0; n];
    let stats = PcgWorkspace::new(n)
        .solve_observed(&mut op, &pre, &b, &mut x, 1e-9, 4 * n, |it| dirs.push(it.p.to_vec()))
        .unwrap();
    assert!(stats.converged);
    // Exact arithmetic terminates in at most n steps; 1e-9 is reached by then.
    assert!(stats.iterations <= n, "{} iterations", stats.iterations);
    let kd: Vec<Vec<f64>> = dirs.iter().map(|d| check.apply(d).unwrap()).collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let k_norm = (pd.amax() + 1.0) * n as f64;
    for i in 0..dirs.len() - 1 {
        for j in i + 1..dirs.len() - 1 {
            let ip: f64 = dirs[i].iter().zip(&kd[j]).map(|(a, b)| a * b).sum();
            let bound = 1e-6 * norm(&dirs[i]) * norm(&dirs[j]) * k_norm;
            assert!(ip.abs() <= bound, "p{i}ᵀKp{j} = {ip:e}");
        }
    }
}
