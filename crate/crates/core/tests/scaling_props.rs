mod common;

use common::oracle::{dense, dense_p};
use nalgebra::{DMatrix, DVector};
use pcgqp::{ruiz_equilibrate, CsrMatrix, QpProblem, ScaledProblem};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

/// Random QP with `P = GᵀG` (upper part stored), sparse `A`, and bounds that
/// mix finite values, infinities and equalities.
fn problem() -> impl Strategy<Value = QpProblem<f64>> {
    (1usize..8, 0usize..8).prop_flat_map(|(n, m)| {
        let cell = || prop_oneof![2 => Just(0.0), 3 => -100.0..100.0f64];
        (
            proptest::collection::vec(cell(), n * n),
            proptest::collection::vec(-50.0..50.0f64, n),
            proptest::collection::vec(cell(), m * n),
            proptest::collection::vec((0u8..4, -5.0..5.0f64, 0.0..3.0f64), m),
        )
            .prop_map(move |(g, q, a, bounds)| {
                let g = DMatrix::from_row_slice(n, n, &g);
                let p = g.transpose() * &g;
                let p_upper = CsrMatrix::from_dense(n, n, p.transpose().as_slice()).upper_triangle();
                let (mut l, mut u) = (Vec::new(), Vec::new());
                for (kind, c, w) in bounds {
                    let (lo, hi) = match kind {
                        0 => (c, c),
                        1 => (-INF, c),
                        2 => (c, INF),
                        _ => (c - w, c + w),
                    };
                    l.push(lo);
                    u.push(hi);
                }
                QpProblem::new(p_upper, q, CsrMatrix::from_dense(m, n, &a), l, u).unwrap()
            })
    })
}

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(v))
}

fn rel_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    let scale = 1.0 + b.amax();
    (a - b).amax() <= tol * scale
}

fn stacked_deviation(sp: &ScaledProblem<f64>) -> f64 {
    sp.stacked_column_norms()
        .into_iter()
        .filter(|&v| v > 0.0)
        .map(|v| (1.0 - 1.0 / v.sqrt()).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn scaled_data_matches_dense_transformation(p in problem()) {
        let sp = ruiz_equilibrate(&p, 1e-3, 10).unwrap();
        let s = &sp.scaling;
        let d = diag(&s.d);
        let e = diag(&s.e);
        prop_assert!(s.d.iter().chain(&s.e).all(|&v| v > 0.0 && v.is_finite()));
        prop_assert!(s.c > 0.0);

        let p_bar = &d * dense_p(&p) * &d * s.c;
        prop_assert!(rel_close(&dense(&sp.p), &p_bar, 1e-12));
        let a_bar = &e * dense(p.a()) * &d;
        prop_assert!(rel_close(&dense(&sp.a), &a_bar, 1e-12));
        prop_assert_eq!(sp.a_t.clone(), sp.a.transpose());
        for i in 0..p.n() {
            let want = s.c * s.d[i] * p.q()[i];
            prop_assert!((sp.q[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
        for i in 0..p.m() {
            prop_assert_eq!(sp.l[i], s.e[i] * p.l()[i]);
            prop_assert_eq!(sp.u[i], s.e[i] * p.u()[i]);
        }
    }

    #[test]
    fn scale_unscale_roundtrip(p in problem(), seed in 0u32..100) {
        let sp = ruiz_equilibrate(&p, 1e-3, 10).unwrap();
        let s = &sp.scaling;
        let f = |i: usize| ((seed as usize * 31 + i * 17) % 23) as f64 - 11.0;
        let x: Vec<f64> = (0..p.n()).map(f).collect();
        let z: Vec<f64> = (0..p.m()).map(|i| f(i + 5)).collect();
        let y: Vec<f64> = (0..p.m()).map(|i| f(i + 9)).collect();
        let (xs, zs, ys) = s.scale_solution(&x, &z, &y).unwrap();
        let (xb, zb, yb) = s.unscale_solution(&xs, &zs, &ys).unwrap();
        for (a, b) in x.iter().chain(&z).chain(&y).zip(xb.iter().chain(&zb).chain(&yb)) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        // z̄ = Ez and ȳ = cE⁻¹y
        for i in 0..p.m() {
            prop_assert!((zs[i] - s.e[i] * z[i]).abs() <= 1e-12 * (1.0 + zs[i].abs()));
            prop_assert!((ys[i] - s.c * y[i] / s.e[i]).abs() <= 1e-12 * (1.0 + ys[i].abs()));
        }
    }

    #[test]
    fn converged_scaling_is_a_fixed_point(p in problem()) {
        let eps = 1e-3;
        let sp = ruiz_equilibrate(&p, eps, 1000).unwrap();
        prop_assert!(sp.info.converged);
        prop_assert!(stacked_deviation(&sp) <= eps);

        let again = QpProblem::new(sp.p.upper_triangle(), sp.q.clone(), sp.a.clone(), sp.l.clone(), sp.u.clone()).unwrap();
        let sp2 = ruiz_equilibrate(&again, eps, 1000).unwrap();
        prop_assert!(sp2.info.converged);
        prop_assert_eq!(sp2.info.passes, 1);
    }
}
