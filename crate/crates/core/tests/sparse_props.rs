mod common;

use common::oracle::dense;
use nalgebra::{DMatrix, DVector};
use pcgqp::io::{read_matrix, write_matrix};
use pcgqp::{CooMatrix, CscMatrix, CsrMatrix};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = CsrMatrix<f64>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![3 => Just(0.0), 2 => -10.0..10.0f64], r * c)
            .prop_map(move |d| CsrMatrix::from_dense(r, c, &d))
    })
}

fn matrix_and_vec() -> impl Strategy<Value = (CsrMatrix<f64>, Vec<f64>)> {
    matrix(12, 12).prop_flat_map(|m| {
        let c = m.cols();
        (Just(m), proptest::collection::vec(-5.0..5.0f64, c))
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

proptest! {
    #[test]
    fn coo_csr_roundtrip(m in matrix(10, 10)) {
        let coo = m.to_coo();
        prop_assert_eq!(coo.nnz(), m.nnz());
        prop_assert_eq!(coo.to_csr(), m.clone());
        let rebuilt = CooMatrix::new(m.rows(), m.cols(), coo.row_indices().to_vec(), coo.col_indices().to_vec(), coo.values().to_vec()).unwrap();
        prop_assert_eq!(rebuilt.into_csr(), m);
    }

    #[test]
    fn transpose_is_an_involution(m in matrix(10, 10)) {
        let t = m.transpose();
        prop_assert_eq!(t.rows(), m.cols());
        prop_assert_eq!(t.transpose(), m.clone());
        prop_assert_eq!(dense(&t), dense(&m).transpose());
    }

    #[test]
    fn csc_arrays_are_transpose_csr_arrays(m in matrix(10, 10)) {
        let csc = CscMatrix::from_csr(&m);
        let t = m.transpose();
        prop_assert_eq!(csc.col_pointer(), t.row_pointer());
        prop_assert_eq!(csc.row_indices(), t.col_indices());
        prop_assert_eq!(csc.values(), t.values());
        prop_assert_eq!(csc.to_csr(), m);
    }

    #[test]
    fn spmv_matches_dense((m, x) in matrix_and_vec()) {
        let want = dense(&m) * DVector::from_column_slice(&x);
        prop_assert!(close(&m.spmv(&x).unwrap(), want.as_slice(), 1e-12));
        let y: Vec<f64> = (0..m.rows()).map(|i| i as f64 - 2.5).collect();
        let want_t = dense(&m).transpose() * DVector::from_column_slice(&y);
        prop_assert!(close(&m.spmv_transpose(&y).unwrap(), want_t.as_slice(), 1e-12));
    }

    #[test]
    fn symmetric_upper_product_matches_full_matrix(m in matrix(9, 9), seed in 0u64..1000) {
        let n = m.rows().min(m.cols());
        let sq = CsrMatrix::from_dense(n, n, dense(&m).view((0, 0), (n, n)).transpose().as_slice());
        let upper = sq.upper_triangle();
        let full = upper.symmetrize_upper().unwrap();
        let du = dense(&upper);
        let mut want = &du + du.transpose();
        for i in 0..n {
            want[(i, i)] = du[(i, i)];
        }
        prop_assert_eq!(dense(&full), want.clone());
        let x: Vec<f64> = (0..n).map(|i| ((seed + i as u64) % 7) as f64 - 3.0).collect();
        let y = want * DVector::from_column_slice(&x);
        prop_assert!(close(&upper.spmv_symmetric_upper(&x).unwrap(), y.as_slice(), 1e-12));
        prop_assert!(close(&full.spmv(&x).unwrap(), y.as_slice(), 1e-12));
    }

    #[test]
    fn row_norms_and_column_norms(m in matrix(10, 10)) {
        let d = dense(&m);
        let rows: Vec<f64> = (0..m.rows()).map(|i| d.row(i).amax()).collect();
        prop_assert_eq!(m.row_inf_norms(), rows);
        let cols: Vec<f64> = (0..m.cols()).map(|j| d.column(j).amax()).collect();
        prop_assert_eq!(m.transpose().row_inf_norms(), cols);
        let sq: Vec<f64> = (0..m.rows()).map(|i| d.row(i).norm_squared()).collect();
        prop_assert!(close(&m.row_sq_norms(), &sq, 1e-12));
    }

    #[test]
    fn two_sided_scaling_matches_dense((m, x) in matrix_and_vec()) {
        let left: Vec<f64> = (0..m.rows()).map(|i| 0.5 + i as f64).collect();
        let right: Vec<f64> = x.iter().map(|v| v.abs() + 0.1).collect();
        let mut s = m.clone();
        let cache = s.row_index_cache();
        s.scale_two_sided_inplace(&cache, &left, &right).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_column_slice(&left)) * dense(&m) * DMatrix::from_diagonal(&DVector::from_column_slice(&right));
        prop_assert!(close(s.to_dense().as_slice(), want.transpose().as_slice(), 1e-14));
        prop_assert_eq!(s.col_indices(), m.col_indices());
    }

    #[test]
    fn diag_ata_matches_dense_gram(m in matrix(10, 10)) {
        let d = dense(&m);
        let g = d.transpose() * &d;
        let want: Vec<f64> = (0..m.cols()).map(|i| g[(i, i)]).collect();
        prop_assert!(close(&m.diag_ata(), &want, 1e-12));
    }

    #[test]
    fn text_format_roundtrip(m in matrix(8, 8)) {
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let back: CsrMatrix<f64> = read_matrix(buf.as_slice()).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn paper_example_matrix_in_all_formats() {
    let coo = CooMatrix::new(
        4,
        5,
        vec![0, 0, 1, 1, 2, 2, 3, 3],
        vec![0, 4, 1, 2, 1, 4, 0, 2],
        vec![1.0, 4.0, 5.0, 1.0, 2.0, 1.0, 7.0, 1.0],
    )
    .unwrap();
    let csr = coo.to_csr();
    assert_eq!(csr.row_pointer(), &[0, 2, 4, 6, 8]);
    assert_eq!(csr.col_indices(), &[0, 4, 1, 2, 1, 4, 0, 2]);
    assert_eq!(csr.values(), &[1.0, 4.0, 5.0, 1.0, 2.0, 1.0, 7.0, 1.0]);
    let csc = CscMatrix::from_csr(&csr);
    assert_eq!(csc.col_pointer(), &[0, 2, 4, 6, 6, 8]);
    assert_eq!(csc.row_indices(), &[0, 3, 1, 2, 1, 3, 0, 2]);
    assert_eq!(csc.values(), &[1.0, 7.0, 5.0, 2.0, 1.0, 1.0, 4.0, 1.0]);
    assert_eq!(csr.spmv(&[1.0; 5]).unwrap(), vec![5.0, 6.0, 3.0, 8.0]);
    assert_eq!(csr.diag_ata(), vec![50.0, 29.0, 2.0, 0.0, 17.0]);
}
