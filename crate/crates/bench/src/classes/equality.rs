//! Equality-constrained QPs: minimize `½xᵀPx + qᵀx` subject to `Ax = b`.

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{expected_gram_upper_nnz, fit_dimension, gram_upper, normal, normal_vec, sparse_normal};

const FACTOR_DENSITY: f64 = 0.1;
const CONSTRAINT_DENSITY: f64 = 0.15;
const DIAGONAL_SHIFT: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub p_upper: CsrMatrix<f64>,
    pub q: Vec<f64>,
    pub a: CsrMatrix<f64>,
    pub b: Vec<f64>,
}

pub fn constraint_rows(n: usize) -> usize {
    (n / 2).max(1)
}

/// Number of variables.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 2, |n| {
        expected_gram_upper_nnz(n, n, FACTOR_DENSITY) + CONSTRAINT_DENSITY * (constraint_rows(n) * n) as f64
    })
}

impl Equality {
    /// `P = GᵀG + 0.01I` with a 10%-dense square factor, `A` 15% dense with
    /// `n/2` rows, and `b = Ax₀` for a random `x₀` so the constraints are
    /// consistent. Empty rows of `A` receive one random entry.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let g = sparse_normal(rng, n, n, FACTOR_DENSITY);
        let p_upper = gram_upper(&g, DIAGONAL_SHIFT);
        let q = normal_vec(rng, n);
        let m = constraint_rows(n);
        let a = sparse_normal(rng, m, n, CONSTRAINT_DENSITY);
        let mut triplets: Vec<(usize, usize, f64)> = a.to_coo().triplets().collect();
        for i in 0..m {
            if a.row(i).0.is_empty() {
                triplets.push((i, rng.random_range(0..n), normal(rng)));
            }
        }
        let a = CsrMatrix::from_triplets(m, n, triplets).expect("one entry added per empty row");
        let x0 = normal_vec(rng, n);
        let b = a.spmv(&x0).expect("dimensions match");
        Self { p_upper, q, a, b }
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        QpProblem::new(
            self.p_upper.clone(),
            self.q.clone(),
            self.a.clone(),
            self.b.clone(),
            self.b.clone(),
        )
    }
}
