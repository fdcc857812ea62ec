//! Random QPs with two-sided inequality constraints around a planted point.

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{expected_gram_upper_nnz, fit_dimension, gram_upper, normal_vec, sparse_normal, uniform_vec};

const FACTOR_DENSITY: f64 = 0.1;
const CONSTRAINT_DENSITY: f64 = 0.15;
const DIAGONAL_SHIFT: f64 = 1e-2;
/// Constraint rows per variable.
pub const ROWS_PER_VARIABLE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomQp {
    pub p_upper: CsrMatrix<f64>,
    pub q: Vec<f64>,
    pub a: CsrMatrix<f64>,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
    /// Point satisfying `l ≤ Ax₀ ≤ u`.
    pub x0: Vec<f64>,
}

/// Number of variables.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 2, |n| {
        expected_gram_upper_nnz(n, n, FACTOR_DENSITY) + CONSTRAINT_DENSITY * (ROWS_PER_VARIABLE * n * n) as f64
    })
}

impl RandomQp {
    /// `P = GᵀG + 0.01I` (10%-dense factor), `A` with `10n` rows at 15%
    /// density, and `l = Ax₀ − ξ`, `u = Ax₀ + ζ` with `ξ, ζ ~ U[0, 1)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let g = sparse_normal(rng, n, n, FACTOR_DENSITY);
        let p_upper = gram_upper(&g, DIAGONAL_SHIFT);
        let q = normal_vec(rng, n);
        let m = ROWS_PER_VARIABLE * n;
        let a = sparse_normal(rng, m, n, CONSTRAINT_DENSITY);
        let x0 = normal_vec(rng, n);
        let ax0 = a.spmv(&x0).expect("dimensions match");
        let below = uniform_vec(rng, m, 0.0, 1.0);
        let above = uniform_vec(rng, m, 0.0, 1.0);
        let l = ax0.iter().zip(&below).map(|(v, d)| v - d).collect();
        let u = ax0.iter().zip(&above).map(|(v, d)| v + d).collect();
        Self {
            p_upper,
            q,
            a,
            l,
            u,
            x0,
        }
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        QpProblem::new(
            self.p_upper.clone(),
            self.q.clone(),
            self.a.clone(),
            self.l.clone(),
            self.u.clone(),
        )
    }
}
