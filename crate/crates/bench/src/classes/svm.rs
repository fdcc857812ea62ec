//! Support vector machine with hinge loss.
//!
//! `minimize xᵀx + λ Σ max(0, bᵢaᵢᵀx + 1)`, written as the QP over `(x, t)`
//!
//! ```text
//! minimize    xᵀx + λ1ᵀt
//! subject to  diag(b)Ax − t ≤ −1,  t ≥ 0
//! ```

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{fit_dimension, normal, sparse_random, TripletBuilder};

const DATA_DENSITY: f64 = 0.15;
/// Data points per feature.
pub const POINTS_PER_FEATURE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Svm {
    /// One row per data point.
    pub a: CsrMatrix<f64>,
    /// Labels, ±1.
    pub labels: Vec<f64>,
    pub lambda: f64,
}

/// Number of features.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 1, |n| {
        let md = (POINTS_PER_FEATURE * n) as f64;
        DATA_DENSITY * md * n as f64 + 2.0 * md + n as f64
    })
}

impl Svm {
    /// Two clouds of `5n` points each with 15%-dense features; nonzeros are
    /// `N(1/n, 1/n)` for the `+1` class and `N(−1/n, 1/n)` for the `−1` class.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let md = POINTS_PER_FEATURE * n;
        let half = md / 2;
        let mean = 1.0 / n as f64;
        let sd = mean.sqrt();
        let a = sparse_random(rng, md, n, DATA_DENSITY, |r, i| {
            let sign = if i < half { 1.0 } else { -1.0 };
            sign * mean + sd * normal(r)
        });
        let labels = (0..md).map(|i| if i < half { 1.0 } else { -1.0 }).collect();
        Self { a, labels, lambda: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn data_points(&self) -> usize {
        self.a.rows()
    }

    /// `xᵀx + λ Σ max(0, bᵢaᵢᵀx + 1)`.
    pub fn direct_objective(&self, x: &[f64]) -> f64 {
        let ax = self.a.spmv(x).expect("x has n entries");
        let hinge: f64 = ax.iter().zip(&self.labels).map(|(v, b)| (b * v + 1.0).max(0.0)).sum();
        x.iter().map(|v| v * v).sum::<f64>() + self.lambda * hinge
    }

    pub fn x_block<'a>(&self, z: &'a [f64]) -> &'a [f64] {
        &z[..self.n()]
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        let (n, md) = (self.n(), self.data_points());
        let nv = n + md;

        let mut p = TripletBuilder::new(nv, nv);
        p.push_identity(0, 0, n, 2.0);
        let mut q = vec![0.0; nv];
        for v in &mut q[n..] {
            *v = self.lambda;
        }

        let mut a = TripletBuilder::new(2 * md, nv);
        for i in 0..md {
            let (cols, vals) = self.a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a.push(i, j, self.labels[i] * v);
            }
        }
        a.push_identity(0, n, md, -1.0);
        a.push_identity(md, n, md, 1.0);
        let mut l = vec![f64::NEG_INFINITY; md];
        let mut u = vec![-1.0; md];
        l.extend(std::iter::repeat_n(0.0, md));
        u.extend(std::iter::repeat_n(f64::INFINITY, md));
        QpProblem::new(p.finish()?, q, a.finish()?, l, u)
    }
}
