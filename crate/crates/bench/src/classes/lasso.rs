//! Lasso regression.
//!
//! `minimize ‖Ax − b‖² + λ‖x‖₁`, written as the QP over `(x, y, t)`
//!
//! ```text
//! minimize    yᵀy + λ1ᵀt
//! subject to  Ax − y = b,  −t ≤ x ≤ t
//! ```

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{fit_dimension, normal, sparse_normal, TripletBuilder};

const DATA_DENSITY: f64 = 0.15;
/// Data points per feature.
pub const POINTS_PER_FEATURE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Lasso {
    pub a: CsrMatrix<f64>,
    pub b: Vec<f64>,
    pub lambda: f64,
}

/// Number of features.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 1, |n| {
        let md = (POINTS_PER_FEATURE * n) as f64;
        DATA_DENSITY * md * n as f64 + 2.0 * md + 4.0 * n as f64
    })
}

/// `‖Aᵀb‖∞`; `λ` at or above twice this value makes `x = 0` optimal.
pub fn lambda_max(a: &CsrMatrix<f64>, b: &[f64]) -> f64 {
    a.spmv_transpose(b)
        .expect("b has one entry per row")
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

impl Lasso {
    /// `10n` points with 15%-dense normal features, a half-sparse `x_true`
    /// and `b = Ax_true + N(0, 1)` noise; `λ = ‖Aᵀb‖∞ / 5`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let md = POINTS_PER_FEATURE * n;
        let a = sparse_normal(rng, md, n, DATA_DENSITY);
        let scale = (n as f64).sqrt().recip();
        let x_true: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.5) { normal(rng) * scale } else { 0.0 })
            .collect();
        let mut b = a.spmv(&x_true).expect("dimensions match");
        for bi in &mut b {
            *bi += normal(rng);
        }
        let lambda = lambda_max(&a, &b) / 5.0;
        Self { a, b, lambda }
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn data_points(&self) -> usize {
        self.a.rows()
    }

    /// `‖Ax − b‖² + λ‖x‖₁`.
    pub fn direct_objective(&self, x: &[f64]) -> f64 {
        let ax = self.a.spmv(x).expect("x has n entries");
        let fit: f64 = ax.iter().zip(&self.b).map(|(v, b)| (v - b) * (v - b)).sum();
        fit + self.lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn x_block<'a>(&self, z: &'a [f64]) -> &'a [f64] {
        &z[..self.n()]
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        let (n, md) = (self.n(), self.data_points());
        let nv = 2 * n + md;
        let (y0, t0) = (n, n + md);

        let mut p = TripletBuilder::new(nv, nv);
        p.push_identity(y0, y0, md, 2.0);
        let mut q = vec![0.0; nv];
        for v in &mut q[t0..] {
            *v = self.lambda;
        }

        let m = md + 2 * n;
        let mut a = TripletBuilder::new(m, nv);
        a.push_block(0, 0, &self.a, 1.0);
        a.push_identity(0, y0, md, -1.0);
        // x − t ≤ 0
        a.push_identity(md, 0, n, 1.0);
        a.push_identity(md, t0, n, -1.0);
        // x + t ≥ 0
        a.push_identity(md + n, 0, n, 1.0);
        a.push_identity(md + n, t0, n, 1.0);
        let mut l = self.b.clone();
        let mut u = self.b.clone();
        l.extend(std::iter::repeat_n(f64::NEG_INFINITY, n));
        u.extend(std::iter::repeat_n(0.0, n));
        l.extend(std::iter::repeat_n(0.0, n));
        u.extend(std::iter::repeat_n(f64::INFINITY, n));
        QpProblem::new(p.finish()?, q, a.finish()?, l, u)
    }
}
