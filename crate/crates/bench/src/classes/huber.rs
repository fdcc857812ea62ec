//! Huber-loss robust regression.
//!
//! `minimize Σ φ(aᵢᵀx − bᵢ)` with `φ(v) = v²` for `|v| ≤ M` and
//! `M(2|v| − M)` otherwise, written as the QP over `(x, u, r, s)`
//!
//! ```text
//! minimize    uᵀu + 2M·1ᵀ(r + s)
//! subject to  Ax − u − r + s = b,  r ≥ 0,  s ≥ 0
//! ```

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{fit_dimension, normal, sparse_normal, TripletBuilder};

const DATA_DENSITY: f64 = 0.15;
/// Data points per feature.
pub const POINTS_PER_FEATURE: usize = 10;
const OUTLIER_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Huber {
    pub a: CsrMatrix<f64>,
    pub b: Vec<f64>,
    pub m: f64,
}

pub fn huber_loss(v: f64, m: f64) -> f64 {
    if v.abs() <= m {
        v * v
    } else {
        m * (2.0 * v.abs() - m)
    }
}

/// Number of features.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 1, |n| {
        let md = (POINTS_PER_FEATURE * n) as f64;
        DATA_DENSITY * md * n as f64 + 6.0 * md
    })
}

impl Huber {
    /// `10n` points with 15%-dense normal features, `b = Ax_true + noise`
    /// where 95% of the noise is `N(0, 1/4)` and 5% is `N(0, 100)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let md = POINTS_PER_FEATURE * n;
        let a = sparse_normal(rng, md, n, DATA_DENSITY);
        let scale = (n as f64).sqrt().recip();
        let x_true: Vec<f64> = (0..n).map(|_| normal(rng) * scale).collect();
        let mut b = a.spmv(&x_true).expect("dimensions match");
        for bi in &mut b {
            let sd = if rng.random_bool(OUTLIER_FRACTION) { 10.0 } else { 0.5 };
            *bi += sd * normal(rng);
        }
        Self { a, b, m: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn data_points(&self) -> usize {
        self.a.rows()
    }

    /// `Σ φ(aᵢᵀx − bᵢ)`.
    pub fn direct_objective(&self, x: &[f64]) -> f64 {
        let ax = self.a.spmv(x).expect("x has n entries");
        ax.iter().zip(&self.b).map(|(v, b)| huber_loss(v - b, self.m)).sum()
    }

    /// The `x` block of a QP solution vector.
    pub fn x_block<'a>(&self, z: &'a [f64]) -> &'a [f64] {
        &z[..self.n()]
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        let (n, md) = (self.n(), self.data_points());
        let nv = n + 3 * md;
        let (u0, r0, s0) = (n, n + md, n + 2 * md);

        let mut p = TripletBuilder::new(nv, nv);
        p.push_identity(u0, u0, md, 2.0);
        let mut q = vec![0.0; nv];
        for v in &mut q[r0..] {
            *v = 2.0 * self.m;
        }

        let mut a = TripletBuilder::new(3 * md, nv);
        a.push_block(0, 0, &self.a, 1.0);
        a.push_identity(0, u0, md, -1.0);
        a.push_identity(0, r0, md, -1.0);
        a.push_identity(0, s0, md, 1.0);
        a.push_identity(md, r0, 2 * md, 1.0);
        let mut l = self.b.clone();
        let mut u = self.b.clone();
        l.extend(std::iter::repeat_n(0.0, 2 * md));
        u.extend(std::iter::repeat_n(f64::INFINITY, 2 * md));
        QpProblem::new(p.finish()?, q, a.finish()?, l, u)
    }
}
