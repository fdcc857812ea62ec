//! Factor-model portfolio optimization.
//!
//! With risk model `Σ = FFᵀ + diag(d)` and the auxiliary `w = Fᵀx`:
//!
//! ```text
//! minimize    γ(xᵀdiag(d)x + wᵀw) − μᵀx
//! subject to  Fᵀx − w = 0,  1ᵀx = 1,  x ≥ 0
//! ```

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{fit_dimension, normal_vec, sparse_normal, uniform_vec, TripletBuilder};

const FACTOR_DENSITY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    /// `n × k` factor loadings.
    pub f: CsrMatrix<f64>,
    pub d: Vec<f64>,
    pub mu: Vec<f64>,
    pub gamma: f64,
}

pub fn factors(n: usize) -> usize {
    n.div_ceil(10)
}

/// Number of assets.
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 2, |n| {
        let (nf, kf) = (n as f64, factors(n) as f64);
        FACTOR_DENSITY * nf * kf + kf + 3.0 * nf + kf
    })
}

impl Portfolio {
    /// `k = ⌈n/10⌉` factors, 50%-dense normal loadings, `d ~ U[0, √k)`,
    /// `μ ~ N(0, 1)`, `γ = 1`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let k = factors(n);
        let f = sparse_normal(rng, n, k, FACTOR_DENSITY);
        let d = uniform_vec(rng, n, 0.0, (k as f64).sqrt());
        let mu = normal_vec(rng, n);
        Self { f, d, mu, gamma: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.f.rows()
    }

    pub fn k(&self) -> usize {
        self.f.cols()
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        let (n, k) = (self.n(), self.k());
        let nv = n + k;

        let mut p = TripletBuilder::new(nv, nv);
        let pd: Vec<f64> = self.d.iter().map(|v| 2.0 * self.gamma * v).collect();
        p.push_diagonal(0, 0, &pd);
        p.push_identity(n, n, k, 2.0 * self.gamma);
        let mut q: Vec<f64> = self.mu.iter().map(|v| -v).collect();
        q.extend(std::iter::repeat_n(0.0, k));

        let m = k + 1 + n;
        let mut a = TripletBuilder::new(m, nv);
        a.push_block_transposed(0, 0, &self.f, 1.0);
        a.push_identity(0, n, k, -1.0);
        for j in 0..n {
            a.push(k, j, 1.0);
        }
        a.push_identity(k + 1, 0, n, 1.0);
        let mut l = vec![0.0; k];
        let mut u = vec![0.0; k];
        l.push(1.0);
        u.push(1.0);
        l.extend(std::iter::repeat_n(0.0, n));
        u.extend(std::iter::repeat_n(f64::INFINITY, n));
        QpProblem::new(p.finish()?, q, a.finish()?, l, u)
    }
}
