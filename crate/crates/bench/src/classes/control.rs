//! Finite-horizon linear optimal control.
//!
//! Variables are stacked as `(x₀, …, x_T, u₀, …, u_{T−1})`. The objective is
//! `½Σ xₜᵀQxₜ + ½x_TᵀQ_Tx_T + ½Σ uₜᵀRuₜ` and the constraints are
//! `x₀ = x_init`, `x_{t+1} = A_d xₜ + B uₜ`, `|xₜ| ≤ x̄`, `|uₜ| ≤ ū`.

use pcgqp::{CsrMatrix, QpProblem, Result};
use rand::Rng;

use crate::build::{fit_dimension, sparse_normal, uniform_vec, TripletBuilder};

pub const HORIZON: usize = 10;
const DYNAMICS_DENSITY: f64 = 0.2;
const INPUT_DENSITY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Control {
    pub ad: CsrMatrix<f64>,
    pub bd: CsrMatrix<f64>,
    pub q: Vec<f64>,
    pub q_terminal: Vec<f64>,
    pub r: Vec<f64>,
    pub x_init: Vec<f64>,
    /// Symmetric state bound; may be infinite.
    pub x_max: Vec<f64>,
    pub u_max: Vec<f64>,
    pub horizon: usize,
}

/// State dimension; the input dimension is half of it (at least 1).
pub fn dims_for_target(target: f64) -> usize {
    fit_dimension(target, 2, |nx| expected_size(nx, input_dim(nx), HORIZON))
}

pub fn input_dim(nx: usize) -> usize {
    (nx / 2).max(1)
}

fn expected_size(nx: usize, nu: usize, t: usize) -> f64 {
    let (nxf, nuf, tf) = (nx as f64, nu as f64, t as f64);
    let vars = nxf * (tf + 1.0) + nuf * tf;
    let ad = nxf + DYNAMICS_DENSITY * nxf * (nxf - 1.0);
    let bd = INPUT_DENSITY * nxf * nuf;
    // P diagonal, x₀ rows, dynamics rows, box rows
    vars + nxf + tf * (nxf + ad + bd) + vars
}

impl Control {
    /// Random stable system with `nx` states and a horizon of [`HORIZON`].
    ///
    /// `A_d = 0.95(½I + ½M/‖M‖∞)` has ∞-norm at most 0.95, so the zero input
    /// keeps any `‖x_init‖∞ ≤ min x̄` inside the state bounds and every
    /// instance is feasible.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, nx: usize) -> Self {
        let nu = input_dim(nx);
        let m = sparse_normal(rng, nx, nx, DYNAMICS_DENSITY);
        let m_norm = (0..nx)
            .map(|i| m.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut dense = if m_norm > 0.0 {
            m.to_dense().iter().map(|v| 0.475 * v / m_norm).collect()
        } else {
            vec![0.0; nx * nx]
        };
        for i in 0..nx {
            dense[i * nx + i] += 0.475;
        }
        let ad = CsrMatrix::from_dense(nx, nx, &dense);
        let bd = sparse_normal(rng, nx, nu, INPUT_DENSITY);
        let q = uniform_vec(rng, nx, 0.1, 1.0);
        let q_terminal = q.clone();
        let r = vec![0.1; nu];
        let x_max = uniform_vec(rng, nx, 1.0, 2.0);
        let u_max = uniform_vec(rng, nu, 0.2, 0.5);
        let x_init = uniform_vec(rng, nx, -0.9, 0.9);
        Self {
            ad,
            bd,
            q,
            q_terminal,
            r,
            x_init,
            x_max,
            u_max,
            horizon: HORIZON,
        }
    }

    pub fn nx(&self) -> usize {
        self.ad.rows()
    }

    pub fn nu(&self) -> usize {
        self.bd.cols()
    }

    pub fn num_variables(&self) -> usize {
        self.nx() * (self.horizon + 1) + self.nu() * self.horizon
    }

    pub fn num_equality_rows(&self) -> usize {
        self.nx() * (self.horizon + 1)
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        let (nx, nu, t) = (self.nx(), self.nu(), self.horizon);
        let n = self.num_variables();
        let u0 = nx * (t + 1);

        let mut p_diag = Vec::with_capacity(n);
        for _ in 0..t {
            p_diag.extend_from_slice(&self.q);
        }
        p_diag.extend_from_slice(&self.q_terminal);
        for _ in 0..t {
            p_diag.extend_from_slice(&self.r);
        }
        let mut pb = TripletBuilder::new(n, n);
        pb.push_diagonal(0, 0, &p_diag);
        let p = pb.finish()?;

        let n_eq = self.num_equality_rows();
        let m = n_eq + n;
        let mut a = TripletBuilder::new(m, n);
        let mut l = Vec::with_capacity(m);
        let mut u = Vec::with_capacity(m);

        a.push_identity(0, 0, nx, 1.0);
        l.extend_from_slice(&self.x_init);
        u.extend_from_slice(&self.x_init);
        for k in 0..t {
            let row = nx * (k + 1);
            a.push_identity(row, nx * (k + 1), nx, 1.0);
            a.push_block(row, nx * k, &self.ad, -1.0);
            a.push_block(row, u0 + nu * k, &self.bd, -1.0);
            l.extend(std::iter::repeat_n(0.0, nx));
            u.extend(std::iter::repeat_n(0.0, nx));
        }
        a.push_identity(n_eq, 0, n, 1.0);
        for _ in 0..=t {
            l.extend(self.x_max.iter().map(|&v| -v));
            u.extend_from_slice(&self.x_max);
        }
        for _ in 0..t {
            l.extend(self.u_max.iter().map(|&v| -v));
            u.extend_from_slice(&self.u_max);
        }
        QpProblem::new(p, vec![0.0; n], a.finish()?, l, u)
    }
}
