//! Dense reference implementations used as test oracles.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use pcgqp::{CsrMatrix, QpProblem};

pub fn dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_dense())
}

/// Full symmetric `P` from the stored upper triangle.
pub fn dense_p(problem: &QpProblem<f64>) -> DMatrix<f64> {
    let u = dense(problem.p_upper());
    let mut p = &u + u.transpose();
    for i in 0..p.nrows() {
        p[(i, i)] = u[(i, i)];
    }
    p
}

/// Exact minimizer of a small QP found by enumerating active sets.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
}

/// Enumerates every assignment of rows to {inactive, at lower, at upper},
/// solves the equality-constrained KKT system for each, and keeps the best
/// point that is primal feasible and has correctly signed multipliers.
///
/// Rows with `l = u` are always active. Intended for `m ≤ 8`.
pub fn solve_active_set(problem: &QpProblem<f64>, tol: f64) -> Option<OracleSolution> {
    let (n, m) = (problem.n(), problem.m());
    let p = dense_p(problem);
    let a = dense(problem.a());
    let q = DVector::from_column_slice(problem.q());
    let (l, u) = (problem.l(), problem.u());

    let mut best: Option<OracleSolution> = None;
    let combos = 3usize.pow(m as u32);
    'outer: for code in 0..combos {
        // state per row: 0 inactive, 1 at lower, 2 at upper
        let mut c = code;
        let mut state = vec![0u8; m];
        for s in state.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        for i in 0..m {
            let eq = l[i] == u[i];
            match state[i] {
                0 if eq => continue 'outer,
                1 if !l[i].is_finite() => continue 'outer,
                2 if !u[i].is_finite() || eq => continue 'outer,
                _ => {}
            }
        }
        let active: Vec<usize> = (0..m).filter(|&i| state[i] != 0).collect();
        let k = active.len();
        let mut kkt = DMatrix::zeros(n + k, n + k);
        let mut rhs = DVector::zeros(n + k);
        kkt.view_mut((0, 0), (n, n)).copy_from(&p);
        for i in 0..n {
            rhs[i] = -q[i];
        }
        for (r, &i) in active.iter().enumerate() {
            for j in 0..n {
                kkt[(n + r, j)] = a[(i, j)];
                kkt[(j, n + r)] = a[(i, j)];
            }
            rhs[n + r] = if state[i] == 1 { l[i] } else { u[i] };
        }
        // Zero or dependent rows make the KKT matrix singular; a consistent
        // system still determines x because P is positive definite. The
        // symmetric pseudo-solve stays accurate where LU fails.
        let sol = symmetric_pseudo_solve(&kkt, &rhs);
        if (&kkt * &sol - &rhs).amax() > 1e-8 * (1.0 + rhs.amax()) {
            continue;
        }
        let x = sol.rows(0, n).into_owned();
        let ax = &a * &x;
        if (0..m).any(|i| ax[i] < l[i] - tol || ax[i] > u[i] + tol) {
            continue;
        }
        let mut y = vec![0.0; m];
        for (r, &i) in active.iter().enumerate() {
            y[i] = sol[n + r];
            let eq = l[i] == u[i];
            if !eq && ((state[i] == 1 && y[i] > tol) || (state[i] == 2 && y[i] < -tol)) {
                continue 'outer;
            }
        }
        let objective = 0.5 * x.dot(&(&p * &x)) + q.dot(&x);
        if best.as_ref().is_none_or(|b| objective < b.objective - 1e-12) {
            best = Some(OracleSolution {
                x: x.iter().copied().collect(),
                y,
                objective,
            });
        }
    }
    best
}

/// `‖Ax − z‖∞`, `‖Px + q + Aᵀy‖∞` and the optimality thresholds on the
/// original data, recomputed densely.
pub fn kkt_residuals(
    problem: &QpProblem<f64>,
    x: &[f64],
    z: &[f64],
    y: &[f64],
    eps_abs: f64,
    eps_rel: f64,
) -> (f64, f64, f64, f64) {
    let p = dense_p(problem);
    let a = dense(problem.a());
    let xv = DVector::from_column_slice(x);
    let zv = DVector::from_column_slice(z);
    let yv = DVector::from_column_slice(y);
    let q = DVector::from_column_slice(problem.q());
    let ax = &a * &xv;
    let px = &p * &xv;
    let aty = a.transpose() * &yv;
    let r_prim = (&ax - &zv).amax();
    let r_dual = (&px + &q + &aty).amax();
    let eps_prim = eps_abs + eps_rel * ax.amax().max(zv.amax());
    let eps_dual = eps_abs + eps_rel * px.amax().max(aty.amax()).max(q.amax());
    (r_prim, r_dual, eps_prim, eps_dual)
}

/// Minimum-norm solution of a symmetric system, dropping eigenvalues below
/// `1e-12` relative to the largest.
fn symmetric_pseudo_solve(k: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let eig = k.clone().symmetric_eigen();
    let cutoff = 1e-12 * eig.eigenvalues.amax();
    let mut c = eig.eigenvectors.transpose() * rhs;
    for (ci, &lambda) in c.iter_mut().zip(eig.eigenvalues.iter()) {
        *ci = if lambda.abs() > cutoff { *ci / lambda } else { 0.0 };
    }
    eig.eigenvectors * c
}
