use crate::error::{Error, Result};
use crate::scalar::{dot, norm_inf, Scalar};

use super::{JacobiPreconditioner, ReducedKktOperator};

/// Outcome of a standalone PCG solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PcgResult<T> {
    pub solution: Vec<T>,
    pub iterations: usize,
    /// ‖r‖∞ of the recursively updated residual at exit.
    pub final_residual_norm: T,
    pub converged: bool,
}

/// Counters of an in-place PCG solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgStats<T> {
    pub iterations: usize,
    pub final_residual_norm: T,
    pub converged: bool,
}

/// State visible at the top of PCG iteration `k`, before the stopping test.
#[derive(Debug)]
pub struct PcgIterate<'s, T> {
    pub k: usize,
    pub x: &'s [T],
    pub r: &'s [T],
    pub p: &'s [T],
}

/// Reusable PCG vectors so the ADMM loop does not allocate per solve.
#[derive(Debug, Clone)]
pub struct PcgWorkspace<T> {
    r: Vec<T>,
    y: Vec<T>,
    p: Vec<T>,
    kp: Vec<T>,
}

/// Iteration cap `20√n`, clamped to `[20, max(n, 20)]`.
pub fn default_max_iter(n: usize) -> usize {
    let cap = (20.0 * (n as f64).sqrt()).ceil() as usize;
    cap.clamp(20, n.max(20))
}

/// PCG tolerance from the latest scaled ADMM residuals:
/// `max(λ√(‖r̄_prim‖∞‖r̄_dual‖∞), ε_min)`.
pub fn adaptive_eps<T: Scalar>(r_prim_scaled_inf: T, r_dual_scaled_inf: T, lambda: T, eps_min: T) -> Result<T> {
    if !(r_prim_scaled_inf >= T::zero()) || !(r_dual_scaled_inf >= T::zero()) {
        return Err(Error::InvalidInput(format!(
            "residual norms must be non-negative, got {r_prim_scaled_inf} and {r_dual_scaled_inf}"
        )));
    }
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(Error::InvalidSettings(format!(
            "lambda must lie in (0, 1), got {lambda}"
        )));
    }
    if !(eps_min > T::zero()) {
        return Err(Error::InvalidSettings(format!(
            "eps_min must be positive, got {eps_min}"
        )));
    }
    Ok((lambda * (r_prim_scaled_inf * r_dual_scaled_inf).sqrt()).max(eps_min))
}

impl<T: Scalar> PcgWorkspace<T> {
    pub fn new(n: usize) -> Self {
        Self {
            r: vec![T::zero(); n],
            y: vec![T::zero(); n],
            p: vec![T::zero(); n],
            kp: vec![T::zero(); n],
        }
    }

    /// Solves `K x = b` in place; `x` holds the warm start on entry.
    pub fn solve(
        &mut self,
        op: &mut ReducedKktOperator<'_, T>,
        precond: &JacobiPreconditioner<T>,
        b: &[T],
        x: &mut [T],
        eps: T,
        max_iter: usize,
    ) -> Result<PcgStats<T>> {
        self.solve_observed(op, precond, b, x, eps, max_iter, |_| {})
    }

    /// [`solve`](Self::solve) with a callback at the top of every iteration.
    ///
    /// Stops when `‖r‖∞ ≤ eps·‖b‖∞`, after at least one iteration unless the
    /// warm start is exact. Hitting `max_iter` is not an error: the
    /// last iterate, which minimizes the K-norm error over the Krylov space
    /// explored so far, is left in `x` with `converged = false`.
    #[allow(clippy::too_many_arguments)]
    pub fn solve_observed<F>(
        &mut self,
        op: &mut ReducedKktOperator<'_, T>,
        precond: &JacobiPreconditioner<T>,
        b: &[T],
        x: &mut [T],
        eps: T,
        max_iter: usize,
        mut observe: F,
    ) -> Result<PcgStats<T>>
    where
        F: FnMut(&PcgIterate<'_, T>),
    {
        let n = op.n();
        if b.len() != n {
            return Err(Error::dims("right-hand side", n, b.len()));
        }
        if x.len() != n {
            return Err(Error::dims("warm start", n, x.len()));
        }
        if precond.diag().len() != n {
            return Err(Error::dims("preconditioner", n, precond.diag().len()));
        }
        if !(eps > T::zero()) {
            return Err(Error::InvalidSettings(format!(
                "PCG tolerance must be positive, got {eps}"
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("PCG warm start must be finite".into()));
        }
        if self.r.len() != n {
            *self = Self::new(n);
        }

        let b_norm = norm_inf(b);
        if b_norm == T::zero() {
            x.fill(T::zero());
            return Ok(PcgStats {
                iterations: 0,
                final_residual_norm: T::zero(),
                converged: true,
            });
        }
        let tol = eps * b_norm;
        let Self { r, y, p, kp } = self;

        // r⁰ = Kx⁰ − b, y⁰ = M⁻¹r⁰, p⁰ = −y⁰
        op.apply_into(x, r);
        for (ri, &bi) in r.iter_mut().zip(b) {
            *ri = *ri - bi;
        }
        precond.apply_into(r, y);
        for (pi, &yi) in p.iter_mut().zip(y.iter()) {
            *pi = -yi;
        }
        let mut ry = dot(r, y);

        let mut k = 0;
        loop {
            observe(&PcgIterate { k, x, r, p });
            let r_norm = norm_inf(r);
            // At least one step is taken from a nonzero residual: a tolerance
            // at or above 1 would otherwise accept any warm start and freeze
            // the ADMM iterate.
            let may_stop = k > 0 || r_norm == T::zero();
            if (may_stop && r_norm <= tol) || ry == T::zero() {
                return Ok(PcgStats {
                    iterations: k,
                    final_residual_norm: r_norm,
                    converged: true,
                });
            }
            if k == max_iter {
                return Ok(PcgStats {
                    iterations: k,
                    final_residual_norm: r_norm,
                    converged: false,
                });
            }
            op.apply_into(p, kp);
            let curvature = dot(p, kp);
            if !(curvature > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    iteration: k,
                    curvature: curvature.as_f64(),
                });
            }
            // Step length rᵀy / pᵀKp, i.e. the exact minimizer along p.
            let alpha = ry / curvature;
            for ((xi, ri), (&pi, &kpi)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(kp.iter())) {
                *xi = *xi + alpha * pi;
                *ri = *ri + alpha * kpi;
            }
            precond.apply_into(r, y);
            let ry_next = dot(r, y);
            let beta = ry_next / ry;
            for (pi, &yi) in p.iter_mut().zip(y.iter()) {
                *pi = beta * *pi - yi;
            }
            ry = ry_next;
            k += 1;
        }
    }
}

/// Solves `K x = b` starting from `warm_start`.
pub fn pcg_solve<T: Scalar>(
    op: &mut ReducedKktOperator<'_, T>,
    precond: &JacobiPreconditioner<T>,
    b: &[T],
    warm_start: &[T],
    eps: T,
    max_iter: usize,
) -> Result<PcgResult<T>> {
    let mut x = warm_start.to_vec();
    let stats = PcgWorkspace::new(op.n()).solve(op, precond, b, &mut x, eps, max_iter)?;
    Ok(PcgResult {
        solution: x,
        iterations: stats.iterations,
        final_residual_norm: stats.final_residual_norm,
        converged: stats.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    #[test]
    fn identity_system_takes_one_step() {
        let p = CsrMatrix::zeros(3, 3);
        let a = CsrMatrix::zeros(0, 3);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1.0, 1.0).unwrap();
        let m = op.build_preconditioner();
        let b = [1.0, -2.0, 0.5];
        let res = pcg_solve(&mut op, &m, &b, &[0.0; 3], 1e-12, 10).unwrap();
        assert_eq!(res.solution, b.to_vec());
        assert_eq!(res.iterations, 1);
        assert!(res.converged);
    }

    #[test]
    fn exact_warm_start_and_zero_rhs_take_no_steps() {
        let p = CsrMatrix::from_diagonal(&[2.0, 4.0]);
        let a = CsrMatrix::from_dense(1, 2, &[1.0, 1.0]);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1.0, 1.0).unwrap();
        let m = op.build_preconditioner();
        // K = [[4, 1], [1, 6]]; K·(1, 1) = (5, 7)
        let res = pcg_solve(&mut op, &m, &[5.0, 7.0], &[1.0, 1.0], 1e-10, 10).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.solution, vec![1.0, 1.0]);

        let res = pcg_solve(&mut op, &m, &[0.0, 0.0], &[3.0, -1.0], 1e-10, 10).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.solution, vec![0.0, 0.0]);
        assert!(res.converged);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let p = CsrMatrix::from_diagonal(&[1.0, 10.0, 100.0, 1000.0]);
        let a = CsrMatrix::zeros(0, 4);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1e-6, 1.0).unwrap();
        let m = JacobiPreconditioner::identity(4);
        let res = pcg_solve(&mut op, &m, &[1.0; 4], &[0.0; 4], 1e-14, 1).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = CsrMatrix::identity(2);
        let a = CsrMatrix::zeros(0, 2);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1.0, 1.0).unwrap();
        let m = op.build_preconditioner();
        assert!(pcg_solve(&mut op, &m, &[1.0], &[0.0; 2], 1e-8, 5).is_err());
        assert!(pcg_solve(&mut op, &m, &[1.0; 2], &[0.0; 2], 0.0, 5).is_err());
        assert!(pcg_solve(&mut op, &m, &[1.0; 2], &[f64::NAN, 0.0], 1e-8, 5).is_err());
    }

    #[test]
    fn tolerance_rule() {
        let e: f64 = adaptive_eps(1e-2, 1e-4, 0.15, 1e-7).unwrap();
        assert!((e - 1.5e-4).abs() < 1e-18);
        assert_eq!(adaptive_eps(0.0, 0.0, 0.15, 1e-7).unwrap(), 1e-7);
        assert_eq!(adaptive_eps(1.0, 1.0, 0.15, 1e-7).unwrap(), 0.15);
        assert!(adaptive_eps(-1.0, 1.0, 0.15, 1e-7).is_err());
        assert!(adaptive_eps(1.0, 1.0, 1.0, 1e-7).is_err());
    }

    #[test]
    fn iteration_cap_defaults() {
        assert_eq!(default_max_iter(1), 20);
        assert_eq!(default_max_iter(10), 20);
        assert_eq!(default_max_iter(30), 30);
        assert_eq!(default_max_iter(10_000), 2000);
    }
}
