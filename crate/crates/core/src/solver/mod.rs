//! ADMM iteration with an inexact PCG solve of the reduced KKT system.
//!
//! Each iteration forms `b = σx − q̄ + Āᵀ(ρ̄z − y)`, solves
//! `(P̄ + σI + ρ̄ĀᵀĀ) x̃ = b` with warm-started PCG to the adaptive tolerance
//! `max(λ√(‖r̄_prim‖∞‖r̄_dual‖∞), ε_min)`, then applies the relaxed updates
//! of `x`, `z` (projection onto `[l̄, ū]`) and `y`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsys::{adaptive_eps, default_max_iter, JacobiPreconditioner, PcgStats, PcgWorkspace, ReducedKktOperator};
use crate::problem::QpProblem;
use crate::scalar::Scalar;
use crate::scaling::{ruiz_equilibrate, ScaledProblem};

pub mod checks;
mod settings;

pub use checks::{
    adapt_rho, certificate_vectors, check_dual_infeasible, check_optimal, check_primal_infeasible, compute_residuals,
    optimality_tolerances, project_box, residual_snapshot, IterateNorms, ResidualSnapshot,
};
pub use settings::Settings;

/// Name of the ρ̄ adaptation rule, reported in [`SolveInfo`].
pub const RHO_RULE: &str = "rho * sqrt(rel_prim / rel_dual), clipped to [1e-6, 1e6]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Solved,
    PrimalInfeasible,
    DualInfeasible,
    MaxIterReached,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::PrimalInfeasible => "primal_infeasible",
            Status::DualInfeasible => "dual_infeasible",
            Status::MaxIterReached => "max_iter_reached",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Initial iterates on the original (unscaled) problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart<T> {
    pub x: Vec<T>,
    pub z: Vec<T>,
    pub y: Vec<T>,
}

/// ADMM iterates on scaled data.
#[derive(Debug, Clone)]
pub struct SolverState<T> {
    pub x: Vec<T>,
    pub z: Vec<T>,
    pub y: Vec<T>,
    /// Solution of the last linear subproblem; also the next PCG warm start.
    pub x_tilde: Vec<T>,
    pub z_tilde: Vec<T>,
    pub x_prev: Vec<T>,
    pub z_prev: Vec<T>,
    pub y_prev: Vec<T>,
    pub delta_x: Vec<T>,
    pub delta_y: Vec<T>,
    pub rho_bar: T,
    /// Completed iterations.
    pub iter: usize,
    rhs: Vec<T>,
    work_m: Vec<T>,
}

impl<T: Scalar> SolverState<T> {
    /// State at `(x, z, y)` on scaled data, with `x̃ = x` and `z̃ = z`.
    pub fn new(x: Vec<T>, z: Vec<T>, y: Vec<T>, rho_bar: T) -> Self {
        let (n, m) = (x.len(), z.len());
        Self {
            x_tilde: x.clone(),
            z_tilde: z.clone(),
            x_prev: x.clone(),
            z_prev: z.clone(),
            y_prev: y.clone(),
            delta_x: vec![T::zero(); n],
            delta_y: vec![T::zero(); m],
            x,
            z,
            y,
            rho_bar,
            iter: 0,
            rhs: vec![T::zero(); n],
            work_m: vec![T::zero(); m],
        }
    }

    pub fn zeros(n: usize, m: usize, rho_bar: T) -> Self {
        Self::new(vec![T::zero(); n], vec![T::zero(); m], vec![T::zero(); m], rho_bar)
    }
}

/// Linear-system handles used by [`admm_step`].
#[derive(Debug)]
pub struct LinearSystem<'a, T> {
    pub op: ReducedKktOperator<'a, T>,
    pub precond: JacobiPreconditioner<T>,
    pub workspace: PcgWorkspace<T>,
    pub pcg_max_iter: usize,
}

impl<'a, T: Scalar> LinearSystem<'a, T> {
    pub fn new(problem: &'a ScaledProblem<T>, sigma: T, rho_bar: T, pcg_max_iter: usize) -> Result<Self> {
        let op = ReducedKktOperator::new(&problem.p, &problem.a, &problem.a_t, sigma, rho_bar)?;
        let precond = op.build_preconditioner();
        Ok(Self {
            workspace: PcgWorkspace::new(op.n()),
            op,
            precond,
            pcg_max_iter,
        })
    }

    pub fn update_rho(&mut self, rho_bar: T) -> Result<()> {
        self.op.update_rho(&mut self.precond, rho_bar)
    }
}

/// Data passed to [`SolveObserver::on_pcg`] for every linear solve.
#[derive(Debug, Clone, Copy)]
pub struct PcgEvent<T> {
    /// ADMM iteration the solve belongs to (1-based).
    pub iter: usize,
    /// Scaled residual norms the tolerance was computed from, taken at the
    /// most recent residual evaluation.
    pub prim_scaled: T,
    pub dual_scaled: T,
    pub eps: T,
    pub stats: PcgStats<T>,
}

/// Hooks into the ADMM loop. Every method defaults to doing nothing.
pub trait SolveObserver<T: Scalar> {
    /// After each linear solve.
    fn on_pcg(&mut self, _event: &PcgEvent<T>) {}
    /// After iteration `state.iter` completes. `residuals` is present when
    /// they were evaluated at this iteration.
    fn on_iteration(
        &mut self,
        _state: &SolverState<T>,
        _problem: &ScaledProblem<T>,
        _residuals: Option<&ResidualSnapshot<T>>,
    ) {
    }
    /// When the termination and infeasibility tests run.
    fn on_termination_check(&mut self, _iter: usize, _residuals: &ResidualSnapshot<T>) {}
    /// When ρ̄ is adapted (`old` may equal `new`).
    fn on_rho_update(&mut self, _iter: usize, _old: T, _new: T) {}
}

impl<T: Scalar> SolveObserver<T> for () {}

/// Diagnostics collected during a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveInfo {
    pub scaling_passes: usize,
    pub scaling_converged: bool,
    pub rho_rule: &'static str,
    pub rho_updates: usize,
    pub rho_final: f64,
    pub pcg_calls: usize,
    /// PCG calls that stopped at the iteration cap.
    pub pcg_unconverged: usize,
    pub pcg_max_iter: usize,
    pub setup_seconds: f64,
    pub precision: &'static str,
}

/// Result of [`solve`], on the original problem.
#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub status: Status,
    pub x: Vec<T>,
    pub z: Vec<T>,
    pub y: Vec<T>,
    /// `δy` when primal infeasible, `δx` when dual infeasible.
    pub certificate: Option<Vec<T>>,
    /// `½xᵀPx + qᵀx`; `+∞` when primal infeasible, `−∞` when dual infeasible.
    pub objective: T,
    pub iterations: usize,
    pub pcg_iterations_total: usize,
    pub r_prim_inf: T,
    pub r_dual_inf: T,
    /// Thresholds the residuals were last compared against.
    pub eps_prim: T,
    pub eps_dual: T,
    pub runtime: Duration,
    pub info: SolveInfo,
}

/// Flat, serializable summary of a [`SolveOutcome`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub status: Status,
    pub iterations: usize,
    pub pcg_iterations_total: usize,
    pub runtime: f64,
    pub r_prim_inf: f64,
    pub r_dual_inf: f64,
    pub eps_prim: f64,
    pub eps_dual: f64,
    /// `None` when the problem was found infeasible.
    pub objective: Option<f64>,
    pub info: SolveInfo,
}

impl<T: Scalar> SolveOutcome<T> {
    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            status: self.status,
            iterations: self.iterations,
            pcg_iterations_total: self.pcg_iterations_total,
            runtime: self.runtime.as_secs_f64(),
            r_prim_inf: self.r_prim_inf.as_f64(),
            r_dual_inf: self.r_dual_inf.as_f64(),
            eps_prim: self.eps_prim.as_f64(),
            eps_dual: self.eps_dual.as_f64(),
            objective: Some(self.objective.as_f64()).filter(|v| v.is_finite()),
            info: self.info.clone(),
        }
    }
}

/// One ADMM iteration on scaled data.
///
/// `eps` is the PCG tolerance for this iteration. The relaxed dual update is
/// evaluated as `y = ρ̄(v − z)` with `v = αz̃ + (1−α)z + y/ρ̄` the point that
/// was projected, so that `y` vanishes exactly wherever the projection was
/// inactive and complementarity holds to rounding.
pub fn admm_step<T: Scalar>(
    state: &mut SolverState<T>,
    sys: &mut LinearSystem<'_, T>,
    problem: &ScaledProblem<T>,
    settings: &Settings,
    eps: T,
) -> Result<PcgStats<T>> {
    let sigma = T::lit(settings.sigma);
    let alpha = T::lit(settings.alpha);
    let one_minus_alpha = T::one() - alpha;
    let rho = state.rho_bar;
    let rho_inv = rho.recip();

    // b = σx − q̄ + Āᵀ(ρ̄z − y)
    for ((w, &z), &y) in state.work_m.iter_mut().zip(&state.z).zip(&state.y) {
        *w = rho * z - y;
    }
    problem.a_t.spmv_into(&state.work_m, &mut state.rhs);
    for ((b, &x), &q) in state.rhs.iter_mut().zip(&state.x).zip(&problem.q) {
        *b = *b + sigma * x - q;
    }

    let stats = sys.workspace.solve(
        &mut sys.op,
        &sys.precond,
        &state.rhs,
        &mut state.x_tilde,
        eps,
        sys.pcg_max_iter,
    )?;
    problem.a.spmv_into(&state.x_tilde, &mut state.z_tilde);

    std::mem::swap(&mut state.x_prev, &mut state.x);
    std::mem::swap(&mut state.z_prev, &mut state.z);
    std::mem::swap(&mut state.y_prev, &mut state.y);

    for (((x, &xp), &xt), dx) in state
        .x
        .iter_mut()
        .zip(&state.x_prev)
        .zip(&state.x_tilde)
        .zip(&mut state.delta_x)
    {
        *x = alpha * xt + one_minus_alpha * xp;
        *dx = *x - xp;
    }
    for i in 0..state.z.len() {
        let relaxed = alpha * state.z_tilde[i] + one_minus_alpha * state.z_prev[i];
        let v = relaxed + rho_inv * state.y_prev[i];
        let z = v.max(problem.l[i]).min(problem.u[i]);
        let y = rho * (v - z);
        state.z[i] = z;
        state.y[i] = y;
        state.delta_y[i] = y - state.y_prev[i];
    }
    state.iter += 1;
    Ok(stats)
}

/// Solves `problem` from `initial` (zeros when `None`).
pub fn solve<T: Scalar>(
    problem: &QpProblem<T>,
    settings: &Settings,
    initial: Option<&WarmStart<T>>,
) -> Result<SolveOutcome<T>> {
    solve_observed(problem, settings, initial, &mut ())
}

/// [`solve`] reporting progress to `observer`.
pub fn solve_observed<T: Scalar, O: SolveObserver<T> + ?Sized>(
    problem: &QpProblem<T>,
    settings: &Settings,
    initial: Option<&WarmStart<T>>,
    observer: &mut O,
) -> Result<SolveOutcome<T>> {
    let start = Instant::now();
    settings.validate()?;
    let (n, m) = (problem.n(), problem.m());

    let scaled = if settings.scaling_enabled {
        ruiz_equilibrate(problem, settings.eps_equil, settings.equil_max_passes)?
    } else {
        ScaledProblem::identity(problem)?
    };
    let scaling = &scaled.scaling;

    let rho0 = T::lit(settings.rho_bar_init);
    let mut state = match initial {
        None => SolverState::zeros(n, m, rho0),
        Some(ws) => {
            if ws.x.iter().chain(&ws.z).chain(&ws.y).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("warm start must be finite".into()));
            }
            let (x, z, y) = scaling.scale_solution(&ws.x, &ws.z, &ws.y)?;
            SolverState::new(x, z, y, rho0)
        }
    };

    let pcg_max_iter = settings.pcg_max_iter.unwrap_or_else(|| default_max_iter(n));
    let mut sys = LinearSystem::new(&scaled, T::lit(settings.sigma), rho0, pcg_max_iter)?;
    let lambda = T::lit(settings.lambda_pcg);
    let eps_min = T::lit(settings.eps_pcg_min);

    let mut info = SolveInfo {
        scaling_passes: scaled.info.passes,
        scaling_converged: scaled.info.converged,
        rho_rule: RHO_RULE,
        rho_updates: 0,
        rho_final: settings.rho_bar_init,
        pcg_calls: 0,
        pcg_unconverged: 0,
        pcg_max_iter,
        setup_seconds: start.elapsed().as_secs_f64(),
        precision: T::NAME,
    };
    let mut pcg_total = 0usize;
    // Residuals are evaluated at the start and on check and ρ̄-update
    // iterations; the PCG tolerance always uses the latest evaluation.
    let mut residuals = residual_snapshot(&scaled, &state, settings);
    let mut residuals_iter = 0;
    let mut status = Status::MaxIterReached;
    let mut certificate = None;

    while state.iter < settings.max_admm_iter {
        let eps = adaptive_eps(residuals.prim_scaled, residuals.dual_scaled, lambda, eps_min)?;
        let stats = admm_step(&mut state, &mut sys, &scaled, settings, eps)?;
        pcg_total += stats.iterations;
        info.pcg_calls += 1;
        if !stats.converged {
            info.pcg_unconverged += 1;
        }
        observer.on_pcg(&PcgEvent {
            iter: state.iter,
            prim_scaled: residuals.prim_scaled,
            dual_scaled: residuals.dual_scaled,
            eps,
            stats,
        });

        let check = state.iter % settings.check_interval == 0;
        let rho_due = state.iter % settings.rho_update_interval == 0;
        if check || rho_due {
            residuals = residual_snapshot(&scaled, &state, settings);
            residuals_iter = state.iter;
        }
        observer.on_iteration(&state, &scaled, (residuals_iter == state.iter).then_some(&residuals));
        if state.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "iterates diverged at iteration {}",
                state.iter
            )));
        }

        if check {
            observer.on_termination_check(state.iter, &residuals);
            if residuals.is_optimal() {
                status = Status::Solved;
                break;
            }
            let (dx, dy) = certificate_vectors(&state, scaling)?;
            if check_primal_infeasible(&dy, problem, settings) {
                status = Status::PrimalInfeasible;
                certificate = Some(dy);
                break;
            }
            if check_dual_infeasible(&dx, problem, settings) {
                status = Status::DualInfeasible;
                certificate = Some(dx);
                break;
            }
        }

        if rho_due {
            let old = state.rho_bar;
            let new = adapt_rho(
                old,
                residuals.prim_scaled,
                residuals.dual_scaled,
                &residuals.norms_scaled,
            );
            sys.update_rho(new)?;
            state.rho_bar = new;
            info.rho_updates += 1;
            observer.on_rho_update(state.iter, old, new);
        }
    }

    if residuals_iter != state.iter {
        residuals = residual_snapshot(&scaled, &state, settings);
    }
    info.rho_final = state.rho_bar.as_f64();
    let (x, z, y) = scaling.unscale_solution(&state.x, &state.z, &state.y)?;
    let objective = match status {
        Status::PrimalInfeasible => T::infinity(),
        Status::DualInfeasible => T::neg_infinity(),
        _ => problem.objective(&x)?,
    };
    Ok(SolveOutcome {
        status,
        x,
        z,
        y,
        certificate,
        objective,
        iterations: state.iter,
        pcg_iterations_total: pcg_total,
        r_prim_inf: residuals.prim,
        r_dual_inf: residuals.dual,
        eps_prim: residuals.eps_prim,
        eps_dual: residuals.eps_dual,
        runtime: start.elapsed(),
        info,
    })
}
