//! Residuals, stopping tests, infeasibility certificates and ρ̄ adaptation.

use crate::error::Result;
use crate::problem::QpProblem;
use crate::scalar::{norm_inf, Scalar};
use crate::scaling::{ScaledProblem, ScalingData};

use super::{Settings, SolverState};

pub const RHO_MIN: f64 = 1e-6;
pub const RHO_MAX: f64 = 1e6;
/// Lower bound on the normalizing scales in the ρ̄ update.
pub const RHO_NORM_FLOOR: f64 = 1e-10;

/// ℓ∞ norms of the terms that make up the residuals, used as relative scales.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IterateNorms<T> {
    pub ax: T,
    pub z: T,
    pub px: T,
    pub aty: T,
    pub q: T,
}

/// Everything computed when residuals are evaluated at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSnapshot<T> {
    /// ‖r̄_prim‖∞ on scaled data.
    pub prim_scaled: T,
    /// ‖r̄_dual‖∞ on scaled data.
    pub dual_scaled: T,
    /// ‖r_prim‖∞ on original data.
    pub prim: T,
    /// ‖r_dual‖∞ on original data.
    pub dual: T,
    pub norms_scaled: IterateNorms<T>,
    pub norms: IterateNorms<T>,
    pub eps_prim: T,
    pub eps_dual: T,
}

impl<T: Scalar> ResidualSnapshot<T> {
    pub fn is_optimal(&self) -> bool {
        self.prim <= self.eps_prim && self.dual <= self.eps_dual
    }
}

/// Componentwise `min(max(v, l), u)`; infinite bounds pass values through.
pub fn project_box<T: Scalar>(v: &[T], l: &[T], u: &[T]) -> Vec<T> {
    v.iter()
        .zip(l.iter().zip(u))
        .map(|(&x, (&lo, &hi))| x.max(lo).min(hi))
        .collect()
}

/// Scaled residuals `r̄_prim = Āx̄ − z̄` and `r̄_dual = P̄x̄ + q̄ + Āᵀȳ`.
pub fn compute_residuals<T: Scalar>(problem: &ScaledProblem<T>, state: &SolverState<T>) -> (Vec<T>, Vec<T>) {
    let parts = ResidualParts::compute(problem, state);
    (parts.r_prim, parts.r_dual)
}

/// Optimality thresholds `ε_prim = ε_abs + ε_rel·max(‖Ax‖∞, ‖z‖∞)` and
/// `ε_dual = ε_abs + ε_rel·max(‖Px‖∞, ‖Aᵀy‖∞, ‖q‖∞)`.
pub fn optimality_tolerances<T: Scalar>(norms: &IterateNorms<T>, settings: &Settings) -> (T, T) {
    let abs = T::lit(settings.eps_abs);
    let rel = T::lit(settings.eps_rel);
    (
        abs + rel * norms.ax.max(norms.z),
        abs + rel * norms.px.max(norms.aty).max(norms.q),
    )
}

pub fn check_optimal<T: Scalar>(r_prim_inf: T, r_dual_inf: T, norms: &IterateNorms<T>, settings: &Settings) -> bool {
    let (eps_prim, eps_dual) = optimality_tolerances(norms, settings);
    r_prim_inf <= eps_prim && r_dual_inf <= eps_dual
}

/// Tests whether `delta_y` (on original data) certifies primal infeasibility:
/// `‖Aᵀδy‖∞ ≤ ε` and `lᵀ(δy)₋ + uᵀ(δy)₊ < −ε` after normalizing `‖δy‖∞ = 1`.
/// The support must be negative by a margin: a value near zero certifies
/// nothing, since the exact condition is `< 0`.
///
/// A multiplier against an infinite bound contributes nothing when its
/// magnitude is within `ε_pinf`, and disqualifies the certificate otherwise.
pub fn check_primal_infeasible<T: Scalar>(delta_y: &[T], problem: &QpProblem<T>, settings: &Settings) -> bool {
    if delta_y.len() != problem.m() {
        return false;
    }
    let eps = T::lit(settings.eps_pinf);
    let scale = norm_inf(delta_y);
    if !(scale > T::zero() && scale.is_finite()) {
        return false;
    }
    let dy: Vec<T> = delta_y.iter().map(|&v| v / scale).collect();

    let mut support = T::zero();
    for ((&v, &lo), &hi) in dy.iter().zip(problem.l()).zip(problem.u()) {
        if v > T::zero() {
            if hi.is_infinite() {
                if v > eps {
                    return false;
                }
            } else {
                support = support + hi * v;
            }
        } else if v < T::zero() {
            if lo.is_infinite() {
                if -v > eps {
                    return false;
                }
            } else {
                support = support + lo * v;
            }
        }
    }
    if !(support < -eps) {
        return false;
    }
    match problem.a().spmv_transpose(&dy) {
        Ok(aty) => norm_inf(&aty) <= eps,
        Err(_) => false,
    }
}

/// Tests whether `delta_x` (on original data) certifies dual infeasibility,
/// after normalizing `‖δx‖∞ = 1`: `‖Pδx‖∞ ≤ ε`, `qᵀδx < −ε`, and for every row
/// `(Aδx)ᵢ ∈ [−ε, ε]` when both bounds are finite, `≥ −ε` when only `uᵢ = +∞`,
/// `≤ ε` when only `lᵢ = −∞`. Free rows impose nothing.
pub fn check_dual_infeasible<T: Scalar>(delta_x: &[T], problem: &QpProblem<T>, settings: &Settings) -> bool {
    if delta_x.len() != problem.n() {
        return false;
    }
    let eps = T::lit(settings.eps_dinf);
    let scale = norm_inf(delta_x);
    if !(scale > T::zero() && scale.is_finite()) {
        return false;
    }
    let dx: Vec<T> = delta_x.iter().map(|&v| v / scale).collect();

    let qdx = dx.iter().zip(problem.q()).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
    if !(qdx < -eps) {
        return false;
    }
    let Ok(pdx) = problem.p_upper().spmv_symmetric_upper(&dx) else {
        return false;
    };
    if norm_inf(&pdx) > eps {
        return false;
    }
    let Ok(adx) = problem.a().spmv(&dx) else {
        return false;
    };
    adx.iter()
        .zip(problem.l().iter().zip(problem.u()))
        .all(|(&v, (&lo, &hi))| match (lo.is_finite(), hi.is_finite()) {
            (true, true) => v.abs() <= eps,
            (true, false) => v >= -eps,
            (false, true) => v <= eps,
            (false, false) => true,
        })
}

/// Residual-balancing ρ̄ update:
/// `ρ̄·√(rel_prim/rel_dual)` clipped to `[RHO_MIN, RHO_MAX]`, where each
/// residual is divided by the largest of its constituent terms.
pub fn adapt_rho<T: Scalar>(rho: T, prim_scaled: T, dual_scaled: T, norms_scaled: &IterateNorms<T>) -> T {
    let floor = T::lit(RHO_NORM_FLOOR);
    let rel_prim = prim_scaled / norms_scaled.ax.max(norms_scaled.z).max(floor);
    let rel_dual = dual_scaled / norms_scaled.px.max(norms_scaled.aty).max(norms_scaled.q).max(floor);
    let ratio = if rel_dual > T::zero() {
        rel_prim / rel_dual
    } else if rel_prim > T::zero() {
        T::infinity()
    } else {
        T::one()
    };
    (rho * ratio.sqrt()).max(T::lit(RHO_MIN)).min(T::lit(RHO_MAX))
}

/// Consecutive-iterate differences mapped to original variables:
/// `δx = Dδx̄`, `δy = c⁻¹Eδȳ`.
pub fn certificate_vectors<T: Scalar>(state: &SolverState<T>, scaling: &ScalingData<T>) -> Result<(Vec<T>, Vec<T>)> {
    let zeros = vec![T::zero(); state.delta_y.len()];
    let (dx, _, dy) = scaling.unscale_solution(&state.delta_x, &zeros, &state.delta_y)?;
    Ok((dx, dy))
}

/// Intermediate products shared by the residual computations.
pub(crate) struct ResidualParts<T> {
    pub ax: Vec<T>,
    pub px: Vec<T>,
    pub aty: Vec<T>,
    pub r_prim: Vec<T>,
    pub r_dual: Vec<T>,
}

impl<T: Scalar> ResidualParts<T> {
    pub(crate) fn compute(problem: &ScaledProblem<T>, state: &SolverState<T>) -> Self {
        let (n, m) = (problem.n(), problem.m());
        let mut ax = vec![T::zero(); m];
        let mut px = vec![T::zero(); n];
        let mut aty = vec![T::zero(); n];
        problem.a.spmv_into(&state.x, &mut ax);
        problem.p.spmv_into(&state.x, &mut px);
        problem.a_t.spmv_into(&state.y, &mut aty);
        let r_prim = ax.iter().zip(&state.z).map(|(&a, &z)| a - z).collect();
        let r_dual = px
            .iter()
            .zip(&problem.q)
            .zip(&aty)
            .map(|((&p, &q), &a)| p + q + a)
            .collect();
        Self {
            ax,
            px,
            aty,
            r_prim,
            r_dual,
        }
    }
}

fn weighted_norm<T: Scalar>(v: &[T], w: &[T]) -> T {
    v.iter().zip(w).fold(T::zero(), |acc, (&a, &b)| acc.max((a * b).abs()))
}

/// Residual norms on scaled and original data plus the optimality thresholds.
pub fn residual_snapshot<T: Scalar>(
    problem: &ScaledProblem<T>,
    state: &SolverState<T>,
    settings: &Settings,
) -> ResidualSnapshot<T> {
    let parts = ResidualParts::compute(problem, state);
    let s = &problem.scaling;
    let norms_scaled = IterateNorms {
        ax: norm_inf(&parts.ax),
        z: norm_inf(&state.z),
        px: norm_inf(&parts.px),
        aty: norm_inf(&parts.aty),
        q: norm_inf(&problem.q),
    };
    let norms = IterateNorms {
        ax: weighted_norm(&parts.ax, &s.e_inv),
        z: weighted_norm(&state.z, &s.e_inv),
        px: s.c_inv * weighted_norm(&parts.px, &s.d_inv),
        aty: s.c_inv * weighted_norm(&parts.aty, &s.d_inv),
        q: s.c_inv * weighted_norm(&problem.q, &s.d_inv),
    };
    let (eps_prim, eps_dual) = optimality_tolerances(&norms, settings);
    ResidualSnapshot {
        prim_scaled: norm_inf(&parts.r_prim),
        dual_scaled: norm_inf(&parts.r_dual),
        prim: weighted_norm(&parts.r_prim, &s.e_inv),
        dual: s.c_inv * weighted_norm(&parts.r_dual, &s.d_inv),
        norms_scaled,
        norms,
        eps_prim,
        eps_dual,
    }
}
