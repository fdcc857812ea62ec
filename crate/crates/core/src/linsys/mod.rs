//! Inexact solution of the reduced KKT system `(P̄ + σI + ρ̄ĀᵀĀ) x = b`.
//!
//! The coefficient matrix is never formed: [`ReducedKktOperator`] applies it
//! with three sparse products, and [`pcg_solve`] runs Jacobi-preconditioned
//! conjugate gradient on it with a warm start and a relative ℓ∞ stopping test.

mod operator;
mod pcg;

pub use operator::{JacobiPreconditioner, ReducedKktOperator};
pub use pcg::{adaptive_eps, default_max_iter, pcg_solve, PcgIterate, PcgResult, PcgStats, PcgWorkspace};

/// Residual weight in the adaptive PCG tolerance rule.
pub const DEFAULT_LAMBDA: f64 = 0.15;
/// Floor of the adaptive PCG tolerance.
pub const DEFAULT_EPS_MIN: f64 = 1e-7;
