//! Matrix-free ADMM solver for convex quadratic programs.
//!
//! Solves problems of the form
//!
//! ```text
//! minimize    ½ xᵀPx + qᵀx
//! subject to  l ≤ Ax ≤ u
//! ```
//!
//! with a scalar-penalty ADMM iteration whose linear subproblem, the reduced
//! KKT system `(P + σI + ρ̄AᵀA) x = b`, is solved inexactly by a Jacobi
//! preconditioned conjugate gradient method. The problem data is stored in
//! CSR form (full `P`, both `A` and `Aᵀ`) and equilibrated with a modified
//! Ruiz scheme before the iteration starts.
//!
//! ```
//! use pcgqp::{CsrMatrix, QpProblem, Settings, Status};
//!
//! // minimize ½x² subject to x = 1
//! let p = CsrMatrix::<f64>::identity(1);
//! let a = CsrMatrix::<f64>::identity(1);
//! let problem = QpProblem::new(p, vec![0.0], a, vec![1.0], vec![1.0]).unwrap();
//! let outcome = pcgqp::solve(&problem, &Settings::default(), None).unwrap();
//! assert_eq!(outcome.status, Status::Solved);
//! assert!((outcome.x[0] - 1.0).abs() < 1e-3);
//! ```

// `!(x > 0)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod linsys;
pub mod problem;
pub mod scalar;
pub mod scaling;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
pub use linsys::{adaptive_eps, pcg_solve, JacobiPreconditioner, PcgResult, ReducedKktOperator};
pub use problem::QpProblem;
pub use scalar::{Real, Scalar};
pub use scaling::{ruiz_equilibrate, ScaledProblem, ScalingData};
pub use solver::{solve, solve_observed, Settings, SolveObserver, SolveOutcome, SolveSummary, Status, WarmStart};
pub use sparse::{CooMatrix, CscMatrix, CsrMatrix, RowIndexCache};
