//! The seven benchmark problem classes.

pub mod control;
pub mod equality;
pub mod huber;
pub mod lasso;
pub mod portfolio;
pub mod random_qp;
pub mod svm;

use std::fmt;
use std::str::FromStr;

use pcgqp::{QpProblem, Result};
use rand::Rng;

pub use control::Control;
pub use equality::Equality;
pub use huber::Huber;
pub use lasso::Lasso;
pub use portfolio::Portfolio;
pub use random_qp::RandomQp;
pub use svm::Svm;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemClass {
    Control,
    Equality,
    Huber,
    Lasso,
    Portfolio,
    Random,
    Svm,
}

impl ProblemClass {
    pub const ALL: [ProblemClass; 7] = [
        ProblemClass::Control,
        ProblemClass::Equality,
        ProblemClass::Huber,
        ProblemClass::Lasso,
        ProblemClass::Portfolio,
        ProblemClass::Random,
        ProblemClass::Svm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemClass::Control => "control",
            ProblemClass::Equality => "equality",
            ProblemClass::Huber => "huber",
            ProblemClass::Lasso => "lasso",
            ProblemClass::Portfolio => "portfolio",
            ProblemClass::Random => "random",
            ProblemClass::Svm => "svm",
        }
    }

    /// Stable numeric id mixed into the generator seed.
    pub fn id(self) -> u32 {
        self as u32
    }

    /// Size parameter (state, variable, feature or asset count) whose
    /// expected `nnz(P) + nnz(A)` is closest to `target`.
    pub fn dimension_for(self, target: f64) -> usize {
        match self {
            ProblemClass::Control => control::dims_for_target(target),
            ProblemClass::Equality => equality::dims_for_target(target),
            ProblemClass::Huber => huber::dims_for_target(target),
            ProblemClass::Lasso => lasso::dims_for_target(target),
            ProblemClass::Portfolio => portfolio::dims_for_target(target),
            ProblemClass::Random => random_qp::dims_for_target(target),
            ProblemClass::Svm => svm::dims_for_target(target),
        }
    }
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemClass {
    type Err = BenchError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| BenchError::UnknownClass(s.to_string()))
    }
}

/// A generated instance together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Control(Control),
    Equality(Equality),
    Huber(Huber),
    Lasso(Lasso),
    Portfolio(Portfolio),
    Random(RandomQp),
    Svm(Svm),
}

impl Instance {
    /// Draws an instance of `class` with size parameter `dim`.
    pub fn random<R: Rng + ?Sized>(class: ProblemClass, dim: usize, rng: &mut R) -> Self {
        match class {
            ProblemClass::Control => Instance::Control(Control::random(rng, dim)),
            ProblemClass::Equality => Instance::Equality(Equality::random(rng, dim)),
            ProblemClass::Huber => Instance::Huber(Huber::random(rng, dim)),
            ProblemClass::Lasso => Instance::Lasso(Lasso::random(rng, dim)),
            ProblemClass::Portfolio => Instance::Portfolio(Portfolio::random(rng, dim)),
            ProblemClass::Random => Instance::Random(RandomQp::random(rng, dim)),
            ProblemClass::Svm => Instance::Svm(Svm::random(rng, dim)),
        }
    }

    pub fn class(&self) -> ProblemClass {
        match self {
            Instance::Control(_) => ProblemClass::Control,
            Instance::Equality(_) => ProblemClass::Equality,
            Instance::Huber(_) => ProblemClass::Huber,
            Instance::Lasso(_) => ProblemClass::Lasso,
            Instance::Portfolio(_) => ProblemClass::Portfolio,
            Instance::Random(_) => ProblemClass::Random,
            Instance::Svm(_) => ProblemClass::Svm,
        }
    }

    pub fn to_qp(&self) -> Result<QpProblem<f64>> {
        match self {
            Instance::Control(c) => c.to_qp(),
            Instance::Equality(c) => c.to_qp(),
            Instance::Huber(c) => c.to_qp(),
            Instance::Lasso(c) => c.to_qp(),
            Instance::Portfolio(c) => c.to_qp(),
            Instance::Random(c) => c.to_qp(),
            Instance::Svm(c) => c.to_qp(),
        }
    }

    /// Objective of the original nonsmooth problem at the `x` block of a QP
    /// solution, for the classes that are reformulations.
    pub fn direct_objective(&self, qp_x: &[f64]) -> Option<f64> {
        match self {
            Instance::Huber(h) => Some(h.direct_objective(h.x_block(qp_x))),
            Instance::Lasso(l) => Some(l.direct_objective(l.x_block(qp_x))),
            Instance::Svm(s) => Some(s.direct_objective(s.x_block(qp_x))),
            _ => None,
        }
    }
}
