//! Seeded QP generators and benchmark sweeps for `pcgqp`.
//!
//! Seven problem classes (control, equality, huber, lasso, portfolio, random,
//! svm) are generated at integer scales `s ≥ 1`, where scale `s` targets
//! `N = nnz(P) + nnz(A) ≈ 10^(3 + 0.4(s − 1))`: scale 1 is about 10³ and
//! scale 8 about 6·10⁵.
//!
//! Every instance is drawn from a ChaCha8 stream (`rand_chacha`) keyed by
//! `(seed, class, scale)`, see [`instance_rng`], so the same triple yields
//! the same problem on every platform.

pub mod build;
pub mod classes;
pub mod runner;

use pcgqp::QpProblem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use classes::{Instance, ProblemClass};
pub use runner::{
    run_benchmark, solve_record, write_csv, BenchConfig, BenchRecord, BenchReport, Precision, SizeAverage,
};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("unknown problem class `{0}`")]
    UnknownClass(String),
    #[error("scale must be at least 1, got {0}")]
    InvalidScale(usize),
    #[error(transparent)]
    Solver(#[from] pcgqp::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

/// One generator invocation: `instances_per_size` problems of `class` at
/// `scale_index`, using seeds `seed, seed + 1, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchSpec {
    pub class: ProblemClass,
    pub scale_index: usize,
    pub seed: u64,
    pub instances_per_size: usize,
}

impl BenchSpec {
    pub fn instances(&self) -> impl Iterator<Item = Result<(u64, Instance)>> + '_ {
        (0..self.instances_per_size as u64).map(move |k| {
            let seed = self.seed + k;
            generate_instance(self.class, self.scale_index, seed).map(|inst| (seed, inst))
        })
    }
}

/// Target `N` for a scale: `10^(3 + 0.4(s − 1))`.
pub fn target_size(scale: usize) -> Result<f64> {
    if scale == 0 {
        return Err(BenchError::InvalidScale(scale));
    }
    Ok(10f64.powf(3.0 + 0.4 * (scale as f64 - 1.0)))
}

/// Generator stream for one instance.
///
/// The 32-byte ChaCha8 key is `seed` (u64 little endian), the class id and
/// the scale (u32 little endian each), followed by zero bytes.
pub fn instance_rng(class: ProblemClass, scale: usize, seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&class.id().to_le_bytes());
    key[12..16].copy_from_slice(&(scale as u32).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn generate_instance(class: ProblemClass, scale: usize, seed: u64) -> Result<Instance> {
    let dim = class.dimension_for(target_size(scale)?);
    let mut rng = instance_rng(class, scale, seed);
    Ok(Instance::random(class, dim, &mut rng))
}

pub fn generate(class: ProblemClass, scale: usize, seed: u64) -> Result<QpProblem<f64>> {
    Ok(generate_instance(class, scale, seed)?.to_qp()?)
}
