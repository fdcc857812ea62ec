//! Benchmark sweeps: generate, solve, time, and record.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use pcgqp::{QpProblem, Scalar, Settings};
use rayon::prelude::*;
use serde::Serialize;

use crate::{generate, BenchError, ProblemClass, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    Single,
    #[default]
    Double,
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            _ => Err(format!("unknown precision `{s}` (expected single or double)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub classes: Vec<ProblemClass>,
    pub scales: Vec<usize>,
    /// Instances per (class, scale); instance `k` uses seed `base_seed + k`.
    pub instances_per_size: usize,
    pub base_seed: u64,
    pub settings: Settings,
    pub precision: Precision,
    /// Worker threads; 1 solves sequentially.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            classes: ProblemClass::ALL.to_vec(),
            scales: (1..=8).collect(),
            instances_per_size: 10,
            base_seed: 0,
            settings: Settings::default(),
            precision: Precision::Double,
            jobs: 1,
        }
    }
}

/// One solved instance. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub class_name: String,
    /// `nnz(P) + nnz(A)` with `P` stored as its upper triangle.
    #[serde(rename = "N")]
    pub size: usize,
    pub n: usize,
    pub m: usize,
    /// Solver status, or `error` when generation or the solve failed.
    pub status: String,
    pub iterations: usize,
    pub pcg_total: usize,
    pub runtime_seconds: f64,
    pub r_prim_inf: f64,
    pub r_dual_inf: f64,
}

/// Means over the instances of one (class, scale) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeAverage {
    pub class_name: String,
    pub scale: usize,
    pub instances: usize,
    pub solved: usize,
    #[serde(rename = "N")]
    pub mean_size: f64,
    pub mean_iterations: f64,
    pub mean_pcg_total: f64,
    pub mean_runtime_seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    /// Ordered by class, then scale, then instance.
    pub records: Vec<BenchRecord>,
    pub averages: Vec<SizeAverage>,
}

/// Solves `problem` in the requested precision and fills a record. Only the
/// solve is timed; it includes equilibration.
pub fn solve_record(
    class: ProblemClass,
    problem: &QpProblem<f64>,
    settings: &Settings,
    precision: Precision,
) -> BenchRecord {
    match precision {
        Precision::Double => record_for(class, problem, settings),
        Precision::Single => record_for(class, &problem.cast::<f32>(), settings),
    }
}

fn record_for<T: Scalar>(class: ProblemClass, problem: &QpProblem<T>, settings: &Settings) -> BenchRecord {
    let start = Instant::now();
    let outcome = pcgqp::solve(problem, settings, None);
    let runtime = start.elapsed().as_secs_f64();
    let mut record = BenchRecord {
        class_name: class.name().to_string(),
        size: problem.size_n(),
        n: problem.n(),
        m: problem.m(),
        status: "error".to_string(),
        iterations: 0,
        pcg_total: 0,
        runtime_seconds: runtime,
        r_prim_inf: f64::NAN,
        r_dual_inf: f64::NAN,
    };
    if let Ok(out) = outcome {
        record.status = out.status.to_string();
        record.iterations = out.iterations;
        record.pcg_total = out.pcg_iterations_total;
        record.r_prim_inf = out.r_prim_inf.as_f64();
        record.r_dual_inf = out.r_dual_inf.as_f64();
    }
    record
}

fn run_one(class: ProblemClass, scale: usize, seed: u64, config: &BenchConfig) -> BenchRecord {
    match generate(class, scale, seed) {
        Ok(problem) => solve_record(class, &problem, &config.settings, config.precision),
        Err(_) => BenchRecord {
            class_name: class.name().to_string(),
            size: 0,
            n: 0,
            m: 0,
            status: "error".to_string(),
            iterations: 0,
            pcg_total: 0,
            runtime_seconds: 0.0,
            r_prim_inf: f64::NAN,
            r_dual_inf: f64::NAN,
        },
    }
}

/// Runs the sweep. Failures are recorded with status `error` and never abort
/// it; records come out in (class, scale, instance) order whatever `jobs` is.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    for &s in &config.scales {
        if s == 0 {
            return Err(BenchError::InvalidScale(s));
        }
    }
    let tasks: Vec<(ProblemClass, usize, u64)> = config
        .classes
        .iter()
        .flat_map(|&c| {
            config
                .scales
                .iter()
                .flat_map(move |&s| (0..config.instances_per_size as u64).map(move |k| (c, s, config.base_seed + k)))
        })
        .collect();

    let records: Vec<BenchRecord> = if config.jobs <= 1 {
        tasks.iter().map(|&(c, s, seed)| run_one(c, s, seed, config)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| BenchError::Io(std::io::Error::other(e)))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|&(c, s, seed)| run_one(c, s, seed, config))
                .collect()
        })
    };

    let per_size = config.instances_per_size.max(1);
    let averages = records
        .chunks(per_size)
        .zip(tasks.chunks(per_size))
        .map(|(group, t)| average(group, t[0].1))
        .collect();
    Ok(BenchReport { records, averages })
}

fn average(group: &[BenchRecord], scale: usize) -> SizeAverage {
    let k = group.len() as f64;
    let mean = |f: &dyn Fn(&BenchRecord) -> f64| group.iter().map(f).sum::<f64>() / k;
    SizeAverage {
        class_name: group[0].class_name.clone(),
        scale,
        instances: group.len(),
        solved: group.iter().filter(|r| r.status == "solved").count(),
        mean_size: mean(&|r| r.size as f64),
        mean_iterations: mean(&|r| r.iterations as f64),
        mean_pcg_total: mean(&|r| r.pcg_total as f64),
        mean_runtime_seconds: mean(&|r| r.runtime_seconds),
    }
}

/// Writes rows with a header line.
pub fn write_csv<W: Write, S: Serialize>(out: W, rows: &[S]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
