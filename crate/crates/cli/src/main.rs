use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pcgqp::io::{load_problem, save_problem};
use pcgqp::{QpProblem, Settings};
use pcgqp_bench::{generate, run_benchmark, write_csv, BenchConfig, Precision, ProblemClass};

#[derive(Parser)]
#[command(name = "pcgqp", version, about = "ADMM/PCG quadratic programming solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate benchmark problems or run a benchmark sweep.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Solve a problem file and print a JSON summary.
    Solve(SolveArgs),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Solve generated instances and write one CSV row per instance.
    Run(RunArgs),
    /// Write one generated instance in the sparse text format.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated classes; all seven when omitted.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    /// Scales as an inclusive range `a..b` or a comma-separated list.
    #[arg(long, default_value = "1..8")]
    scales: String,
    /// Instances per (class, scale).
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Seed of the first instance; instance k uses `seed_base + k`.
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write per-size averages to this CSV file.
    #[arg(long)]
    averages: Option<PathBuf>,
    /// JSON settings file (keys are the solver setting names).
    #[arg(long)]
    settings: Option<PathBuf>,
    #[arg(long, default_value = "double")]
    precision: Precision,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    class: ProblemClass,
    #[arg(long)]
    scale: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    settings: Option<PathBuf>,
    #[arg(long, default_value = "double")]
    precision: Precision,
    /// Write the primal solution, one value per line.
    #[arg(long)]
    solution: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench(BenchCommand::Run(args)) => bench_run(args),
        Command::Bench(BenchCommand::Gen(args)) => bench_gen(args),
        Command::Solve(args) => solve(args),
    }
}

fn load_settings(path: Option<&Path>) -> Result<Settings> {
    match path {
        Some(p) => Settings::load(p).with_context(|| format!("reading settings from {}", p.display())),
        None => Ok(Settings::default()),
    }
}

fn parse_scales(text: &str) -> Result<Vec<usize>> {
    let scales: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().with_context(|| format!("bad scale range `{text}`"))?;
        let b: usize = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .with_context(|| format!("bad scale range `{text}`"))?;
        (a..=b).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().with_context(|| format!("bad scale `{s}`")))
            .collect::<Result<_>>()?
    };
    if scales.contains(&0) {
        bail!("scales start at 1");
    }
    Ok(scales)
}

fn bench_run(args: RunArgs) -> Result<()> {
    let classes = args
        .classes
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<ProblemClass>())
        .collect::<Result<Vec<_>, _>>()?;
    let config = BenchConfig {
        classes: if args.classes.is_empty() {
            ProblemClass::ALL.to_vec()
        } else {
            classes
        },
        scales: parse_scales(&args.scales)?,
        instances_per_size: args.seeds,
        base_seed: args.seed_base,
        settings: load_settings(args.settings.as_deref())?,
        precision: args.precision,
        jobs: args.jobs,
    };
    let report = run_benchmark(&config)?;
    let out = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_csv(BufWriter::new(out), &report.records)?;
    if let Some(path) = &args.averages {
        let out = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_csv(BufWriter::new(out), &report.averages)?;
    }
    let failed = report.records.iter().filter(|r| r.status != "solved").count();
    eprintln!(
        "{} instances written to {} ({} not solved)",
        report.records.len(),
        args.out.display(),
        failed
    );
    Ok(())
}

fn bench_gen(args: GenArgs) -> Result<()> {
    let problem = generate(args.class, args.scale, args.seed)?;
    save_problem(&args.out, &problem).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "{} scale {} seed {}: n = {}, m = {}, N = {}",
        args.class,
        args.scale,
        args.seed,
        problem.n(),
        problem.m(),
        problem.size_n()
    );
    Ok(())
}

fn solve(args: SolveArgs) -> Result<()> {
    let settings = load_settings(args.settings.as_deref())?;
    let problem: QpProblem<f64> =
        load_problem(&args.problem).with_context(|| format!("reading {}", args.problem.display()))?;
    let (summary, x) = match args.precision {
        Precision::Double => {
            let out = pcgqp::solve(&problem, &settings, None)?;
            (out.summary(), out.x)
        }
        Precision::Single => {
            let out = pcgqp::solve(&problem.cast::<f32>(), &settings, None)?;
            (out.summary(), out.x.iter().map(|&v| v as f64).collect())
        }
    };
    if let Some(path) = &args.solution {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        pcgqp::io::write_vector(&mut w, &x)?;
        w.flush()?;
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    serde_json::to_writer(&mut lock, &summary)?;
    writeln!(lock)?;
    Ok(())
}
