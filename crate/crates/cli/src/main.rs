use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use bcp_core::fpt::solve_fpt_maxmin;
use bcp_core::io::{generate, parse_instance, parse_partition, write_bench_csv, write_instance, write_partition, Family};
use bcp_core::oracle::{exact_maxmin, exact_minmax, EnumerationBudget};
use bcp_core::partition::validate;
use bcp_core::scaling::{eps_minmax_bcpk, Epsilon};
use bcp_core::{minmax_bcpk, BcpError, Result, Vertex, WeightedGraph};

mod suite;

/// Balanced connected k-partition solvers.
#[derive(Parser)]
#[command(name = "bcp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Min-max k-partition by Merge/Pull (k/2-approximation), optionally with weight scaling.
    Solve {
        #[arg(long)]
        k: usize,
        /// Additive slack on the ratio, e.g. 1/2 or 0.1; enables weight scaling.
        #[arg(long)]
        epsilon: Option<String>,
        /// Instance file, `-` for stdin.
        instance: PathBuf,
    },
    /// Exhaustive optimum for small graphs.
    Exact {
        #[arg(long, value_enum)]
        objective: Objective,
        #[arg(long)]
        k: usize,
        instance: PathBuf,
    },
    /// Exact max-min k-partition of an unweighted graph via a vertex cover.
    FptMaxmin {
        #[arg(long)]
        k: usize,
        /// Comma-separated vertex cover; computed greedily when absent.
        #[arg(long, value_delimiter = ',')]
        cover: Option<Vec<Vertex>>,
        /// Write the model and the collected cuts to this file.
        #[arg(long)]
        dump_model: Option<PathBuf>,
        instance: PathBuf,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Weight range `lo-hi` or a single value.
        #[arg(long, default_value = "1")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite and write one CSV row per job.
    Bench {
        /// Built-in suite name (`smoke`, `pinned`) or a suite spec.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a partition file against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        /// Expected number of classes; defaults to the number of lines.
        #[arg(long)]
        k: Option<usize>,
        partition: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Minmax,
    Maxmin,
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| BcpError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn load(path: &Path) -> Result<WeightedGraph> {
    parse_instance(&read_text(path)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| BcpError::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

/// Per-instance cap for the oracle and the vertex-cover search.
fn time_limit() -> Result<Option<Duration>> {
    match std::env::var("BCP_BUDGET_SECONDS") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x >= 0.0)
            .map(|x| Some(Duration::from_secs_f64(x)))
            .ok_or_else(|| BcpError::InvalidInput(format!("BCP_BUDGET_SECONDS must be a nonnegative number, got {s:?}"))),
    }
}

fn run(command: Command) -> Result<String> {
    let mut out = String::new();
    match command {
        Command::Solve { k, epsilon, instance } => {
            let g = load(&instance)?;
            if k < 3 || k > g.n() {
                return Err(BcpError::InvalidInput(format!(
                    "solve needs 3 <= k <= {} (the approximation covers k >= 3), got {k}",
                    g.n()
                )));
            }
            match epsilon {
                None => {
                    let r = minmax_bcpk(&g, k)?;
                    out += &format!("c certificate {}\n", r.certificate.name());
                    out += &format!("c value {}\n", r.partition.max_weight());
                    out += &write_partition(&r.partition);
                }
                Some(e) => {
                    let eps: Epsilon = e.parse()?;
                    let r = eps_minmax_bcpk(&g, k, eps)?;
                    out += &format!("c scaled-certificate {}\n", r.scaled_certificate.name());
                    out += &format!("c lambda {}\n", r.instance.lambda);
                    out += &format!("c value {}\n", r.partition.max_weight());
                    out += &write_partition(&r.partition);
                }
            }
        }
        Command::Exact { objective, k, instance } => {
            let g = load(&instance)?;
            let budget = EnumerationBudget::default().with_time_limit(time_limit()?);
            let s = match objective {
                Objective::Minmax => exact_minmax(&g, k, &budget)?,
                Objective::Maxmin => exact_maxmin(&g, k, &budget)?,
            };
            out += &format!("c value {}\n", s.value);
            out += &write_partition(&s.witness);
        }
        Command::FptMaxmin { k, cover, dump_model, instance } => {
            let g = load(&instance)?;
            let s = solve_fpt_maxmin(&g, k, cover.as_deref(), time_limit()?)?;
            if let Some(path) = dump_model {
                write_file(&path, &s.model.to_string())?;
            }
            out += &format!("c cover-size {}\n", s.model.decomposition.cover_size());
            out += &format!("c cuts {}\n", s.model.cuts.len());
            out += &format!("c value {}\n", s.value);
            out += &write_partition(&s.partition);
        }
        Command::Gen { family, n, weights, seed, out: path } => {
            let family: Family = family.parse()?;
            let bad = || BcpError::InvalidInput(format!("bad weight range {weights:?}"));
            let (lo, hi) = weights.split_once('-').unwrap_or((&weights, &weights));
            let (lo, hi) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
            let g = generate(family, n, lo..=hi, seed)?;
            let text = format!("c {family} n={n} weights={lo}-{hi} seed={seed}\n{}", write_instance(&g));
            match path {
                Some(p) => write_file(&p, &text)?,
                None => out = text,
            }
        }
        Command::Bench { suite: spec, out: path, jobs } => {
            let plan = suite::parse_suite(&spec)?;
            let limit = time_limit()?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| BcpError::Internal(e.to_string()))?;
            let results: Vec<_> = pool.install(|| plan.par_iter().map(|job| suite::run_job(job, limit)).collect());
            let mut records = Vec::with_capacity(results.len());
            for (job, r) in plan.iter().zip(results) {
                match r {
                    Ok(rec) => records.push(rec),
                    Err(e) => eprintln!("c skipped {:?} {}-n{} k={} seed={}: {e}", job.algorithm, job.family, job.n, job.k, job.seed),
                }
            }
            let file = fs::File::create(&path)
                .map_err(|e| BcpError::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
            write_bench_csv(file, &records)?;
            out += &format!("c rows {}\n", records.len());
        }
        Command::Validate { instance, k, partition } => {
            let g = load(&instance)?;
            let lists = parse_partition(&read_text(&partition)?)?;
            let report = validate(&g, &lists, k.unwrap_or(lists.len()));
            if !report.is_valid() {
                return Err(BcpError::InvalidInput(format!("invalid partition: {report}")));
            }
            out += "c valid\n";
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bcp: {e}");
            ExitCode::from(match e {
                BcpError::InvalidInput(_) | BcpError::Parse { .. } | BcpError::Contract(_) => 2,
                BcpError::BudgetExceeded(_) => 3,
                BcpError::Internal(_) => 1,
            })
        }
    }
}
