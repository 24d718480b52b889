//! Benchmark suites.
//!
//! A suite is a built-in name or `;`-separated entries of the form
//!
//! ```text
//! family:n=8:k=3,4:seeds=1-5:w=1-8:algo=bcpk,exact-minmax:eps=1/2
//! ```
//!
//! Every key but `n` is optional. Defaults: `k=3`, `seeds=1`, `w=1-1`,
//! `algo=bcpk`, `eps=1/2`.

use std::str::FromStr;
use std::time::{Duration, Instant};

use bcp_core::approx::Certificate;
use bcp_core::fpt::solve_fpt_maxmin;
use bcp_core::io::{generate, BenchRecord, Family};
use bcp_core::oracle::{exact_maxmin, exact_minmax, EnumerationBudget};
use bcp_core::partition::{average_bound, cut_vertex_bound};
use bcp_core::scaling::{eps_minmax_bcpk, Epsilon};
use bcp_core::{minmax_bcpk, BcpError, Frac, Result, Weight, WeightedGraph};

/// Largest graph for which min-max and fpt rows also carry the oracle optimum.
const ORACLE_VERTICES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Bcpk,
    Eps,
    ExactMinMax,
    ExactMaxMin,
    Fpt,
}

impl FromStr for Algorithm {
    type Err = BcpError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bcpk" => Algorithm::Bcpk,
            "eps" => Algorithm::Eps,
            "exact-minmax" => Algorithm::ExactMinMax,
            "exact-maxmin" => Algorithm::ExactMaxMin,
            "fpt" => Algorithm::Fpt,
            _ => return Err(BcpError::InvalidInput(format!("unknown algorithm {s:?}"))),
        })
    }
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Bcpk => "bcpk",
            Algorithm::Eps => "eps",
            Algorithm::ExactMinMax => "exact-minmax",
            Algorithm::ExactMaxMin => "exact-maxmin",
            Algorithm::Fpt => "fpt",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub weights: (Weight, Weight),
    pub algorithm: Algorithm,
    pub eps: Epsilon,
}

const BUILTIN: &[(&str, &str)] = &[
    (
        "smoke",
        "star:n=5:k=3:algo=bcpk,exact-minmax;random-tree:n=8:k=3,4:seeds=1-3:w=1-8:algo=bcpk,eps,exact-minmax",
    ),
    (
        "pinned",
        "random-tree:n=10:k=3,4,5:seeds=1-5:w=1-8:algo=bcpk,eps,exact-minmax;\
         tree-plus-edges:n=10:k=3,4:seeds=1-5:w=1-8:algo=bcpk,exact-minmax;\
         spider:n=10:k=3,5:seeds=1-5:w=1-8:algo=bcpk,exact-minmax;\
         grid:n=12:k=2,3,4:seeds=1:algo=fpt,exact-maxmin;\
         star:n=9:k=3,4:algo=bcpk,fpt;\
         random-tree:n=200:k=3,8,16:seeds=1-3:w=1-1000:algo=bcpk,eps",
    ),
];

fn range(s: &str) -> Result<(u64, u64)> {
    let bad = || BcpError::InvalidInput(format!("bad range {s:?}"));
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.parse()
                .map_err(|_| BcpError::InvalidInput(format!("bad list item {t:?}")))
        })
        .collect()
}

/// Expands a suite name or suite text into jobs, in order.
pub fn parse_suite(spec: &str) -> Result<Vec<Job>> {
    let spec = BUILTIN
        .iter()
        .find(|(name, _)| *name == spec)
        .map_or(spec, |(_, body)| body);
    let mut jobs = Vec::new();
    for entry in spec.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let mut parts = entry.split(':');
        let family: Family = parts.next().unwrap().parse()?;
        let (mut n, mut ks, mut seeds, mut w) = (None, vec![3], (1, 1), (1, 1));
        let mut algos = vec![Algorithm::Bcpk];
        let mut eps: Epsilon = "1/2".parse()?;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| BcpError::InvalidInput(format!("expected key=value, got {part:?}")))?;
            match key {
                "n" => n = Some(value.parse().map_err(|_| BcpError::InvalidInput(format!("bad n {value:?}")))?),
                "k" => ks = list(value)?,
                "seeds" => seeds = range(value)?,
                "w" => w = range(value)?,
                "algo" => algos = list(value)?,
                "eps" => eps = value.parse()?,
                _ => return Err(BcpError::InvalidInput(format!("unknown suite key {key:?}"))),
            }
        }
        let n = n.ok_or_else(|| BcpError::InvalidInput(format!("suite entry {entry:?} needs n=")))?;
        for seed in seeds.0..=seeds.1 {
            for &k in &ks {
                for &algorithm in &algos {
                    jobs.push(Job {
                        family,
                        n,
                        k,
                        seed,
                        weights: w,
                        algorithm,
                        eps,
                    });
                }
            }
        }
    }
    Ok(jobs)
}

fn budget(time_limit: Option<Duration>) -> EnumerationBudget {
    EnumerationBudget::default().with_time_limit(time_limit)
}

fn oracle_minmax(g: &WeightedGraph, k: usize, limit: Option<Duration>) -> Option<Weight> {
    (g.n() <= ORACLE_VERTICES)
        .then(|| exact_minmax(g, k, &budget(limit)).ok().map(|s| s.value))
        .flatten()
}

/// Runs one job; the wall time covers the solver call only.
pub fn run_job(job: &Job, time_limit: Option<Duration>) -> Result<BenchRecord> {
    let g = generate(job.family, job.n, job.weights.0..=job.weights.1, job.seed)?;
    let mut rec = BenchRecord {
        instance: format!(
            "{}-n{}-w{}-{}-s{}",
            job.family, job.n, job.weights.0, job.weights.1, job.seed
        ),
        n: g.n(),
        m: g.edge_count(),
        k: job.k,
        algorithm: job.algorithm.name().to_string(),
        value: 0,
        bound_kind: None,
        bound: None,
        ratio: None,
        ratio_decimal: None,
        iterations: None,
        cuts: None,
        wall_ms: 0.0,
    };
    let started = Instant::now();
    let ms = |t: Instant| t.elapsed().as_secs_f64() * 1000.0;
    let minmax_bound = |rec: BenchRecord, value: Weight, cert: Option<&Certificate>| -> Result<BenchRecord> {
        if let Some(opt) = oracle_minmax(&g, job.k, time_limit) {
            let opt = Frac::from_integer(opt as u128);
            return Ok(rec.with_bound("oracle", opt, Some(Frac::from_integer(value as u128) / opt)));
        }
        let (kind, bound) = match cert.and_then(Certificate::star) {
            Some(star) if star.ell() + 1 >= job.k => (
                "cut-vertex",
                Frac::from_integer(cut_vertex_bound(&g, job.k, star.center)? as u128),
            ),
            _ => ("average", average_bound(&g, job.k)),
        };
        Ok(rec.with_bound(kind, bound, Some(Frac::from_integer(value as u128) / bound)))
    };
    match job.algorithm {
        Algorithm::Bcpk => {
            let r = minmax_bcpk(&g, job.k)?;
            rec.wall_ms = ms(started);
            rec.value = r.partition.max_weight();
            rec.iterations = Some(r.bcp3.iterations as u64);
            minmax_bound(rec, r.partition.max_weight(), Some(&r.certificate))
        }
        Algorithm::Eps => {
            let r = eps_minmax_bcpk(&g, job.k, job.eps)?;
            rec.wall_ms = ms(started);
            rec.value = r.partition.max_weight();
            rec.iterations = Some(r.scaled_run.bcp3.iterations as u64);
            minmax_bound(rec, r.partition.max_weight(), None)
        }
        Algorithm::ExactMinMax => {
            let s = exact_minmax(&g, job.k, &budget(time_limit))?;
            rec.wall_ms = ms(started);
            rec.value = s.value;
            Ok(rec)
        }
        Algorithm::ExactMaxMin => {
            let s = exact_maxmin(&g, job.k, &budget(time_limit))?;
            rec.wall_ms = ms(started);
            rec.value = s.value;
            Ok(rec)
        }
        Algorithm::Fpt => {
            let unit = g.unit();
            let s = solve_fpt_maxmin(&unit, job.k, None, time_limit)?;
            rec.wall_ms = ms(started);
            rec.value = s.value as u64;
            rec.cuts = Some(s.model.cuts.len() as u64);
            rec.iterations = Some(s.nodes);
            if unit.n() <= ORACLE_VERTICES {
                if let Ok(opt) = exact_maxmin(&unit, job.k, &budget(time_limit)) {
                    let opt = Frac::from_integer(opt.value as u128);
                    rec = rec.with_bound("oracle", opt, Some(opt / Frac::from_integer(s.value as u128)));
                }
            }
            Ok(rec)
        }
    }
}
