//! Instance and partition files, random instance families and benchmark records.
//!
//! Instance files are line oriented:
//!
//! ```text
//! c any comment
//! p bcp <n> <m>
//! v <id> <weight>      weight is an integer or p/q; missing vertices weigh 1
//! e <u> <v>
//! ```
//!
//! Fractional weights are cleared by multiplying every weight with the least
//! common multiple of the denominators.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{BcpError, Result};
use crate::graph::{Vertex, Weight, WeightedGraph};
use crate::partition::{Frac, Partition};

fn parse_err(line: usize, message: impl Into<String>) -> BcpError {
    BcpError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_weight(token: &str, line: usize) -> Result<Frac> {
    let bad = || parse_err(line, format!("bad weight {token:?}"));
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (p.parse::<u128>().map_err(|_| bad())?, q.parse::<u128>().map_err(|_| bad())?),
        None => (token.parse::<u128>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    if p == 0 {
        return Err(parse_err(line, format!("nonpositive weight {token:?}")));
    }
    Ok(Frac::new(p, q))
}

pub fn parse_instance(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut weights: Vec<Option<Frac>> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = tokens.first() else { continue };
        if tag == "c" {
            continue;
        }
        let int = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected a nonnegative integer, got {t:?}")))
        };
        match (tag, header, tokens.len()) {
            ("p", None, 4) if tokens[1] == "bcp" => {
                let n = int(tokens[2])?;
                if n == 0 {
                    return Err(parse_err(line, "instance needs at least one vertex"));
                }
                header = Some((n, int(tokens[3])?));
                weights = vec![None; n];
            }
            ("p", None, _) => return Err(parse_err(line, "expected `p bcp <n> <m>`")),
            ("p", Some(_), _) => return Err(parse_err(line, "second problem line")),
            (_, None, _) => return Err(parse_err(line, "problem line `p bcp <n> <m>` must come first")),
            ("v", Some((n, _)), 3) => {
                let v = int(tokens[1])?;
                if v >= n {
                    return Err(parse_err(line, format!("vertex {v} outside 0..{n}")));
                }
                if weights[v].is_some() {
                    return Err(parse_err(line, format!("vertex {v} given twice")));
                }
                weights[v] = Some(parse_weight(tokens[2], line)?);
            }
            ("e", Some((n, _)), 3) => {
                let (u, v) = (int(tokens[1])?, int(tokens[2])?);
                if u >= n || v >= n {
                    return Err(parse_err(line, format!("edge {u}-{v} leaves 0..{n}")));
                }
                if u == v {
                    return Err(parse_err(line, format!("loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(parse_err(line, format!("duplicate edge {u}-{v}")));
                }
                edges.push((u, v));
            }
            ("v" | "e", _, _) => return Err(parse_err(line, format!("wrong number of fields for `{tag}`"))),
            _ => return Err(parse_err(line, format!("unknown line type {tag:?}"))),
        }
    }
    let Some((_, m)) = header else {
        return Err(parse_err(0, "missing problem line"));
    };
    if edges.len() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    let weights: Vec<Frac> = weights.into_iter().map(|w| w.unwrap_or(Frac::from_integer(1))).collect();
    let lcm = weights.iter().fold(1u128, |acc, w| acc.lcm(w.denom()));
    let cleared = weights
        .iter()
        .map(|w| {
            let x = *w * Frac::from_integer(lcm);
            Weight::try_from(x.to_integer())
                .map_err(|_| BcpError::InvalidInput("cleared weight exceeds u64".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedGraph::new(cleared, edges)
}

/// Canonical text form: header, every vertex, then edges in `u < v` order.
pub fn write_instance(g: &WeightedGraph) -> String {
    let mut out = format!("p bcp {} {}\n", g.n(), g.edge_count());
    for (v, w) in g.weights().iter().enumerate() {
        writeln!(out, "v {v} {w}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn read_instance(mut r: impl Read) -> Result<WeightedGraph> {
    let mut text = String::new();
    r.read_to_string(&mut text)
        .map_err(|e| BcpError::InvalidInput(format!("cannot read instance: {e}")))?;
    parse_instance(&text)
}

/// One class per line, vertex ids separated by whitespace; `c` lines are comments.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<Vertex>>> {
    let mut classes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed == "c" || trimmed.starts_with("c ") {
            continue;
        }
        let class = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<Vertex>()
                    .map_err(|_| parse_err(idx + 1, format!("bad vertex id {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        classes.push(class);
    }
    Ok(classes)
}

/// Classes ordered by weight, then by smallest vertex.
pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for class in p.to_lists() {
        let ids: Vec<String> = class.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

/// `value` with `places` decimals, rounded half up.
pub fn decimal(value: Frac, places: u32) -> String {
    let scale = 10u128.pow(places);
    let scaled = (value * Frac::from_integer(scale) + Frac::new(1, 2)).floor().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    RandomTree,
    TreePlusEdges,
    Spider,
    Grid,
    Star,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::RandomTree,
        Family::TreePlusEdges,
        Family::Spider,
        Family::Grid,
        Family::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomTree => "random-tree",
            Family::TreePlusEdges => "tree-plus-edges",
            Family::Spider => "spider",
            Family::Grid => "grid",
            Family::Star => "star",
        }
    }
}

impl FromStr for Family {
    type Err = BcpError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| BcpError::InvalidInput(format!("unknown family {s:?}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `rows × cols` grid, vertex `r·cols + c`.
pub fn grid(rows: usize, cols: usize, weights: Vec<Weight>) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    WeightedGraph::new(weights, edges)
}

/// A connected random instance of `family` on `n` vertices, reproducible from `seed`.
///
/// Grids use the most square `rows × cols = n` factorization.
pub fn generate(
    family: Family,
    n: usize,
    weights: RangeInclusive<Weight>,
    seed: u64,
) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(BcpError::InvalidInput(format!("need n >= 3, got {n}")));
    }
    if *weights.start() == 0 || weights.is_empty() {
        return Err(BcpError::InvalidInput(format!(
            "weight range {}..={} must be nonempty and positive",
            weights.start(),
            weights.end()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    match family {
        Family::RandomTree | Family::TreePlusEdges => {
            for v in 1..n {
                edges.push((rng.random_range(0..v), v));
            }
            if family == Family::TreePlusEdges {
                let mut present: HashSet<(Vertex, Vertex)> =
                    edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
                let extra = (n / 2).min(n * (n - 1) / 2 - (n - 1));
                let mut added = 0;
                while added < extra {
                    let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
                    if u != v && present.insert((u.min(v), u.max(v))) {
                        edges.push((u, v));
                        added += 1;
                    }
                }
            }
        }
        Family::Spider => {
            let legs = rng.random_range(3..=(n - 1).div_ceil(2).max(3)).min(n - 1);
            let mut tips: Vec<Vertex> = vec![0; legs];
            for v in 1..n {
                let leg = if v <= legs { v - 1 } else { rng.random_range(0..legs) };
                edges.push((tips[leg], v));
                tips[leg] = v;
            }
        }
        Family::Grid => {
            let rows = (1..=n).filter(|r| n % r == 0 && r * r <= n).max().unwrap();
            let w = (0..n).map(|_| rng.random_range(weights.clone())).collect();
            return grid(rows, n / rows, w);
        }
        Family::Star => edges.extend((1..n).map(|v| (0, v))),
    }
    let w = (0..n).map(|_| rng.random_range(weights.clone())).collect();
    WeightedGraph::new(w, edges)
}

/// One row of benchmark output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub algorithm: String,
    pub value: u64,
    /// `average`, `cut-vertex` or `oracle`.
    pub bound_kind: Option<String>,
    /// Exact fraction.
    pub bound: Option<String>,
    /// `value / bound` for min-max, `bound / value` for max-min, as an exact fraction.
    pub ratio: Option<String>,
    pub ratio_decimal: Option<String>,
    pub iterations: Option<u64>,
    pub cuts: Option<u64>,
    pub wall_ms: f64,
}

pub const BENCH_HEADER: [&str; 13] = [
    "instance",
    "n",
    "m",
    "k",
    "algorithm",
    "value",
    "bound_kind",
    "bound",
    "ratio",
    "ratio_decimal",
    "iterations",
    "cuts",
    "wall_ms",
];

impl BenchRecord {
    /// Fills the bound columns; the ratio is only set when the bound is positive.
    pub fn with_bound(mut self, kind: &str, bound: Frac, ratio: Option<Frac>) -> Self {
        self.bound_kind = Some(kind.to_string());
        self.bound = Some(bound.to_string());
        if let Some(r) = ratio {
            self.ratio = Some(r.to_string());
            self.ratio_decimal = Some(decimal(r, 6));
        }
        self
    }
}

/// Writes the header and `records` as CSV.
pub fn write_bench_csv<W: Write>(w: W, records: &[BenchRecord]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let io = |e: csv::Error| BcpError::InvalidInput(format!("cannot write csv: {e}"));
    out.write_record(BENCH_HEADER).map_err(io)?;
    for r in records {
        out.serialize(r).map_err(io)?;
    }
    out.flush()
        .map_err(|e| BcpError::InvalidInput(format!("cannot write csv: {e}")))
}

pub fn read_bench_csv<R: Read>(r: R) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(|e| BcpError::InvalidInput(format!("bad csv row: {e}"))))
        .collect()
}
