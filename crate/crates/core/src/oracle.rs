//! Exhaustive ground truth for small graphs.
//!
//! Connected k-partitions are enumerated as restricted-growth strings over
//! the vertices in id order (vertex 0 always opens class 0), so each
//! unordered partition appears exactly once. A branch dies as soon as some
//! class holds a component that can no longer grow (no unassigned neighbor)
//! next to another component of the same class.

use std::time::{Duration, Instant};

use crate::error::{contract, BcpError, Result};
use crate::graph::{components, is_connected, Vertex, VertexSet, Weight, WeightedGraph};
use crate::partition::{OrderedPartition3, Partition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_vertices: usize,
    /// Cap on the number of partitions yielded.
    pub max_partitions: u64,
    pub time_limit: Option<Duration>,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_vertices: 14,
            max_partitions: 100_000_000,
            time_limit: None,
        }
    }
}

impl EnumerationBudget {
    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }
}

struct Enumerator<'a, F> {
    g: &'a WeightedGraph,
    k: usize,
    budget: &'a EnumerationBudget,
    started: Instant,
    nodes: u64,
    yielded: u64,
    /// Largest neighbor id of each vertex.
    reach: Vec<Vertex>,
    classes: Vec<VertexSet>,
    visit: F,
}

impl<F: FnMut(&[VertexSet])> Enumerator<'_, F> {
    fn run(&mut self, v: Vertex) -> Result<()> {
        self.nodes += 1;
        if self.nodes % 4096 == 0 {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() > limit {
                    return Err(BcpError::BudgetExceeded(format!(
                        "enumeration exceeded {limit:?}"
                    )));
                }
            }
        }
        let n = self.g.n();
        if v == n {
            if self.classes.len() == self.k && self.classes.iter().all(|c| is_connected(self.g, c)) {
                self.yielded += 1;
                if self.yielded > self.budget.max_partitions {
                    return Err(BcpError::BudgetExceeded(format!(
                        "more than {} partitions",
                        self.budget.max_partitions
                    )));
                }
                (self.visit)(&self.classes);
            }
            return Ok(());
        }
        let open = self.classes.len();
        let remaining = n - v - 1;
        for c in 0..(open + 1).min(self.k) {
            let opened_after = if c == open { open + 1 } else { open };
            if remaining < self.k - opened_after {
                continue;
            }
            if c == open {
                self.classes.push(self.g.empty_set());
            }
            self.classes[c].insert(self.g, v);
            if !self.dead_end(v) {
                self.run(v + 1)?;
            }
            self.classes[c].remove(self.g, v);
            if c == open {
                self.classes.pop();
            }
        }
        Ok(())
    }

    /// Whether some class already has a frozen component beside another one.
    fn dead_end(&self, last: Vertex) -> bool {
        self.classes.iter().any(|class| {
            let comps = components(self.g, class);
            comps.len() > 1
                && comps
                    .iter()
                    .any(|comp| comp.iter().all(|u| self.reach[u] <= last))
        })
    }
}

/// Calls `visit` once per connected `k`-partition of `g`; returns how many there were.
pub fn for_each_connected_kpartition(
    g: &WeightedGraph,
    k: usize,
    budget: &EnumerationBudget,
    visit: impl FnMut(&[VertexSet]),
) -> Result<u64> {
    if k == 0 || k > g.n() {
        return contract(format!("k must lie in 1..={}, got {k}", g.n()));
    }
    if g.n() > budget.max_vertices {
        return Err(BcpError::BudgetExceeded(format!(
            "{} vertices exceed the enumeration limit of {}",
            g.n(),
            budget.max_vertices
        )));
    }
    let reach = (0..g.n())
        .map(|u| g.neighbors(u).last().copied().unwrap_or(0))
        .collect();
    let mut e = Enumerator {
        g,
        k,
        budget,
        started: Instant::now(),
        nodes: 0,
        yielded: 0,
        reach,
        classes: Vec::with_capacity(k),
        visit,
    };
    e.run(0)?;
    Ok(e.yielded)
}

pub fn enumerate_connected_kpartitions(
    g: &WeightedGraph,
    k: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for_each_connected_kpartition(g, k, budget, |classes| {
        out.push(Partition::new_unchecked(classes.to_vec()))
    })?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub value: Weight,
    /// First optimal partition in enumeration order, i.e. the one whose
    /// class-assignment string is lexicographically smallest.
    pub witness: Partition,
}

fn best_by(
    g: &WeightedGraph,
    k: usize,
    budget: &EnumerationBudget,
    score: impl Fn(&[VertexSet]) -> Weight,
    better: impl Fn(Weight, Weight) -> bool,
) -> Result<ExactSolution> {
    let mut best: Option<(Weight, Vec<VertexSet>)> = None;
    for_each_connected_kpartition(g, k, budget, |classes| {
        let s = score(classes);
        if best.as_ref().map_or(true, |(b, _)| better(s, *b)) {
            best = Some((s, classes.to_vec()));
        }
    })?;
    let (value, classes) = best.expect("every connected graph has a connected k-partition for k <= n");
    Ok(ExactSolution {
        value,
        witness: Partition::new_unchecked(classes),
    })
}

/// Minimum `w⁺` over all connected `k`-partitions.
pub fn exact_minmax(g: &WeightedGraph, k: usize, budget: &EnumerationBudget) -> Result<ExactSolution> {
    best_by(
        g,
        k,
        budget,
        |c| c.iter().map(VertexSet::weight).max().unwrap(),
        |a, b| a < b,
    )
}

/// Maximum `w⁻` over all connected `k`-partitions.
pub fn exact_maxmin(g: &WeightedGraph, k: usize, budget: &EnumerationBudget) -> Result<ExactSolution> {
    best_by(
        g,
        k,
        budget,
        |c| c.iter().map(VertexSet::weight).min().unwrap(),
        |a, b| a > b,
    )
}

/// Searches every nonempty proper subset of `V₃` for a pull-admissible one
/// (w.r.t. class `i`); returns the first in subset-bitmask order.
pub fn oracle_pull_admissible(
    g: &WeightedGraph,
    p: &OrderedPartition3,
    i: usize,
) -> Result<Option<VertexSet>> {
    if !(i == 1 || i == 2) {
        return contract(format!("class index must be 1 or 2, got {i}"));
    }
    let members = p.v3().to_vec();
    if members.len() > 20 {
        return Err(BcpError::BudgetExceeded(format!(
            "|V3| = {} exceeds the subset search limit of 20",
            members.len()
        )));
    }
    let vi = p.class(i);
    let full = (1u32 << members.len()) - 1;
    for mask in 1..full {
        let u = g.set_of(
            members
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &v)| v),
        );
        if vi.weight() + u.weight() >= p.v3().weight() {
            continue;
        }
        if is_connected(g, &vi.union(&u, g)) && is_connected(g, &p.v3().difference(&u, g)) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}
