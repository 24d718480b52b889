//! Exact max-min connected k-partition of unweighted graphs, parameterized by
//! a vertex cover `X`.
//!
//! Vertices outside `X` form a stable set, and two of them with the same
//! neighborhood are interchangeable. A solution is therefore described by the
//! class of every cover vertex (`x`) and by how many members of each
//! neighborhood group every class takes (`y`). Connectivity is enforced
//! lazily: a candidate with a disconnected class yields a cut, and the search
//! branches on which group must bridge the gap.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::approx::get_singletons;
use crate::error::{contract, BcpError, Result};
use crate::flow::{feasible_flow, BoundedEdge};
use crate::graph::{Vertex, WeightedGraph};
use crate::partition::Partition;

/// Subset of the cover, bit `j` standing for `cover[j]`.
pub type CoverMask = u64;

const MAX_COVER: usize = 64;

/// Stable-set vertices sharing one neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodGroup {
    pub support: CoverMask,
    /// Sorted ascending.
    pub members: Vec<Vertex>,
}

#[derive(Debug, Clone)]
pub struct VertexCoverDecomposition {
    /// Sorted ascending.
    pub cover: Vec<Vertex>,
    pub stable: Vec<Vertex>,
    /// Nonempty groups only, ordered by support mask.
    pub groups: Vec<NeighborhoodGroup>,
    cover_adj: Vec<CoverMask>,
    cover_index: Vec<Option<usize>>,
    group_index: Vec<Option<usize>>,
}

impl VertexCoverDecomposition {
    pub fn cover_size(&self) -> usize {
        self.cover.len()
    }

    pub fn full_mask(&self) -> CoverMask {
        if self.cover.len() == 64 {
            u64::MAX
        } else {
            (1 << self.cover.len()) - 1
        }
    }

    pub fn mask_of(&self, vertices: &[Vertex]) -> Result<CoverMask> {
        vertices.iter().try_fold(0, |m, &v| {
            match self.cover_index.get(v).copied().flatten() {
                Some(j) => Ok(m | 1 << j),
                None => Err(BcpError::InvalidInput(format!("vertex {v} is not in the cover"))),
            }
        })
    }

    pub fn vertices_of(&self, mask: CoverMask) -> Vec<Vertex> {
        bits(mask).map(|j| self.cover[j]).collect()
    }

    /// Group holding stable vertex `v`.
    pub fn group_of(&self, v: Vertex) -> Option<usize> {
        self.group_index.get(v).copied().flatten()
    }

    pub fn cover_index(&self, v: Vertex) -> Option<usize> {
        self.cover_index.get(v).copied().flatten()
    }

    /// Components of `G[within]`, ordered by lowest cover index.
    pub fn cover_components(&self, within: CoverMask) -> Vec<CoverMask> {
        let mut left = within;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let j = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.cover_adj[j] & within & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    fn render_mask(&self, mask: CoverMask) -> String {
        let ids: Vec<String> = self.vertices_of(mask).iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", ids.join(","))
    }
}

fn bits(mut mask: CoverMask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}

/// Both endpoints of a greedy maximal matching, scanning edges in order.
pub fn greedy_cover(g: &WeightedGraph) -> Vec<Vertex> {
    let mut taken = vec![false; g.n()];
    for (u, v) in g.edges() {
        if !taken[u] && !taken[v] {
            taken[u] = true;
            taken[v] = true;
        }
    }
    (0..g.n()).filter(|&v| taken[v]).collect()
}

pub fn decompose(g: &WeightedGraph, cover: Option<&[Vertex]>) -> Result<VertexCoverDecomposition> {
    let mut cover = match cover {
        Some(c) => c.to_vec(),
        None => greedy_cover(g),
    };
    cover.sort_unstable();
    cover.dedup();
    if let Some(&v) = cover.iter().find(|&&v| v >= g.n()) {
        return Err(BcpError::InvalidInput(format!("cover vertex {v} out of range")));
    }
    if cover.len() > MAX_COVER {
        return Err(BcpError::BudgetExceeded(format!(
            "cover of size {} exceeds the supported {MAX_COVER}",
            cover.len()
        )));
    }
    let mut cover_index = vec![None; g.n()];
    for (j, &v) in cover.iter().enumerate() {
        cover_index[v] = Some(j);
    }
    if let Some((u, v)) = g
        .edges()
        .find(|&(u, v)| cover_index[u].is_none() && cover_index[v].is_none())
    {
        return Err(BcpError::InvalidInput(format!(
            "not a vertex cover: edge {u}-{v} is uncovered"
        )));
    }
    let mask = |vs: &[Vertex]| {
        vs.iter()
            .filter_map(|&w| cover_index[w])
            .fold(0 as CoverMask, |m, j| m | 1 << j)
    };
    let cover_adj = cover.iter().map(|&v| mask(g.neighbors(v))).collect();
    let stable: Vec<Vertex> = (0..g.n()).filter(|&v| cover_index[v].is_none()).collect();
    let mut groups: Vec<NeighborhoodGroup> = Vec::new();
    let mut by_support: Vec<(CoverMask, Vertex)> =
        stable.iter().map(|&v| (mask(g.neighbors(v)), v)).collect();
    by_support.sort_unstable();
    for (support, v) in by_support {
        match groups.last_mut() {
            Some(last) if last.support == support => last.members.push(v),
            _ => groups.push(NeighborhoodGroup {
                support,
                members: vec![v],
            }),
        }
    }
    let mut group_index = vec![None; g.n()];
    for (s, grp) in groups.iter().enumerate() {
        for &v in &grp.members {
            group_index[v] = Some(s);
        }
    }
    Ok(VertexCoverDecomposition {
        cover,
        stable,
        groups,
        cover_adj,
        cover_index,
        group_index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub group: usize,
    /// Indices into [`CutHypergraph::nodes`].
    pub nodes: Vec<usize>,
}

/// Components of `G[X - Z]` linked by the neighborhood groups.
#[derive(Debug, Clone)]
pub struct CutHypergraph {
    pub removed: CoverMask,
    pub nodes: Vec<CoverMask>,
    /// One per group, in group order.
    pub hyperedges: Vec<Hyperedge>,
}

pub fn build_hypergraph(dec: &VertexCoverDecomposition, removed: CoverMask) -> Result<CutHypergraph> {
    let full = dec.full_mask();
    if removed & !full != 0 {
        return contract("removed set is not a subset of the cover");
    }
    if removed == full {
        return contract("removed set must leave part of the cover");
    }
    let nodes = dec.cover_components(full & !removed);
    let hyperedges = dec
        .groups
        .iter()
        .enumerate()
        .map(|(s, grp)| Hyperedge {
            group: s,
            nodes: (0..nodes.len())
                .filter(|&c| nodes[c] & grp.support != 0)
                .collect(),
        })
        .collect();
    Ok(CutHypergraph {
        removed,
        nodes,
        hyperedges,
    })
}

/// Integral assignment: `x[i]` is the cover part of class `i`, `y[i][s]`
/// how many members of group `s` class `i` takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSolution {
    pub x: Vec<CoverMask>,
    pub y: Vec<Vec<usize>>,
}

impl ModelSolution {
    pub fn k(&self) -> usize {
        self.x.len()
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.x[i].count_ones() as usize + self.y[i].iter().sum::<usize>()
    }
}

/// `x[u,i] + x[v,i] - Σ_{z∈Z} x[z,i] - Σ_{S∈F} y[S,i] ≤ 1`.
///
/// `u` and `v` are cover indices; the inequality holds for every class `i`,
/// `class` only records which class exposed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutConstraint {
    pub u: usize,
    pub v: usize,
    pub removed: CoverMask,
    pub groups: Vec<usize>,
    pub class: usize,
}

impl CutConstraint {
    pub fn lhs(&self, sol: &ModelSolution, i: usize) -> i64 {
        let x = sol.x[i];
        let on = |j: usize| (x >> j & 1) as i64;
        on(self.u) + on(self.v)
            - (x & self.removed).count_ones() as i64
            - self.groups.iter().map(|&s| sol.y[i][s] as i64).sum::<i64>()
    }

    /// First class whose side of the inequality exceeds 1.
    pub fn violated_class(&self, sol: &ModelSolution) -> Option<usize> {
        (0..sol.k()).find(|&i| self.lhs(sol, i) > 1)
    }

    pub fn is_satisfied_by(&self, sol: &ModelSolution) -> bool {
        self.violated_class(sol).is_none()
    }

    pub fn render(&self, dec: &VertexCoverDecomposition) -> String {
        let mut s = format!("x[{},i] + x[{},i]", dec.cover[self.u], dec.cover[self.v]);
        for z in dec.vertices_of(self.removed) {
            s += &format!(" - x[{z},i]");
        }
        for &g in &self.groups {
            s += &format!(" - y[{},i]", dec.render_mask(dec.groups[g].support));
        }
        s + " <= 1"
    }

    fn key(&self) -> (usize, usize, CoverMask, Vec<usize>) {
        (self.u, self.v, self.removed, self.groups.clone())
    }
}

/// One cut per class whose decoded subgraph is disconnected.
pub fn separate(dec: &VertexCoverDecomposition, candidate: &ModelSolution) -> Result<Vec<CutConstraint>> {
    let mut cuts = Vec::new();
    for i in 0..candidate.k() {
        let xi = candidate.x[i];
        if xi == 0 {
            continue;
        }
        let h = build_hypergraph(dec, dec.full_mask() & !xi)?;
        let mut reached: CoverMask = h.nodes[0];
        loop {
            let before = reached;
            for e in &h.hyperedges {
                let support = dec.groups[e.group].support;
                if candidate.y[i][e.group] > 0 && support & reached != 0 {
                    for &c in &e.nodes {
                        reached |= h.nodes[c];
                    }
                }
            }
            if reached == before {
                break;
            }
        }
        if reached == xi {
            continue;
        }
        let rest = xi & !reached;
        let groups = dec
            .groups
            .iter()
            .enumerate()
            .filter(|(_, grp)| grp.support & reached != 0 && grp.support & rest != 0)
            .map(|(s, _)| s)
            .collect();
        cuts.push(CutConstraint {
            u: reached.trailing_zeros() as usize,
            v: rest.trailing_zeros() as usize,
            removed: h.removed,
            groups,
            class: i,
        });
    }
    Ok(cuts)
}

/// The model encoding of a partition, classes in the given order.
pub fn encode(dec: &VertexCoverDecomposition, p: &Partition) -> ModelSolution {
    let mut x = vec![0; p.k()];
    let mut y = vec![vec![0; dec.groups.len()]; p.k()];
    for (i, class) in p.classes().iter().enumerate() {
        for v in class.iter() {
            match dec.cover_index(v) {
                Some(j) => x[i] |= 1 << j,
                None => y[i][dec.group_of(v).expect("stable vertex has a group")] += 1,
            }
        }
    }
    ModelSolution { x, y }
}

/// Decodes `sol`, handing each class the lowest-id unused members of every group.
pub fn reconstruct(g: &WeightedGraph, dec: &VertexCoverDecomposition, sol: &ModelSolution) -> Result<Partition> {
    for (s, grp) in dec.groups.iter().enumerate() {
        let total: usize = sol.y.iter().map(|row| row[s]).sum();
        if total != grp.members.len() {
            return contract(format!(
                "group {} has {} members but the solution places {total}",
                dec.render_mask(grp.support),
                grp.members.len()
            ));
        }
    }
    if sol.x.iter().fold(0, |acc, &m| acc | m) != dec.full_mask()
        || sol.x.iter().map(|m| m.count_ones() as usize).sum::<usize>() != dec.cover_size()
    {
        return contract("cover vertices are not assigned exactly once");
    }
    let mut next = vec![0; dec.groups.len()];
    let mut classes = Vec::with_capacity(sol.k());
    for i in 0..sol.k() {
        let mut class = g.set_of(dec.vertices_of(sol.x[i]));
        for (s, grp) in dec.groups.iter().enumerate() {
            for &v in &grp.members[next[s]..next[s] + sol.y[i][s]] {
                class.insert(g, v);
            }
            next[s] += sol.y[i][s];
        }
        classes.push(class);
    }
    Partition::new(g, classes)
}

/// The integer program together with the cuts collected while solving it.
#[derive(Debug, Clone)]
pub struct FptModel {
    pub k: usize,
    pub decomposition: VertexCoverDecomposition,
    pub cuts: Vec<CutConstraint>,
}

impl fmt::Display for FptModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dec = &self.decomposition;
        let list = |vs: &[Vertex]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "c k {}", self.k)?;
        writeln!(f, "c cover {}", list(&dec.cover))?;
        writeln!(f, "c stable {}", list(&dec.stable))?;
        for grp in &dec.groups {
            writeln!(
                f,
                "c group {} size {} members {}",
                dec.render_mask(grp.support),
                grp.members.len(),
                list(&grp.members)
            )?;
        }
        writeln!(f, "maximize sum_v x[v,1] + sum_S y[S,1]")?;
        writeln!(f, "order:   |V_i| <= |V_i+1|                 for i in 1..{}", self.k)?;
        writeln!(f, "cover:   sum_i x[v,i] = 1                 for v in cover")?;
        writeln!(f, "support: y[S,i] <= |I(S)| sum_(v in S) x[v,i]")?;
        writeln!(f, "groups:  sum_i y[S,i] = |I(S)|")?;
        writeln!(f, "domain:  x binary, y integer >= 0")?;
        writeln!(f, "c cuts {}", self.cuts.len())?;
        for cut in &self.cuts {
            writeln!(f, "cut:     {}   (class {})", cut.render(dec), cut.class + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FptCase {
    /// `k > |X|`: some class misses the cover, so the optimum is 1.
    MoreClassesThanCover,
    /// `|X| = 1`: every class but one is a single leaf.
    Star,
    BranchAndBound,
}

#[derive(Debug, Clone)]
pub struct FptSolution {
    /// Size of the smallest class.
    pub value: usize,
    /// Classes ordered by size.
    pub partition: Partition,
    pub model: FptModel,
    pub case: FptCase,
    pub nodes: u64,
}

pub fn solve_fpt_maxmin(
    g: &WeightedGraph,
    k: usize,
    cover: Option<&[Vertex]>,
    time_limit: Option<Duration>,
) -> Result<FptSolution> {
    if k < 2 || k > g.n() {
        return contract(format!("k must lie in 2..={}, got {k}", g.n()));
    }
    if g.weights().iter().any(|&w| w != g.weight(0)) {
        return Err(BcpError::InvalidInput(
            "the vertex-cover solver needs uniform weights".into(),
        ));
    }
    let dec = decompose(g, cover)?;
    let q = dec.cover_size();
    let trivial = |case| -> Result<FptSolution> {
        let p = get_singletons(g, Partition::new_unchecked(vec![g.full_set()]), k - 1)?;
        let mut classes = p.into_classes();
        classes.sort_by_key(|c| (c.len(), c.min()));
        Ok(FptSolution {
            value: 1,
            partition: Partition::new(g, classes)?,
            model: FptModel {
                k,
                decomposition: dec.clone(),
                cuts: Vec::new(),
            },
            case,
            nodes: 0,
        })
    };
    if q == 1 {
        return trivial(FptCase::Star);
    }
    if k > q {
        return trivial(FptCase::MoreClassesThanCover);
    }

    let mut search = Search {
        dec: &dec,
        k,
        cap: g.n() / k,
        cuts: Vec::new(),
        seen: HashSet::new(),
        best: None,
        nodes: 0,
        started: Instant::now(),
        time_limit,
    };
    search.assign_cover(0, &mut vec![0; k], 0)?;
    let Search {
        best, cuts, nodes, ..
    } = search;
    let (value, mut sol) =
        best.ok_or_else(|| BcpError::Internal("no connected partition found".into()))?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| sol.class_size(i));
    sol = ModelSolution {
        x: order.iter().map(|&i| sol.x[i]).collect(),
        y: order.iter().map(|&i| sol.y[i].clone()).collect(),
    };
    let partition = reconstruct(g, &dec, &sol)?;
    Ok(FptSolution {
        value,
        partition,
        model: FptModel {
            k,
            decomposition: dec,
            cuts,
        },
        case: FptCase::BranchAndBound,
        nodes,
    })
}

struct Search<'a> {
    dec: &'a VertexCoverDecomposition,
    k: usize,
    /// `⌊n/k⌋`.
    cap: usize,
    cuts: Vec<CutConstraint>,
    seen: HashSet<(usize, usize, CoverMask, Vec<usize>)>,
    best: Option<(usize, ModelSolution)>,
    nodes: u64,
    started: Instant,
    time_limit: Option<Duration>,
}

impl Search<'_> {
    fn best_value(&self) -> usize {
        self.best.as_ref().map_or(0, |b| b.0)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes % 64 == 0 {
            if let Some(limit) = self.time_limit {
                if self.started.elapsed() > limit {
                    return Err(BcpError::BudgetExceeded(format!(
                        "vertex-cover search exceeded {limit:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Stable vertices a class could still take when its cover part may grow to `reach`.
    fn attachable(&self, reach: CoverMask) -> usize {
        self.dec
            .groups
            .iter()
            .filter(|grp| grp.support & reach != 0)
            .map(|grp| grp.members.len())
            .sum()
    }

    /// Assigns cover vertex `j` and up; every class receives at least one.
    fn assign_cover(&mut self, j: usize, x: &mut Vec<CoverMask>, opened: usize) -> Result<()> {
        self.tick()?;
        if self.best_value() >= self.cap {
            return Ok(());
        }
        let q = self.dec.cover_size();
        if j == q {
            return self.allocate(x, &mut Vec::new(), &mut Vec::new());
        }
        let unassigned = self.dec.full_mask() & !((1u64 << j) - 1);
        let free = unassigned.count_ones() as usize;
        let mut bound = self.cap;
        for &xc in &x[..opened] {
            bound = bound.min(xc.count_ones() as usize + free + self.attachable(xc | unassigned));
        }
        if opened < self.k {
            bound = bound.min(free + self.attachable(unassigned));
        }
        if bound <= self.best_value() {
            return Ok(());
        }
        for c in 0..(opened + 1).min(self.k) {
            let now_open = opened.max(c + 1);
            if q - j - 1 < self.k - now_open {
                continue;
            }
            x[c] |= 1 << j;
            self.assign_cover(j + 1, x, now_open)?;
            x[c] &= !(1 << j);
        }
        Ok(())
    }

    /// Branch and bound over the group counts for a fixed cover assignment.
    /// `required` pairs `(group, class)` need `y ≥ 1`, `forbidden` ones `y = 0`.
    fn allocate(
        &mut self,
        x: &[CoverMask],
        required: &mut Vec<(usize, usize)>,
        forbidden: &mut Vec<(usize, usize)>,
    ) -> Result<()> {
        self.tick()?;
        if self.best_value() >= self.cap {
            return Ok(());
        }
        let Some((t, sol)) = best_allocation(self.dec, x, self.cap, required, forbidden) else {
            return Ok(());
        };
        if t <= self.best_value() {
            return Ok(());
        }
        let violated = match self
            .cuts
            .iter()
            .enumerate()
            .find_map(|(idx, cut)| cut.violated_class(&sol).map(|c| (idx, c)))
        {
            Some(v) => Some(v),
            None => {
                let mut first = None;
                for cut in separate(self.dec, &sol)? {
                    if self.seen.insert(cut.key()) {
                        let class = cut.class;
                        self.cuts.push(cut);
                        first.get_or_insert((self.cuts.len() - 1, class));
                    }
                }
                first
            }
        };
        let Some((idx, class)) = violated else {
            self.best = Some((t, sol));
            return Ok(());
        };
        let groups = self.cuts[idx].groups.clone();
        for (n, &s) in groups.iter().enumerate() {
            let (r, f) = (required.len(), forbidden.len());
            required.push((s, class));
            forbidden.extend(groups[..n].iter().map(|&p| (p, class)));
            self.allocate(x, required, forbidden)?;
            required.truncate(r);
            forbidden.truncate(f);
        }
        Ok(())
    }
}

/// Group counts maximizing the smallest class for a fixed cover assignment,
/// found by binary search on the target size with a flow feasibility check.
/// Returns the smallest class size reached and the counts.
fn best_allocation(
    dec: &VertexCoverDecomposition,
    x: &[CoverMask],
    cap: usize,
    required: &[(usize, usize)],
    forbidden: &[(usize, usize)],
) -> Option<(usize, ModelSolution)> {
    let mut lo = 0;
    let mut y = allocation_for(dec, x, 0, required, forbidden)?;
    let mut hi = cap;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        match allocation_for(dec, x, mid, required, forbidden) {
            Some(found) => {
                lo = mid;
                y = found;
            }
            None => hi = mid - 1,
        }
    }
    let sol = ModelSolution { x: x.to_vec(), y };
    let reached = (0..sol.k()).map(|i| sol.class_size(i)).min().unwrap();
    Some((reached, sol))
}

/// Group counts giving every class at least `target` vertices, if any exist.
fn allocation_for(
    dec: &VertexCoverDecomposition,
    x: &[CoverMask],
    target: usize,
    required: &[(usize, usize)],
    forbidden: &[(usize, usize)],
) -> Option<Vec<Vec<usize>>> {
    let gs = dec.groups.len();
    let k = x.len();
    let (src, sink) = (0, gs + k + 1);
    let group_node = |s: usize| 1 + s;
    let class_node = |i: usize| 1 + gs + i;
    let total = dec.stable.len() as i64 + dec.cover_size() as i64;
    let mut edges = Vec::new();
    for (s, grp) in dec.groups.iter().enumerate() {
        let size = grp.members.len() as i64;
        edges.push(BoundedEdge {
            from: src,
            to: group_node(s),
            lo: size,
            hi: size,
        });
    }
    for (s, grp) in dec.groups.iter().enumerate() {
        for (i, &xi) in x.iter().enumerate() {
            let open = grp.support & xi != 0 && !forbidden.contains(&(s, i));
            edges.push(BoundedEdge {
                from: group_node(s),
                to: class_node(i),
                lo: required.contains(&(s, i)) as i64,
                hi: if open { grp.members.len() as i64 } else { 0 },
            });
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        edges.push(BoundedEdge {
            from: class_node(i),
            to: sink,
            lo: (target as i64 - xi.count_ones() as i64).max(0),
            hi: total,
        });
    }
    let flow = feasible_flow(sink + 1, src, sink, &edges)?;
    let mut y = vec![vec![0; gs]; k];
    for s in 0..gs {
        for i in 0..k {
            y[i][s] = flow[gs + s * k + i] as usize;
        }
    }
    Some(y)
}
