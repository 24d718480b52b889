//! Vertex-weighted graphs and the connectivity primitives the solvers share.
//!
//! Vertices are dense ids `0..n`. Every routine iterates in ascending id
//! order, so all results are deterministic.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{contract, BcpError, Result};

pub type Vertex = usize;
pub type Weight = u64;

/// An undirected, simple, connected graph with positive integer vertex weights.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    adjacency: Vec<Vec<Vertex>>,
    weights: Vec<Weight>,
    total_weight: Weight,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds a graph, rejecting loops, parallel edges, zero weights and
    /// disconnected inputs.
    pub fn new(
        weights: Vec<Weight>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(BcpError::InvalidInput("graph has no vertices".into()));
        }
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(BcpError::InvalidInput(format!(
                "vertex {v} has weight 0; weights must be positive"
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(BcpError::InvalidInput(format!(
                    "edge {u}-{v} references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(BcpError::InvalidInput(format!("loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(BcpError::InvalidInput(format!(
                    "duplicate edge {}-{}",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        let total_weight = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| BcpError::InvalidInput("total weight overflows u64".into()))?;
        let g = WeightedGraph {
            adjacency,
            weights,
            total_weight,
            edge_count,
        };
        if !is_connected(&g, &g.full_set()) {
            return Err(BcpError::InvalidInput("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Same topology, different weights.
    pub fn with_weights(&self, weights: Vec<Weight>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(BcpError::InvalidInput(format!(
                "expected {} weights, got {}",
                self.n(),
                weights.len()
            )));
        }
        WeightedGraph::new(weights, self.edges())
    }

    /// Same topology with every weight set to 1.
    pub fn unit(&self) -> Self {
        let weights = vec![1; self.n()];
        WeightedGraph {
            adjacency: self.adjacency.clone(),
            total_weight: self.n() as Weight,
            weights,
            edge_count: self.edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn weight(&self, v: Vertex) -> Weight {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    pub fn is_unit_weight(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n())
    }

    pub fn full_set(&self) -> VertexSet {
        let mut bits = FixedBitSet::with_capacity(self.n());
        bits.insert_range(..);
        VertexSet {
            bits,
            weight: self.total_weight,
        }
    }

    pub fn set_of(&self, vertices: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut s = self.empty_set();
        for v in vertices {
            s.insert(self, v);
        }
        s
    }
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedGraph")
            .field("weights", &self.weights)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A subset of the vertices of one graph, with its weight cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
    weight: Weight,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
            weight: 0,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// Number of vertices of the graph this set lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn min(&self) -> Option<Vertex> {
        self.bits.minimum()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn insert(&mut self, g: &WeightedGraph, v: Vertex) {
        if !self.bits.put(v) {
            self.weight += g.weight(v);
        }
    }

    pub fn remove(&mut self, g: &WeightedGraph, v: Vertex) {
        if self.bits.contains(v) {
            self.bits.set(v, false);
            self.weight -= g.weight(v);
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &VertexSet, g: &WeightedGraph) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        let weight = bits.ones().map(|v| g.weight(v)).sum();
        VertexSet { bits, weight }
    }

    pub fn difference(&self, other: &VertexSet, g: &WeightedGraph) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        let weight = bits.ones().map(|v| g.weight(v)).sum();
        VertexSet { bits, weight }
    }

    /// Weight under a different weight vector over the same vertices.
    pub fn weight_under(&self, weights: &[Weight]) -> Weight {
        self.iter().map(|v| weights[v]).sum()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, "w{}", self.weight)
    }
}

/// Connected components of `G[s]`, ordered by their smallest vertex.
///
/// Panics if `s` is empty.
pub fn components(g: &WeightedGraph, s: &VertexSet) -> Vec<VertexSet> {
    assert!(!s.is_empty(), "components: vertex set must be nonempty");
    let mut seen = g.empty_set();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in s.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = g.empty_set();
        seen.insert(g, start);
        stack.push(start);
        while let Some(u) = stack.pop() {
            comp.insert(g, u);
            for &v in g.neighbors(u) {
                if s.contains(v) && !seen.contains(v) {
                    seen.insert(g, v);
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &WeightedGraph, s: &VertexSet) -> bool {
    let Some(start) = s.min() else {
        return false;
    };
    let mut seen = g.empty_set();
    seen.insert(g, start);
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if s.contains(v) && !seen.contains(v) {
                seen.insert(g, v);
                reached += 1;
                stack.push(v);
            }
        }
    }
    reached == s.len()
}

/// Depth-first spanning tree of a connected `G[s]`, rooted at `min(s)`.
///
/// Children are explored in ascending id order, exactly as a recursive DFS
/// would, but without recursion.
#[derive(Debug, Clone)]
pub struct DfsTree {
    /// Vertices in discovery (pre-)order; `preorder[0]` is the root.
    pub preorder: Vec<Vertex>,
    /// Parent of each vertex of `s`, indexed by vertex id. `None` for the
    /// root and for vertices outside `s`.
    pub parent: Vec<Option<Vertex>>,
    /// Number of tree children per vertex id.
    pub children: Vec<usize>,
}

impl DfsTree {
    pub fn new(g: &WeightedGraph, s: &VertexSet) -> Self {
        let root = s.min().expect("DfsTree: vertex set must be nonempty");
        let n = g.n();
        let mut parent = vec![None; n];
        let mut children = vec![0; n];
        let mut seen = g.empty_set();
        let mut preorder = vec![root];
        seen.insert(g, root);
        // (vertex, index of the next neighbor to try)
        let mut stack = vec![(root, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            let nbrs = g.neighbors(u);
            match nbrs[next..]
                .iter()
                .position(|&v| s.contains(v) && !seen.contains(v))
            {
                Some(off) => {
                    let v = nbrs[next + off];
                    top.1 = next + off + 1;
                    seen.insert(g, v);
                    parent[v] = Some(u);
                    children[u] += 1;
                    preorder.push(v);
                    stack.push((v, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        DfsTree {
            preorder,
            parent,
            children,
        }
    }

    pub fn root(&self) -> Vertex {
        self.preorder[0]
    }

    /// Whether the tree reached every vertex it was asked to span.
    pub fn spans(&self, s: &VertexSet) -> bool {
        self.preorder.len() == s.len()
    }

    /// Vertices with tree degree one, in discovery order. The root counts
    /// when it has a single child.
    pub fn leaves(&self) -> Vec<Vertex> {
        self.preorder
            .iter()
            .copied()
            .filter(|&v| {
                let degree = self.children[v] + usize::from(self.parent[v].is_some());
                degree == 1
            })
            .collect()
    }
}

/// A vertex whose removal keeps `G[s]` connected: the lowest-id non-root
/// leaf of the DFS tree rooted at `min(s)`.
pub fn non_cut_vertex(g: &WeightedGraph, s: &VertexSet) -> Result<Vertex> {
    if s.len() < 2 {
        return contract("non_cut_vertex needs at least two vertices");
    }
    let tree = DfsTree::new(g, s);
    if !tree.spans(s) {
        return contract("non_cut_vertex needs a connected vertex set");
    }
    let leaf = tree.preorder[1..]
        .iter()
        .copied()
        .filter(|&v| tree.children[v] == 0)
        .min()
        .expect("a tree with two or more vertices has a non-root leaf");
    Ok(leaf)
}

/// Splits a connected `G[s]` into two connected halves by deleting one DFS
/// tree edge, picking the edge that best balances the halves (ties go to
/// the lexicographically smallest edge). The half holding `min(s)` comes first.
pub fn split_two(g: &WeightedGraph, s: &VertexSet) -> Result<(VertexSet, VertexSet)> {
    if s.len() < 2 {
        return contract("split_two needs at least two vertices");
    }
    let tree = DfsTree::new(g, s);
    if !tree.spans(s) {
        return contract("split_two needs a connected vertex set");
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in tree.preorder.iter().enumerate() {
        pos[v] = i;
    }
    let mut subtree_weight = vec![0u64; g.n()];
    let mut subtree_size = vec![0usize; g.n()];
    for &v in tree.preorder.iter().rev() {
        subtree_weight[v] += g.weight(v);
        subtree_size[v] += 1;
        if let Some(p) = tree.parent[v] {
            subtree_weight[p] += subtree_weight[v];
            subtree_size[p] += subtree_size[v];
        }
    }
    let total = s.weight();
    let (_, _, child) = tree.preorder[1..]
        .iter()
        .map(|&c| {
            let p = tree.parent[c].unwrap();
            let gap = total.abs_diff(2 * subtree_weight[c]);
            (gap, (p.min(c), p.max(c)), c)
        })
        .min()
        .unwrap();
    let start = pos[child];
    let below = g.set_of(tree.preorder[start..start + subtree_size[child]].iter().copied());
    let above = s.difference(&below, g);
    Ok((above, below))
}

/// Vertices of `inside` adjacent to at least one vertex of `from`, ascending.
pub fn boundary_neighbors(g: &WeightedGraph, from: &VertexSet, inside: &VertexSet) -> Vec<Vertex> {
    inside
        .iter()
        .filter(|&v| g.neighbors(v).iter().any(|&u| from.contains(u)))
        .collect()
}

/// Whether some edge joins `a` and `b`.
pub fn adjacent(g: &WeightedGraph, a: &VertexSet, b: &VertexSet) -> bool {
    a.iter().any(|u| g.neighbors(u).iter().any(|&v| b.contains(v)))
}
