#![allow(dead_code)]

use bcp_core::graph::{Vertex, Weight, WeightedGraph};
use proptest::prelude::*;
use proptest::sample::Index;
use rand::Rng;

/// Random recursive tree plus each remaining pair with probability `extra`.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: f64, weights: std::ops::RangeInclusive<Weight>) -> WeightedGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.random_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    let w = (0..n).map(|_| rng.random_range(weights.clone())).collect();
    WeightedGraph::new(w, edges).unwrap()
}

/// Connected graphs on `1..=max_n` vertices with weights in `1..=max_w`.
pub fn arb_graph(max_n: usize, max_w: Weight) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<Index>(), n - 1),
            prop::collection::vec((any::<Index>(), any::<Index>()), 0..=n),
            prop::collection::vec(1..=max_w, n),
        )
            .prop_map(move |(parents, extra, weights)| {
                let mut edges: Vec<(Vertex, Vertex)> =
                    parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                for (a, b) in extra {
                    let (u, v) = (a.index(n), b.index(n));
                    let e = (u.min(v), u.max(v));
                    if u != v && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                        edges.push(e);
                    }
                }
                WeightedGraph::new(weights, edges).unwrap()
            })
    })
}

/// Reachability by repeated squaring of the adjacency relation restricted to `s`.
pub fn closure(g: &WeightedGraph, s: &[bool]) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for u in 0..n {
        if s[u] {
            r[u][u] = true;
            for &v in g.neighbors(u) {
                if s[v] {
                    r[u][v] = true;
                }
            }
        }
    }
    for m in 0..n {
        for u in 0..n {
            if r[u][m] {
                for v in 0..n {
                    if r[m][v] {
                        r[u][v] = true;
                    }
                }
            }
        }
    }
    r
}

pub fn naive_connected(g: &WeightedGraph, members: &[Vertex]) -> bool {
    let mut s = vec![false; g.n()];
    for &v in members {
        s[v] = true;
    }
    let r = closure(g, &s);
    members.iter().all(|&v| r[members[0]][v])
}

/// Every connected `k`-partition by plain set-partition enumeration, no pruning.
pub fn naive_partitions(g: &WeightedGraph, k: usize) -> Vec<Vec<Vec<Vertex>>> {
    fn go(g: &WeightedGraph, k: usize, v: usize, classes: &mut Vec<Vec<Vertex>>, out: &mut Vec<Vec<Vec<Vertex>>>) {
        if v == g.n() {
            if classes.len() == k && classes.iter().all(|c| naive_connected(g, c)) {
                out.push(classes.clone());
            }
            return;
        }
        for c in 0..classes.len() {
            classes[c].push(v);
            go(g, k, v + 1, classes, out);
            classes[c].pop();
        }
        if classes.len() < k {
            classes.push(vec![v]);
            go(g, k, v + 1, classes, out);
            classes.pop();
        }
    }
    let mut out = Vec::new();
    go(g, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn class_weight(g: &WeightedGraph, c: &[Vertex]) -> Weight {
    c.iter().map(|&v| g.weight(v)).sum()
}

/// Smallest vertex cover by exhaustive search over subsets.
pub fn min_vertex_cover(g: &WeightedGraph) -> Vec<Vertex> {
    let n = g.n();
    let mut best: Option<u32> = None;
    for mask in 0u32..(1 << n) {
        if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
            continue;
        }
        if g.edges().all(|(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1) {
            best = Some(mask);
        }
    }
    let mask = best.unwrap();
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}
