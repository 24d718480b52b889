//! Small max-flow (Edmonds-Karp) plus feasibility of flows with lower bounds.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` with capacity `cap`; returns the arc id.
    pub(crate) fn add(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }

    /// Flow currently pushed through arc `id`.
    pub(crate) fn flow(&self, id: usize) -> i64 {
        self.arcs[id ^ 1].cap
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.out.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            while let Some(a) = queue.pop_front() {
                for &id in &self.out[a] {
                    let b = self.arcs[id].to;
                    if !seen[b] && self.arcs[id].cap > 0 {
                        seen[b] = true;
                        via[b] = id;
                        queue.push_back(b);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = i64::MAX;
            let mut b = t;
            while b != s {
                let id = via[b];
                push = push.min(self.arcs[id].cap);
                b = self.arcs[id ^ 1].to;
            }
            let mut b = t;
            while b != s {
                let id = via[b];
                self.arcs[id].cap -= push;
                self.arcs[id ^ 1].cap += push;
                b = self.arcs[id ^ 1].to;
            }
            total += push;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundedEdge {
    pub from: usize,
    pub to: usize,
    pub lo: i64,
    pub hi: i64,
}

/// Finds an `s`-`t` flow (of any value) obeying every edge's `[lo, hi]`, and
/// returns the flow on each edge.
pub(crate) fn feasible_flow(
    nodes: usize,
    s: usize,
    t: usize,
    edges: &[BoundedEdge],
) -> Option<Vec<i64>> {
    let (ss, tt) = (nodes, nodes + 1);
    let mut net = FlowNetwork::new(nodes + 2);
    let mut excess = vec![0i64; nodes];
    let mut ids = Vec::with_capacity(edges.len());
    for e in edges {
        if e.lo > e.hi {
            return None;
        }
        ids.push(net.add(e.from, e.to, e.hi - e.lo));
        excess[e.to] += e.lo;
        excess[e.from] -= e.lo;
    }
    net.add(t, s, i64::MAX / 4);
    let mut need = 0;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            net.add(ss, v, x);
            need += x;
        } else if x < 0 {
            net.add(v, tt, -x);
        }
    }
    if net.max_flow(ss, tt) != need {
        return None;
    }
    Some(
        edges
            .iter()
            .zip(ids)
            .map(|(e, id)| e.lo + net.flow(id))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_flow_diamond() {
        let mut net = FlowNetwork::new(4);
        net.add(0, 1, 3);
        net.add(0, 2, 2);
        net.add(1, 2, 5);
        net.add(1, 3, 2);
        net.add(2, 3, 3);
        assert_eq!(net.max_flow(0, 3), 5);
    }

    #[test]
    fn lower_bounds() {
        let e = |from, to, lo, hi| BoundedEdge { from, to, lo, hi };
        let edges = [e(0, 1, 2, 2), e(1, 2, 0, 1), e(1, 3, 1, 2), e(2, 3, 0, 5)];
        let f = feasible_flow(4, 0, 3, &edges).unwrap();
        assert_eq!(f[0], 2);
        assert!(f[2] >= 1);
        assert_eq!(f[1] + f[2], 2);

        let edges = [e(0, 1, 3, 3), e(1, 2, 0, 1), e(1, 3, 0, 1), e(2, 3, 0, 5)];
        assert!(feasible_flow(4, 0, 3, &edges).is_none());
    }
}
