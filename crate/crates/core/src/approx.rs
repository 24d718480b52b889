//! Min-max balanced connected partition: the Merge/Pull improvement loop for
//! three classes and its extension to any `k ≥ 3`.
//!
//! The 3-class loop starts from any ordered connected 3-partition and keeps
//! shrinking the heaviest class while it outweighs half the graph. When it
//! stops with `w(V₃) > W/2` and `|V₃| ≥ 2`, the graph has a star-center `u`
//! whose components certify optimality, and the k-class routine reuses that
//! structure directly.

use crate::error::{contract, BcpError, Result};
use crate::graph::{
    adjacent, boundary_neighbors, components, is_connected, non_cut_vertex, split_two, DfsTree,
    VertexSet, Weight, WeightedGraph,
};
use crate::partition::{
    class_order, components_without, OrderedPartition3, Partition, StarCenterCertificate,
};

fn heavy(g: &WeightedGraph, p: &OrderedPartition3) -> bool {
    2 * p.v3().weight() > g.total_weight()
}

/// Joins `V₁` and `V₂` and splits `V₃` in two.
pub fn merge(g: &WeightedGraph, p: &OrderedPartition3) -> Result<OrderedPartition3> {
    if !heavy(g, p) {
        return contract("merge requires w(V3) > W/2");
    }
    if p.v3().len() < 2 {
        return contract("merge requires |V3| >= 2");
    }
    if !adjacent(g, p.v1(), p.v2()) {
        return contract("merge requires V1 and V2 to be adjacent");
    }
    let (a, b) = split_two(g, p.v3())?;
    Ok(OrderedPartition3::order_unchecked([
        p.v1().union(p.v2(), g),
        a,
        b,
    ]))
}

/// A set `U ⊊ V₃` to move into class `target` (1 or 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullMove {
    pub set: VertexSet,
    pub target: usize,
}

impl PullMove {
    /// Checks the pull-admissibility conditions against `p`.
    pub fn is_admissible(&self, g: &WeightedGraph, p: &OrderedPartition3) -> bool {
        if !(self.target == 1 || self.target == 2) || self.set.is_empty() {
            return false;
        }
        let v3 = p.v3();
        let vi = p.class(self.target);
        self.set.is_subset(v3)
            && self.set.len() < v3.len()
            && vi.weight() + self.set.weight() < v3.weight()
            && is_connected(g, &vi.union(&self.set, g))
            && is_connected(g, &v3.difference(&self.set, g))
    }
}

/// Finds a pull-admissible subset of `V₃` for class `i`, if one exists.
///
/// For each vertex `v` of `V₃` adjacent to `Vᵢ`, the candidate is `v` plus
/// every component of `G[V₃ − v]` except the heaviest one.
pub fn pull_check(g: &WeightedGraph, p: &OrderedPartition3, i: usize) -> Result<Option<VertexSet>> {
    if !(i == 1 || i == 2) {
        return contract(format!("pull_check class index must be 1 or 2, got {i}"));
    }
    if !heavy(g, p) {
        return contract("pull_check requires w(V3) > W/2");
    }
    let v3 = p.v3();
    let vi = p.class(i);
    for v in boundary_neighbors(g, vi, v3) {
        let mut rest = v3.clone();
        rest.remove(g, v);
        if rest.is_empty() {
            continue;
        }
        let mut comps = components(g, &rest);
        comps.sort_by(class_order);
        let ell = comps.len();
        let light: Weight = comps[..ell - 1].iter().map(VertexSet::weight).sum();
        if vi.weight() + g.weight(v) + light < v3.weight() {
            let mut u = g.set_of([v]);
            for c in &comps[..ell - 1] {
                u = u.union(c, g);
            }
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Moves `mv.set` from `V₃` into `V_target`.
pub fn pull(g: &WeightedGraph, p: &OrderedPartition3, mv: &PullMove) -> Result<OrderedPartition3> {
    if !heavy(g, p) {
        return contract("pull requires w(V3) > W/2");
    }
    if !mv.is_admissible(g, p) {
        return contract(format!("{:?} is not pull-admissible", mv.set));
    }
    let other = 3 - mv.target;
    Ok(OrderedPartition3::order_unchecked([
        p.class(other).clone(),
        p.class(mv.target).union(&mv.set, g),
        p.v3().difference(&mv.set, g),
    ]))
}

/// Starting point of the 3-class loop: drop the two DFS-tree leaves found
/// last into singleton classes.
pub fn initial_partition(g: &WeightedGraph) -> Result<OrderedPartition3> {
    if g.n() < 3 {
        return contract("a 3-partition needs at least 3 vertices");
    }
    let all = g.full_set();
    let leaves = DfsTree::new(g, &all).leaves();
    let (a, b) = (leaves[leaves.len() - 2], leaves[leaves.len() - 1]);
    let a = g.set_of([a]);
    let b = g.set_of([b]);
    let rest = all.difference(&a, g).difference(&b, g);
    Ok(OrderedPartition3::order_unchecked([a, b, rest]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bcp3Stop {
    /// The loop condition failed: `w(V₃) ≤ W/2`.
    HalfWeight,
    /// Neither Merge nor Pull applies.
    NoMove,
}

#[derive(Debug, Clone)]
pub struct Bcp3Run {
    pub partition: OrderedPartition3,
    pub stop: Bcp3Stop,
    /// Merge and Pull operations applied.
    pub iterations: usize,
    /// `w(V₃)` before the first iteration and after each one.
    pub heaviest_trace: Vec<Weight>,
}

/// Pseudo-polynomial 3/2-approximation for min-max connected 3-partition.
pub fn minmax_bcp3(g: &WeightedGraph) -> Result<Bcp3Run> {
    let mut p = initial_partition(g)?;
    let total = g.total_weight();
    let mut trace = vec![p.v3().weight()];
    let mut iterations = 0usize;
    let stop = loop {
        if !heavy(g, &p) {
            break Bcp3Stop::HalfWeight;
        }
        let next = if p.v3().len() >= 2 && adjacent(g, p.v1(), p.v2()) {
            merge(g, &p)?
        } else if let Some(set) = pull_check(g, &p, 1)? {
            pull(g, &p, &PullMove { set, target: 1 })?
        } else if let Some(set) = pull_check(g, &p, 2)? {
            pull(g, &p, &PullMove { set, target: 2 })?
        } else {
            break Bcp3Stop::NoMove;
        };
        if next.v3().weight() >= p.v3().weight() {
            return Err(BcpError::Internal(format!(
                "heaviest class did not shrink: {} -> {}",
                p.v3().weight(),
                next.v3().weight()
            )));
        }
        iterations += 1;
        if iterations as u64 > total + 1 {
            return Err(BcpError::Internal(format!(
                "Merge/Pull loop exceeded W + 1 = {} iterations",
                total + 1
            )));
        }
        trace.push(next.v3().weight());
        p = next;
    };
    Ok(Bcp3Run {
        partition: p,
        stop,
        iterations,
        heaviest_trace: trace,
    })
}

/// Locates the star-center of a terminal 3-partition with `w(V₃) > W/2`
/// and `|V₃| ≥ 2`, and checks the structure it must have.
pub fn star_center(g: &WeightedGraph, p: &OrderedPartition3) -> Result<StarCenterCertificate> {
    if !heavy(g, p) {
        return contract("star_center requires w(V3) > W/2");
    }
    if p.v3().len() < 2 {
        return contract("star_center requires |V3| >= 2");
    }
    let touching = boundary_neighbors(g, p.v1(), p.v3());
    let [center] = touching[..] else {
        return contract(format!(
            "V1 touches {} vertices of V3; a terminal partition touches exactly one",
            touching.len()
        ));
    };
    let mut others = Vec::new();
    let (mut first, mut second) = (None, None);
    for c in components_without(g, center) {
        if &c == p.v1() {
            first = Some(c);
        } else if &c == p.v2() {
            second = Some(c);
        } else {
            others.push(c);
        }
    }
    let (Some(first), Some(second)) = (first, second) else {
        return contract("V1 and V2 are not components of G - u");
    };
    others.push(first);
    others.push(second);
    let cert = StarCenterCertificate {
        center,
        components: others,
    };
    cert.verify(g, p)?;
    Ok(cert)
}

impl StarCenterCertificate {
    /// Structural checks on a terminal 3-partition:
    /// 1. `V₁` and `V₂` are not adjacent, and `4·w(V₁) < W`;
    /// 2. `center ∈ V₃` is a cut vertex of `G`;
    /// 3. `G[V₁]` and `G[V₂]` are components of `G − center`;
    /// 4. every other component weighs at most `w(V₁)`;
    /// 5. with exactly three components, `4·w(center) > W`.
    pub fn verify(&self, g: &WeightedGraph, p: &OrderedPartition3) -> Result<()> {
        let total = g.total_weight();
        let fail = |what: &str| contract(format!("star-center check failed: {what}"));
        if adjacent(g, p.v1(), p.v2()) {
            return fail("V1 and V2 are adjacent");
        }
        if 4 * p.v1().weight() >= total {
            return fail("w(V1) >= W/4");
        }
        if !p.v3().contains(self.center) || self.ell() < 2 {
            return fail("center is not a cut vertex inside V3");
        }
        let mut expected = components_without(g, self.center);
        let mut listed = self.components.clone();
        expected.sort_by(class_order);
        listed.sort_by(class_order);
        if expected != listed {
            return fail("component list does not match G - center");
        }
        let ell = self.ell();
        if &self.components[ell - 2] != p.v1() || &self.components[ell - 1] != p.v2() {
            return fail("V1 and V2 are not the last two components");
        }
        if self.components[..ell - 2]
            .iter()
            .any(|c| c.weight() > p.v1().weight())
        {
            return fail("a component outweighs V1");
        }
        if self
            .components
            .windows(2)
            .any(|w| w[0].weight() > w[1].weight())
        {
            return fail("component weights are not non-decreasing");
        }
        if ell == 3 && 4 * g.weight(self.center) <= total {
            return fail("three components but w(center) <= W/4");
        }
        Ok(())
    }
}

/// Peels `q` non-cut vertices off the heaviest non-singleton classes into
/// new singleton classes.
pub fn get_singletons(g: &WeightedGraph, p: Partition, q: usize) -> Result<Partition> {
    if p.k() + q > g.n() {
        return contract(format!(
            "cannot reach {} classes on {} vertices",
            p.k() + q,
            g.n()
        ));
    }
    let mut classes = p.into_classes();
    for _ in 0..q {
        let idx = classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() >= 2)
            .max_by(|(_, a), (_, b)| {
                a.weight()
                    .cmp(&b.weight())
                    .then_with(|| b.min().cmp(&a.min()))
            })
            .map(|(i, _)| i)
            .expect("k' + q <= n leaves a class with two or more vertices");
        let u = non_cut_vertex(g, &classes[idx])?;
        classes[idx].remove(g, u);
        classes.push(g.set_of([u]));
    }
    Ok(Partition::new_unchecked(classes))
}

/// Why the returned k-partition is within `k/2` of optimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The 3-class loop reached `w⁺ ≤ W/2`.
    RatioHalfW,
    /// The heaviest class of the 3-partition is a single vertex; optimal.
    SingletonTop,
    /// Star-center case where the class around the center is heaviest;
    /// its weight equals the cut-vertex lower bound, so the partition is optimal.
    StarOptimal(StarCenterCertificate),
    /// Remaining star-center cases: every class other than a lone center
    /// weighs at most `w(V₂) ≤ W/2`, and a lone center never exceeds the optimum.
    StarHalfW(StarCenterCertificate),
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::RatioHalfW => "RatioHalfW",
            Certificate::SingletonTop => "SingletonTop",
            Certificate::StarOptimal(_) => "StarOptimal",
            Certificate::StarHalfW(_) => "StarHalfW",
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, Certificate::SingletonTop | Certificate::StarOptimal(_))
    }

    pub fn star(&self) -> Option<&StarCenterCertificate> {
        match self {
            Certificate::StarOptimal(c) | Certificate::StarHalfW(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BcpkResult {
    pub partition: Partition,
    pub certificate: Certificate,
    /// The underlying 3-class run.
    pub bcp3: Bcp3Run,
}

/// Pseudo-polynomial `k/2`-approximation for min-max connected k-partition, `k ≥ 3`.
pub fn minmax_bcpk(g: &WeightedGraph, k: usize) -> Result<BcpkResult> {
    if k < 3 || k > g.n() {
        return contract(format!("k must lie in 3..={}, got {k}", g.n()));
    }
    let run = minmax_bcp3(g)?;
    let p = &run.partition;
    let (partition, certificate) = if !heavy(g, p) || p.v3().len() == 1 {
        let cert = if heavy(g, p) {
            Certificate::SingletonTop
        } else {
            Certificate::RatioHalfW
        };
        (get_singletons(g, p.to_partition(), k - 3)?, cert)
    } else {
        let star = star_center(g, p)?;
        let ell = star.ell();
        if ell + 1 >= k {
            let t = ell + 1 - k;
            let mut core = g.set_of([star.center]);
            for c in &star.components[..t] {
                core = core.union(c, g);
            }
            let heaviest_rest = star.components[ell - 1].weight();
            let optimal = core.weight() >= heaviest_rest;
            let mut classes = vec![core];
            classes.extend(star.components[t..].iter().cloned());
            let cert = if optimal {
                Certificate::StarOptimal(star)
            } else {
                Certificate::StarHalfW(star)
            };
            (Partition::new_unchecked(classes), cert)
        } else {
            let mut classes = vec![g.set_of([star.center])];
            classes.extend(star.components.iter().cloned());
            let q = k - 1 - ell;
            (
                get_singletons(g, Partition::new_unchecked(classes), q)?,
                Certificate::StarHalfW(star),
            )
        }
    };
    let partition = Partition::new(g, partition.into_classes())
        .map_err(|e| BcpError::Internal(format!("produced an invalid partition: {e}")))?;
    debug_assert_eq!(partition.k(), k);
    Ok(BcpkResult {
        partition,
        certificate,
        bcp3: run,
    })
}

/// Weight of the class built around the star-center for `k` classes, when
/// `G − center` has at least `k − 1` components.
pub fn star_core_weight(g: &WeightedGraph, cert: &StarCenterCertificate, k: usize) -> Option<Weight> {
    let ell = cert.ell();
    (ell + 1 >= k).then(|| {
        g.weight(cert.center)
            + cert.components[..ell + 1 - k]
                .iter()
                .map(VertexSet::weight)
                .sum::<Weight>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Vertex;

    fn op3(g: &WeightedGraph, lists: [&[Vertex]; 3]) -> OrderedPartition3 {
        OrderedPartition3::new(g, lists.map(|l| g.set_of(l.iter().copied()))).unwrap()
    }

    fn lists(p: &OrderedPartition3) -> Vec<Vec<Vertex>> {
        p.classes().iter().map(VertexSet::to_vec).collect()
    }

    #[test]
    fn merge_on_path() {
        let g = path(5);
        let p = op3(&g, [&[0], &[1], &[2, 3, 4]]);
        let m = merge(&g, &p).unwrap();
        assert_eq!(lists(&m), vec![vec![2], vec![0, 1], vec![3, 4]]);
    }

    #[test]
    fn merge_preconditions() {
        let g = path(5);
        let p = op3(&g, [&[0], &[4], &[1, 2, 3]]);
        assert!(merge(&g, &p).is_err());
        let t = triangle();
        let p = op3(&t, [&[0], &[1], &[2]]);
        assert!(merge(&t, &p).is_err());
    }

    #[test]
    fn pull_check_on_path() {
        let g = path(5);
        let p = op3(&g, [&[0], &[4], &[1, 2, 3]]);
        assert_eq!(pull_check(&g, &p, 1).unwrap().unwrap().to_vec(), vec![1]);
        assert_eq!(pull_check(&g, &p, 2).unwrap().unwrap().to_vec(), vec![3]);
        assert!(pull_check(&g, &p, 3).is_err());
    }

    #[test]
    fn pull_check_absent_on_star() {
        let g = star(4);
        let p = op3(&g, [&[3], &[4], &[0, 1, 2]]);
        assert!(pull_check(&g, &p, 1).unwrap().is_none());
        assert!(pull_check(&g, &p, 2).unwrap().is_none());
    }

    #[test]
    fn pull_on_path() {
        let g = path(5);
        let p = op3(&g, [&[0], &[4], &[1, 2, 3]]);
        let mv = PullMove {
            set: g.set_of([1]),
            target: 1,
        };
        let q = pull(&g, &p, &mv).unwrap();
        assert_eq!(lists(&q), vec![vec![4], vec![0, 1], vec![2, 3]]);

        let whole = PullMove {
            set: g.set_of([1, 2, 3]),
            target: 1,
        };
        assert!(pull(&g, &p, &whole).is_err());
        let splits = PullMove {
            set: g.set_of([2]),
            target: 1,
        };
        assert!(pull(&g, &p, &splits).is_err());
    }

    #[test]
    fn bcp3_examples() {
        let run = minmax_bcp3(&path(5)).unwrap();
        assert_eq!(run.partition.v3().weight(), 2);
        assert_eq!(run.stop, Bcp3Stop::HalfWeight);

        let run = minmax_bcp3(&star(4)).unwrap();
        assert_eq!(run.partition.v3().weight(), 3);
        assert_eq!(run.stop, Bcp3Stop::NoMove);

        let run = minmax_bcp3(&triangle()).unwrap();
        assert_eq!(run.partition.v3().weight(), 1);
        assert_eq!(run.iterations, 0);

        assert!(minmax_bcp3(&path(2)).is_err());
    }

    #[test]
    fn star_center_on_star() {
        let g = star(4);
        let run = minmax_bcp3(&g).unwrap();
        let cert = star_center(&g, &run.partition).unwrap();
        assert_eq!(cert.center, 0);
        assert_eq!(cert.ell(), 4);
    }

    fn spider() -> WeightedGraph {
        // center 0 (weight 10) with legs 1-2, 3-4, 5-6
        WeightedGraph::new(
            vec![10, 1, 1, 1, 1, 1, 1],
            [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn star_center_on_spider() {
        let g = spider();
        let run = minmax_bcp3(&g).unwrap();
        assert_eq!(run.partition.v3().weight(), 12);
        assert_eq!(run.heaviest_trace, vec![14, 13, 12]);
        let cert = star_center(&g, &run.partition).unwrap();
        assert_eq!(cert.center, 0);
        assert_eq!(cert.ell(), 3);
    }

    #[test]
    fn star_center_rejects_light_top() {
        let g = path(5);
        let p = op3(&g, [&[0, 1], &[2, 3], &[4]]);
        assert!(star_center(&g, &p).is_err());
    }

    #[test]
    fn get_singletons_examples() {
        let g = path(5);
        let p = Partition::from_lists(&g, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(get_singletons(&g, p.clone(), 0).unwrap(), p);
        let out = get_singletons(&g, p, 1).unwrap();
        let mut sizes: Vec<_> = out.classes().iter().map(VertexSet::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 2]);
        assert!(out.classes().contains(&g.set_of([4])));

        let g = path(3);
        let p = Partition::from_lists(&g, &[vec![0, 1, 2]]).unwrap();
        let out = get_singletons(&g, p.clone(), 2).unwrap();
        assert!(out.classes().iter().all(|c| c.len() == 1));
        assert!(get_singletons(&g, p, 3).is_err());
    }

    #[test]
    fn bcpk_star() {
        let g = star(4);
        let r = minmax_bcpk(&g, 3).unwrap();
        assert_eq!(r.partition.max_weight(), 3);
        assert!(matches!(r.certificate, Certificate::StarOptimal(_)));
        assert_eq!(r.partition.to_lists(), vec![vec![3], vec![4], vec![0, 1, 2]]);
    }

    #[test]
    fn bcpk_path6() {
        let g = path(6);
        let r = minmax_bcpk(&g, 3).unwrap();
        assert_eq!(r.certificate, Certificate::RatioHalfW);
        assert_eq!(r.partition.max_weight(), 3);

        let r = minmax_bcpk(&g, 4).unwrap();
        assert_eq!(r.certificate, Certificate::RatioHalfW);
        assert_eq!(r.partition.max_weight(), 2);
        let mut sizes: Vec<_> = r.partition.classes().iter().map(VertexSet::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
    }

    #[test]
    fn bcpk_rejects_k_out_of_range() {
        assert!(minmax_bcpk(&path(5), 2).is_err());
        assert!(minmax_bcpk(&path(5), 6).is_err());
    }

    #[test]
    fn bcpk_star_with_few_components() {
        // spider has 3 components around its center; k = 5 needs singletons
        let g = spider();
        let r = minmax_bcpk(&g, 5).unwrap();
        assert_eq!(r.partition.k(), 5);
        assert!(matches!(r.certificate, Certificate::StarHalfW(_)));
        // the center alone is the heaviest class, and no partition can beat it
        assert_eq!(r.partition.max_weight(), 10);
    }
}
