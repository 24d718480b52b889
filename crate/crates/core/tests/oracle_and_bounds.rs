mod common;

use bcp_core::graph::WeightedGraph;
use bcp_core::oracle::{enumerate_connected_kpartitions, exact_maxmin, exact_minmax, EnumerationBudget};
use bcp_core::partition::{components_without, average_bound, cut_vertex_bound, order3, validate};
use bcp_core::{Frac, Partition};
use common::{arb_graph, class_weight, naive_partitions};
use proptest::prelude::*;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

fn canonical(mut p: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut p {
        c.sort_unstable();
    }
    p.sort();
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The pruned enumeration yields exactly the partitions of a plain one.
    #[test]
    fn enumeration_matches_naive(g in arb_graph(7, 5), k_seed in 1usize..8) {
        let k = 1 + k_seed % g.n();
        let fast: Vec<_> = enumerate_connected_kpartitions(&g, k, &budget())
            .unwrap()
            .iter()
            .map(|p| canonical(p.classes().iter().map(|c| c.to_vec()).collect()))
            .collect();
        let mut naive: Vec<_> = naive_partitions(&g, k).into_iter().map(canonical).collect();
        let mut sorted = fast.clone();
        sorted.sort();
        naive.sort();
        prop_assert_eq!(sorted.len(), fast.len());
        prop_assert_eq!(sorted, naive);
    }

    #[test]
    fn optima_match_naive_and_bounds_hold(g in arb_graph(8, 8), k_seed in 1usize..8) {
        let k = 1 + k_seed % g.n();
        let naive = naive_partitions(&g, k);
        let naive_minmax = naive.iter().map(|p| p.iter().map(|c| class_weight(&g, c)).max().unwrap()).min().unwrap();
        let naive_maxmin = naive.iter().map(|p| p.iter().map(|c| class_weight(&g, c)).min().unwrap()).max().unwrap();
        let mm = exact_minmax(&g, k, &budget()).unwrap();
        let xm = exact_maxmin(&g, k, &budget()).unwrap();
        prop_assert_eq!(mm.value, naive_minmax);
        prop_assert_eq!(xm.value, naive_maxmin);
        prop_assert_eq!(mm.witness.max_weight(), mm.value);
        prop_assert_eq!(xm.witness.min_weight(), xm.value);
        prop_assert!(validate(&g, &mm.witness.to_lists(), k).is_valid());
        prop_assert!(validate(&g, &xm.witness.to_lists(), k).is_valid());

        let w_over_k = average_bound(&g, k);
        prop_assert!(Frac::from_integer(mm.value as u128) >= w_over_k);
        prop_assert!(Frac::from_integer(xm.value as u128) <= w_over_k);
        for u in 0..g.n() {
            let ell = components_without(&g, u).len();
            if ell >= 2 && ell + 1 >= k {
                prop_assert!(cut_vertex_bound(&g, k, u).unwrap() <= mm.value);
            }
        }
    }

    /// For two classes the min-max and max-min problems coincide.
    #[test]
    fn two_class_objectives_coincide(g in arb_graph(9, 8)) {
        prop_assume!(g.n() >= 2);
        let mm = exact_minmax(&g, 2, &budget()).unwrap();
        let xm = exact_maxmin(&g, 2, &budget()).unwrap();
        prop_assert_eq!(mm.witness.min_weight(), xm.value);
        prop_assert_eq!(mm.value + xm.value, g.total_weight());
    }

    #[test]
    fn order3_is_idempotent_permutation(g in arb_graph(8, 8)) {
        prop_assume!(g.n() >= 3);
        for p in enumerate_connected_kpartitions(&g, 3, &budget()).unwrap() {
            let o = order3(&p).unwrap();
            let again = order3(&o.to_partition()).unwrap();
            prop_assert_eq!(&o, &again);
            prop_assert!(o.v1().weight() <= o.v2().weight() && o.v2().weight() <= o.v3().weight());
            let mut a: Vec<_> = p.classes().iter().map(|c| c.to_vec()).collect();
            let mut b: Vec<_> = o.classes().iter().map(|c| c.to_vec()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn validate_flags_broken_partitions() {
    let g = WeightedGraph::new(vec![1; 5], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    for p in enumerate_connected_kpartitions(&g, 3, &budget()).unwrap() {
        let lists = p.to_lists();
        assert!(validate(&g, &lists, 3).is_valid());
        // swapping two end vertices between classes breaks connectivity or coverage
        let mut moved = lists.clone();
        let v = moved[0].pop().unwrap();
        moved[1].push(v);
        let still_ok = Partition::from_lists(&g, &moved).is_ok();
        let report = validate(&g, &moved, 3);
        assert_eq!(report.is_valid(), still_ok);
    }
    assert!(!validate(&g, &[vec![0, 1], vec![2, 3]], 2).is_valid());
    assert!(!validate(&g, &[vec![0, 2], vec![1, 3, 4]], 2).is_valid());
    assert!(!validate(&g, &[vec![0, 1, 2], vec![2, 3, 4]], 2).is_valid());
}
