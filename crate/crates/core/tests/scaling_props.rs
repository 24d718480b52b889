mod common;

use bcp_core::oracle::{exact_maxmin, exact_minmax, EnumerationBudget};
use bcp_core::scaling::{eps_maxmin, eps_minmax_bcpk, scale, Direction, Epsilon, ExactMaxMin};
use bcp_core::{minmax_bcpk, Frac, WeightedGraph};
use common::arb_graph;
use proptest::prelude::*;

fn frac(x: u64) -> Frac {
    Frac::from_integer(x as u128)
}

fn arb_eps() -> impl Strategy<Value = Epsilon> {
    (1u128..=20, 1u128..=20).prop_map(|(p, q)| Epsilon::new(p, q).unwrap())
}

/// Heavy-tailed weights up to 10⁹ on a small connected graph.
fn arb_heavy_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    arb_graph(max_n, 1).prop_flat_map(|g| {
        let n = g.n();
        prop::collection::vec(prop_oneof![1u64..=10, 1u64..=1_000_000_000], n)
            .prop_map(move |w| g.with_weights(w).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minmax_scaling_sandwich(g in arb_heavy_graph(10), eps in arb_eps()) {
        let s = scale(&g, eps, Direction::MinMax).unwrap();
        let lambda = s.lambda;
        let mut total = Frac::from_integer(0);
        for v in 0..g.n() {
            let w = frac(g.weight(v)) / lambda;
            let hat = frac(s.scaled_weights()[v]);
            prop_assert!(w <= hat && hat < w + Frac::from_integer(1));
            total += hat;
        }
        prop_assert!(total <= s.size_bound());
    }

    #[test]
    fn maxmin_scaling_floor(g in arb_heavy_graph(10), eps in arb_eps()) {
        match scale(&g, eps, Direction::MaxMin) {
            Ok(s) => {
                for v in 0..g.n() {
                    let w = frac(g.weight(v)) / s.lambda;
                    let hat = frac(s.scaled_weights()[v]);
                    prop_assert!(hat <= w && w < hat + Frac::from_integer(1));
                    prop_assert!(s.scaled_weights()[v] >= 1);
                }
            }
            Err(_) => prop_assert!(eps.value() > Frac::from_integer(g.n() as u128)),
        }
    }

    #[test]
    fn eps_ratio(g in arb_heavy_graph(8), k_seed in 0usize..3, tenth in any::<bool>()) {
        let k = 3 + k_seed;
        prop_assume!(g.n() >= k);
        let eps: Epsilon = if tenth { "1/10" } else { "1/2" }.parse().unwrap();
        let r = eps_minmax_bcpk(&g, k, eps).unwrap();
        let opt = exact_minmax(&g, k, &EnumerationBudget::default()).unwrap().value;
        let bound = (Frac::new(k as u128, 2) + eps.value()) * frac(opt);
        prop_assert!(frac(r.partition.max_weight()) <= bound);
        let again = eps_minmax_bcpk(&g, k, eps).unwrap();
        prop_assert_eq!(again.partition.to_lists(), r.partition.to_lists());
    }

    #[test]
    fn unit_weights_unchanged_by_scaling(g in arb_graph(12, 1), k_seed in 0usize..4, eps in arb_eps()) {
        let k = 3 + k_seed;
        prop_assume!(g.n() >= k);
        let direct = minmax_bcpk(&g, k).unwrap();
        let scaled = eps_minmax_bcpk(&g, k, eps).unwrap();
        prop_assert_eq!(direct.partition.to_lists(), scaled.partition.to_lists());
    }

    /// With an exact routine, floor scaling loses at most `λ·|V| = ε·min w ≤ ε·opt`.
    #[test]
    fn maxmin_with_exact_routine(g in arb_heavy_graph(8), k_seed in 0usize..4) {
        let k = 2 + k_seed;
        prop_assume!(g.n() >= k);
        let eps: Epsilon = "1/2".parse().unwrap();
        let p = eps_maxmin(&g, k, eps, &ExactMaxMin::default()).unwrap();
        let opt = exact_maxmin(&g, k, &EnumerationBudget::default()).unwrap().value;
        prop_assert!(frac(p.min_weight()) >= (Frac::from_integer(1) - eps.value()) * frac(opt));
    }
}

#[test]
fn heavy_path_example() {
    let g = WeightedGraph::new(
        vec![1, 1_000_000_000, 1, 1, 1_000_000_000, 1],
        (0..5).map(|v| (v, v + 1)),
    )
    .unwrap();
    let eps: Epsilon = "0.1".parse().unwrap();
    let r = eps_minmax_bcpk(&g, 3, eps).unwrap();
    let opt = exact_minmax(&g, 3, &EnumerationBudget::default()).unwrap().value;
    assert!(frac(r.partition.max_weight()) * Frac::from_integer(10) <= frac(opt) * Frac::from_integer(16));
}
