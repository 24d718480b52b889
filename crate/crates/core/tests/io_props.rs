mod common;

use bcp_core::io::{generate, parse_instance, parse_partition, write_instance, write_partition, Family};
use bcp_core::oracle::{exact_minmax, EnumerationBudget};
use common::arb_graph;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn instance_text_is_a_fixed_point(g in arb_graph(15, 1000)) {
        let text = write_instance(&g);
        let h = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&h), text);
        prop_assert_eq!(h.weights(), g.weights());
        prop_assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn scaled_fractions_clear_to_integers(g in arb_graph(8, 50), d in 1u64..12) {
        // weight w/d for every vertex clears back to w up to a common factor
        let mut text = format!("p bcp {} {}\n", g.n(), g.edge_count());
        for (v, w) in g.weights().iter().enumerate() {
            text += &format!("v {v} {w}/{d}\n");
        }
        for (u, v) in g.edges() {
            text += &format!("e {u} {v}\n");
        }
        let h = parse_instance(&text).unwrap();
        for v in 0..g.n() {
            prop_assert_eq!(h.weight(v) * g.weight(0), g.weight(v) * h.weight(0));
        }
    }

    #[test]
    fn generators_are_seeded(seed in any::<u64>(), n in 3usize..30, fam in 0usize..5) {
        let family = Family::ALL[fam];
        let a = generate(family, n, 1..=9, seed).unwrap();
        let b = generate(family, n, 1..=9, seed).unwrap();
        prop_assert_eq!(write_instance(&a), write_instance(&b));
        prop_assert_eq!(a.n(), n);
        prop_assert!(a.weights().iter().all(|&w| (1..=9).contains(&w)));
    }

    #[test]
    fn partition_text_round_trip(g in arb_graph(8, 9), k_seed in 0usize..8) {
        let k = 1 + k_seed % g.n();
        let p = exact_minmax(&g, k, &EnumerationBudget::default()).unwrap().witness;
        let lists = parse_partition(&write_partition(&p)).unwrap();
        prop_assert_eq!(lists, p.to_lists());
    }
}
