mod common;

use common::{big, big128, brute_mwis, random_weighted, weighted_graph};
use mra_core::mwis::{self, Solver, Weight};
use num_rational::Ratio;
use proptest::prelude::*;

fn graph_strategy(max_order: usize) -> impl Strategy<Value = (Vec<Weight>, Vec<(usize, usize)>)> {
    (0..=max_order, prop::sample::select(vec![0.2, 0.5, 0.8]), any::<u64>())
        .prop_map(|(order, density, seed)| random_weighted(&mut common::rng(seed), order, density))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_enumeration((weights, edges) in graph_strategy(18)) {
        let g = weighted_graph(&weights, &edges);
        let sel = mwis::solve(&g).unwrap();
        let (best, lex_first) = brute_mwis(&weights, &edges);
        prop_assert!(g.is_independent(&sel.vertices));
        prop_assert_eq!(big128(&sel.weight), best);
        prop_assert_eq!(&sel.vertices, &lex_first);
    }

    #[test]
    fn enumeration_and_search_agree((weights, edges) in graph_strategy(20)) {
        let g = weighted_graph(&weights, &edges);
        let searched = Solver::new(64, 0).unwrap().solve(&g).unwrap();
        let enumerated = Solver::new(64, 64).unwrap().solve(&g).unwrap();
        prop_assert_eq!(searched, enumerated);
    }

    #[test]
    fn isolated_vertex_adds_its_weight(
        (weights, edges) in graph_strategy(16),
        num in 1u64..20,
        den in 1u64..20,
    ) {
        let before = mwis::solve(&weighted_graph(&weights, &edges)).unwrap();
        let mut more = weights.clone();
        let w = Ratio::new(num, den);
        more.push(w);
        let after = mwis::solve(&weighted_graph(&more, &edges)).unwrap();
        prop_assert_eq!(big128(&after.weight), big128(&before.weight) + big(&w));
        prop_assert!(after.vertices.contains(&weights.len()));
    }
}

#[test]
fn denser_graphs_up_to_the_limit() {
    // Larger than the oracle can handle; check feasibility and that no single
    // vertex swap improves the selection.
    let mut rng = common::rng(77);
    for &(order, density) in &[(40, 0.3), (64, 0.5), (64, 0.9)] {
        let (weights, edges) = random_weighted(&mut rng, order, density);
        let g = weighted_graph(&weights, &edges);
        let sel = mwis::solve(&g).unwrap();
        assert!(g.is_independent(&sel.vertices));
        for v in 0..order {
            if sel.vertices.contains(&v) {
                continue;
            }
            let mut grown = sel.vertices.clone();
            grown.push(v);
            grown.sort_unstable();
            assert!(!g.is_independent(&grown), "vertex {v} could be added");
        }
    }
}

#[test]
fn capacity_limit() {
    let g = weighted_graph(&vec![Ratio::from_integer(1); 65], &[]);
    assert!(matches!(mwis::solve(&g), Err(mwis::MwisError::Capacity { order: 65, .. })));
    assert!(Solver::new(65, 12).is_err());
    let small = Solver::new(4, 12).unwrap();
    let g5 = weighted_graph(&[Ratio::from_integer(1); 5], &[]);
    assert!(small.solve(&g5).is_err());
}
