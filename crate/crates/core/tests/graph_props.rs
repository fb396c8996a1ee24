use cdv_core::graph::{canonical_form, generate_named, has_minor, is_flat, vertex_connectivity, Graph};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap()
        })
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Smallest vertex set whose removal disconnects the graph or leaves one vertex.
fn connectivity_by_subsets(g: &Graph) -> usize {
    let n = g.n();
    for k in 0..n - 1 {
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) == 0).collect();
            if !g.induces_connected(&rest) {
                return k;
            }
        }
    }
    n - 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connectivity_matches_subset_enumeration(g in arb_graph(7).prop_filter("n >= 2", |g| g.n() >= 2)) {
        prop_assert_eq!(vertex_connectivity(&g).unwrap(), connectivity_by_subsets(&g));
    }

    #[test]
    fn json_round_trip(g in arb_graph(8)) {
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
    }

    #[test]
    fn canonical_form_ignores_labels((g, perm) in arb_graph(8).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), arb_perm(n))
    })) {
        prop_assert_eq!(canonical_form(&g), canonical_form(&g.permuted(&perm)));
    }

    #[test]
    fn minors_survive_adding_edges(g in arb_graph(7), extra in (0usize..7, 0usize..7)) {
        let patterns = [
            generate_named("complete", &[3]).unwrap(),
            generate_named("cycle", &[4]).unwrap(),
            generate_named("complete", &[4]).unwrap(),
        ];
        let (a, b) = (extra.0 % g.n(), extra.1 % g.n());
        let bigger = if a != b && !g.has_edge(a, b) {
            Graph::new(g.n(), g.edges().iter().copied().chain([(a, b)])).unwrap()
        } else {
            g.clone()
        };
        for p in &patterns {
            if let Some(model) = has_minor(&g, p).unwrap() {
                prop_assert!(model.validate(&g, p).is_ok());
                prop_assert!(has_minor(&bigger, p).unwrap().is_some());
            }
        }
    }

    #[test]
    fn cycle_minor_iff_not_a_forest(g in arb_graph(7)) {
        let triangle = generate_named("complete", &[3]).unwrap();
        let forest = g.edge_count() + g.component_count() == g.n();
        prop_assert_eq!(has_minor(&g, &triangle).unwrap().is_none(), forest);
    }
}

#[test]
fn k4_minor_needs_more_than_series_parallel() {
    // K4 minus an edge is series-parallel; K4 itself is not
    let k4 = generate_named("complete", &[4]).unwrap();
    assert!(has_minor(&k4.delete_edge(0, 1), &k4).unwrap().is_none());
    assert!(has_minor(&generate_named("octahedron", &[]).unwrap(), &k4).unwrap().is_some());
}

#[test]
fn flat_classification_of_named_graphs() {
    for (name, params, flat) in [
        ("complete", &[5][..], true),
        ("complete", &[6][..], false),
        ("octahedron", &[][..], true),
        ("petersen", &[][..], false),
        ("complete_bipartite", &[3, 4][..], true),
        ("complete_multipartite", &[3, 3, 1][..], false),
    ] {
        let g = generate_named(name, params).unwrap();
        assert_eq!(is_flat(&g).unwrap(), flat, "{name} {params:?}");
    }
}
