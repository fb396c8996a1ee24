use cdv_core::constructions::{circuit_matrix, interpolation_trace, regular_polygon, InterpolationParams};
use cdv_core::embedding::{check_vdh_all, hyperplane_split, nullspace_embedding, spanned_complex, two_hyperplane_cover, HyperplaneCover};
use cdv_core::gmatrix::{complete_witness, random_well_signed, shift_to_one_negative, RandomParams};
use cdv_core::graph::{generate_named, Graph};
use cdv_core::kappa::search_corank;
use cdv_core::spectra::{eigen_sym, SymMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn orthogonal(d: usize, entries: &[f64]) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |i, j| entries[i * d + j] + if i == j { 3.0 } else { 0.0 });
    a.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn complex_counts_survive_rotation(entries in proptest::collection::vec(-1.0f64..1.0, 16), which in 0usize..3) {
        let (g, m) = match which {
            0 => {
                let w = complete_witness(5);
                (w.graph, w.matrix)
            }
            1 => {
                let cm = circuit_matrix(&(0..6).collect::<Vec<_>>(), &regular_polygon(6)).unwrap();
                (cm.graph(6).unwrap(), cm.matrix)
            }
            _ => {
                let g = generate_named("complete_bipartite", &[2, 3]).unwrap();
                let m = SymMatrix::from_fn(5, |i, j| if g.has_edge(i, j) { -1.0 } else { 0.0 });
                (g, m)
            }
        };
        let u = nullspace_embedding(&m, None).unwrap();
        let q = orthogonal(u.d(), &entries);
        let before = spanned_complex(&g, &u).unwrap();
        let after = spanned_complex(&g, &u.transformed(&q)).unwrap();
        prop_assert_eq!(before.lines.len(), after.lines.len());
        prop_assert_eq!(before.planes.len(), after.planes.len());
        prop_assert_eq!(before.degenerate_edges, after.degenerate_edges);
    }

    #[test]
    fn split_partitions_vertices(normal in proptest::collection::vec(-1.0f64..1.0, 4)) {
        prop_assume!(normal.iter().any(|x| x.abs() > 1e-3));
        let w = complete_witness(5);
        let u = nullspace_embedding(&w.matrix, None).unwrap();
        let s = hyperplane_split(&w.graph, &u, &normal, None).unwrap();
        let mut all: Vec<usize> = s.side_pos.iter().chain(&s.on).chain(&s.side_neg).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn circuit_matrix_scales_inversely(scale in 0.1f64..10.0, n in 3usize..9) {
        let cycle: Vec<usize> = (0..n).collect();
        let pts = regular_polygon(n);
        let scaled: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] * scale, p[1] * scale]).collect();
        let a = circuit_matrix(&cycle, &pts).unwrap();
        let b = circuit_matrix(&cycle, &scaled).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = a.matrix.get(i, j) / (scale * scale);
                prop_assert!((b.matrix.get(i, j) - expected).abs() <= 1e-9 * expected.abs().max(1.0));
            }
        }
        prop_assert!(b.kernel_residual <= 1e-8);
    }

    #[test]
    fn hyperplane_conditions_hold_at_higher_corank(seed in 0u64..40, which in 0usize..3) {
        let name = ["octahedron", "icosahedron", "complete"][which];
        let params: &[i64] = if which == 2 { &[6] } else { &[] };
        let g = generate_named(name, params).unwrap();
        if let Some(m) = search_corank(&g, 2, seed, 200).unwrap() {
            let r = check_vdh_all(&g, &m.matrix, None).unwrap();
            prop_assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn interpolation_keeps_the_kernel(seed in any::<u64>(), c in 0.1f64..3.0) {
        // A = c·M has the kernel of M; so does the shifted matrix built from it
        let g = generate_named("octahedron", &[]).unwrap();
        let m = shift_to_one_negative(&random_well_signed(&g, seed, RandomParams::default()), 0.0).unwrap();
        let a = m.matrix.scaled(-c);
        let params = InterpolationParams { beta_max: 0.9 / c, steps: 10, bisections: 10 };
        let t = interpolation_trace(&a, &m.matrix, params, None).unwrap();
        prop_assert!(t.corank_bound_holds);
    }
}

#[test]
fn flat_corank_four_has_no_cover() {
    let w = complete_witness(5);
    let u = nullspace_embedding(&w.matrix, None).unwrap();
    assert_eq!(two_hyperplane_cover(&w.graph, &u).unwrap(), HyperplaneCover::None);
}

#[test]
fn corank_three_octahedron_passes_split_checks() {
    let g = generate_named("octahedron", &[]).unwrap();
    let m = (0..20).find_map(|s| search_corank(&g, 3, s, 200).unwrap()).expect("corank-3 witness");
    let s = eigen_sym(&m.matrix, None).unwrap();
    assert_eq!((s.neg_count, s.corank()), (1, 3));
    let r = check_vdh_all(&g, &m.matrix, None).unwrap();
    assert!(r.passed() && r.hyperplanes_checked > 0);
}

#[test]
fn disconnected_graph_is_rejected_by_split_checks() {
    let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
    let m = SymMatrix::from_fn(4, |i, j| if g.has_edge(i, j) { -1.0 } else { 0.0 });
    assert!(check_vdh_all(&g, &m, None).is_err());
}
