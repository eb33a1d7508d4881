use std::io::Cursor;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use prtail::{degree_histograms, pagerank, parse_edge_list, Dangling, DirectedGraph, Duplicates, PageRankConfig};

fn arb_graph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=(4 * n))
            .prop_map(move |edges| DirectedGraph::from_edges(n, &edges, Duplicates::Dedup).unwrap())
    })
}

fn direct(g: &DirectedGraph, c: f64, dangling: Dangling) -> DVector<f64> {
    let n = g.node_count();
    let mut a = DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        match g.out_degree(j) {
            0 if dangling == Dangling::Redistribute => {
                for i in 0..n {
                    a[(i, j)] -= c / n as f64;
                }
            }
            0 => {}
            k => {
                for &i in g.successors(j) {
                    a[(i, j)] -= c / k as f64;
                }
            }
        }
    }
    a.lu().solve(&DVector::from_element(n, 1.0 - c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matches_direct_solve(g in arb_graph(50), c in 0.05f64..0.95, drop in any::<bool>()) {
        let dangling = if drop { Dangling::Drop } else { Dangling::Redistribute };
        let pr = pagerank(&g, &PageRankConfig { c, tol: 1e-15, max_iter: 10_000, dangling }).unwrap();
        let exact = direct(&g, c, dangling);
        for (a, b) in pr.values.iter().zip(exact.iter()) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn mean_one_floor_and_monotone_residual(g in arb_graph(200), c in 0.05f64..0.95) {
        let pr = pagerank(&g, &PageRankConfig::new(c)).unwrap();
        prop_assert!(pr.converged);
        prop_assert!((pr.mean() - 1.0).abs() <= 1e-8);
        prop_assert!(pr.values.iter().all(|&v| v >= 1.0 - c - 1e-15));
        for w in pr.residual_history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-15, "{} after {}", w[1], w[0]);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(60)) {
        let mut text = Vec::new();
        g.write_edge_list(&mut text).unwrap();
        if g.edge_count() == 0 {
            prop_assert!(parse_edge_list(Cursor::new(text), Duplicates::Keep).is_err());
        } else {
            let back = parse_edge_list(Cursor::new(text), Duplicates::Keep).unwrap();
            let mut original: Vec<(u64, u64)> = g.edges().map(|(a, b)| (a as u64, b as u64)).collect();
            let mut parsed: Vec<(u64, u64)> =
                back.graph.edges().map(|(a, b)| (back.ids[a], back.ids[b])).collect();
            original.sort_unstable();
            parsed.sort_unstable();
            prop_assert_eq!(original, parsed);
        }
    }

    #[test]
    fn degree_sums_agree(g in arb_graph(80)) {
        let (ins, outs) = degree_histograms::<f64>(&g);
        let e = g.edge_count() as f64;
        prop_assert_eq!(ins.values.iter().sum::<f64>(), e);
        prop_assert_eq!(outs.values.iter().sum::<f64>(), e);
    }
}

#[test]
fn conservation_at_every_iterate_on_a_graph_with_dangling_nodes() {
    // 0 → 1 → 2, 2 → 0, 3 → 0, node 4 dangling
    let g = DirectedGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 0)], Duplicates::Dedup).unwrap();
    for max_iter in 1..40 {
        let pr = pagerank(&g, &PageRankConfig { max_iter, ..PageRankConfig::new(0.85) }).unwrap();
        assert!((pr.values.iter().sum::<f64>() - 5.0).abs() <= 1e-8, "iteration {max_iter}");
    }
}

#[test]
fn parser_accepts_snap_layout() {
    let text = "# Directed graph (each unordered pair of nodes is saved once): web-Stanford.txt\n\
                # Nodes: 3 Edges: 4\n# FromNodeId\tToNodeId\n10\t20\n10\t30\n20\t10\n30\t10\n30\t10\n";
    let parsed = parse_edge_list(Cursor::new(text), Duplicates::Dedup).unwrap();
    assert_eq!(parsed.ids, vec![10, 20, 30]);
    assert_eq!(parsed.graph.edge_count(), 4);
    assert_eq!(parsed.graph.in_degrees(), vec![2, 1, 1]);
    let kept = parse_edge_list(Cursor::new(text), Duplicates::Keep).unwrap();
    assert_eq!(kept.graph.edge_count(), 5);
}
