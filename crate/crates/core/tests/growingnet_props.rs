use std::io::Cursor;

use proptest::prelude::*;
use prtail::{
    attachment_probabilities, ccdf, degree_histograms, fit_tail_mle, generate, parse_edge_list, top_decade_fit,
    xmin_for_top_fraction, Duplicates, GrowthParams,
};

fn hill_top_decile(g: &prtail::DirectedGraph) -> f64 {
    let (in_deg, _) = degree_histograms::<f64>(g);
    fit_tail_mle(&in_deg, xmin_for_top_fraction(&in_deg, 0.1).unwrap()).unwrap().alpha_ccdf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_invariants(beta in 0.0f64..=1.0, d in 1usize..6, extra in 1usize..300, seed in any::<u64>()) {
        let n = d + extra;
        let g = generate(&GrowthParams { beta, d, n_final: n, seed }).unwrap();
        prop_assert_eq!(g.node_count(), n);
        prop_assert_eq!(g.edge_count(), n * d);
        for v in 0..n {
            let mut succ = g.successors(v).to_vec();
            prop_assert_eq!(succ.len(), d);
            prop_assert!(!succ.contains(&v));
            succ.sort_unstable();
            succ.dedup();
            prop_assert_eq!(succ.len(), d);
            if v >= d {
                prop_assert!(g.successors(v).iter().all(|&t| t < v), "node {} links forward", v);
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one(degrees in prop::collection::vec(0usize..1000, 1..200), beta in 0.0f64..=1.0) {
        let p = attachment_probabilities(&degrees, beta).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn edge_list_round_trip() {
    let g = generate(&GrowthParams { beta: 0.2, d: 4, n_final: 3000, seed: 12 }).unwrap();
    let mut text = Vec::new();
    g.write_edge_list(&mut text).unwrap();
    let back = parse_edge_list(Cursor::new(text), Duplicates::Keep).unwrap();
    assert_eq!(back.ids, (0..3000u64).collect::<Vec<_>>());
    assert_eq!(back.graph, g);
}

#[test]
fn heavier_tail_with_less_uniform_mixing() {
    let mean = |beta: f64| {
        (0..20)
            .map(|s| hill_top_decile(&generate(&GrowthParams { beta, d: 8, n_final: 10_000, seed: 100 + s }).unwrap()))
            .sum::<f64>()
            / 20.0
    };
    let (a0, a2, a5) = (mean(0.0), mean(0.2), mean(0.5));
    assert!(a0 <= a2 && a2 <= a5, "{a0} {a2} {a5}");
}

#[test]
fn in_degree_tail_is_straight_in_log_log() {
    let n = 50_000;
    let g = generate(&GrowthParams { beta: 0.2, d: 8, n_final: n, seed: 31 }).unwrap();
    let (in_deg, _) = degree_histograms::<f64>(&g);
    let fit = top_decade_fit(&ccdf(&in_deg).unwrap(), 100.0 / n as f64).unwrap();
    assert!(fit.r_squared >= 0.95, "{fit:?}");
    assert!(fit.slope < -0.5, "{fit:?}");
}
