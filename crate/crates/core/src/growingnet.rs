//! Growing network: preferential attachment mixed with uniform attachment.
//!
//! Start with `d` isolated nodes. Each new node places `d` links on distinct
//! existing nodes; every link independently picks a uniformly random node
//! with probability `β` and otherwise a node with probability proportional
//! to its current in-degree. In-degrees are updated once all `d` links of
//! the step are placed. At the end the first `d` nodes, which had no
//! out-links, each link to `d` distinct random other nodes, so every node
//! has out-degree exactly `d`.

use rand::Rng;

use crate::error::{param, Result};
use crate::graph::{DirectedGraph, Duplicates};
use crate::scalar::Scalar;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthParams {
    /// Probability that a link ignores in-degrees.
    pub beta: f64,
    /// Out-links per node.
    pub d: usize,
    pub n_final: usize,
    pub seed: u64,
}

impl GrowthParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return param(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if self.d == 0 {
            return param("d must be at least 1");
        }
        if self.n_final <= self.d {
            return param(format!("n_final ({}) must exceed d ({})", self.n_final, self.d));
        }
        Ok(())
    }
}

/// Link probabilities `β/n + (1−β)·indeg_i/Σ indeg`. With no in-degree mass
/// at all the preferential part is replaced by the uniform distribution.
pub fn attachment_probabilities<F: Scalar>(in_degrees: &[usize], beta: F) -> Result<Vec<F>> {
    if in_degrees.is_empty() {
        return param("need at least one node");
    }
    if !(beta >= F::zero() && beta <= F::one()) {
        return param(format!("beta must lie in [0, 1], got {beta}"));
    }
    let n = F::from_count(in_degrees.len());
    let total: usize = in_degrees.iter().sum();
    let uniform = F::one() / n;
    Ok(in_degrees
        .iter()
        .map(|&k| {
            let pref = if total == 0 { uniform } else { F::from_count(k) / F::from_count(total) };
            beta * uniform + (F::one() - beta) * pref
        })
        .collect())
}

/// Generates the network.
pub fn generate(params: &GrowthParams) -> Result<DirectedGraph> {
    params.validate()?;
    let GrowthParams { beta, d, n_final, .. } = *params;
    let mut rng = seed::stream_rng(seed::derive(params.seed, seed::label::GROWING_NET), 0);

    let mut in_degree = vec![0usize; n_final];
    // Every placed link's target; a uniform pick is proportional to in-degree.
    let mut link_targets: Vec<usize> = Vec::with_capacity(n_final * d);
    let mut positive = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n_final * d);
    let mut chosen: Vec<usize> = Vec::with_capacity(d);

    for v in d..n_final {
        chosen.clear();
        let mut chosen_positive = 0usize;
        while chosen.len() < d {
            let uniform_link = beta > 0.0 && rng.random::<f64>() < beta;
            // Preferential mass left outside this step's picks; when none
            // remains the conditional law is uniform.
            let candidate = if uniform_link || chosen_positive == positive {
                rng.random_range(0..v)
            } else {
                link_targets[rng.random_range(0..link_targets.len())]
            };
            if !chosen.contains(&candidate) {
                if in_degree[candidate] > 0 {
                    chosen_positive += 1;
                }
                chosen.push(candidate);
            }
        }
        for &t in &chosen {
            if in_degree[t] == 0 {
                positive += 1;
            }
            in_degree[t] += 1;
            link_targets.push(t);
            edges.push((v, t));
        }
    }

    for u in 0..d {
        chosen.clear();
        while chosen.len() < d {
            let t = rng.random_range(0..n_final);
            if t != u && !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        edges.extend(chosen.iter().map(|&t| (u, t)));
    }

    DirectedGraph::from_edges(n_final, &edges, Duplicates::Keep)
}
