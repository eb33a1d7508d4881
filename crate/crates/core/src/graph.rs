//! Sparse directed graphs and PageRank by power iteration.
//!
//! PageRank is computed in the scaling where the teleport term is the
//! constant `1 − c` per node,
//!
//! > PR(i) = c Σ_{j→i} PR(j) / d_j + (1 − c),
//!
//! so that the values average to one (with dangling mass redistributed) and
//! are directly comparable with samples of the model variable `R`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::sample::{SampleSet, SampleSource};
use crate::scalar::Scalar;

/// What to do with repeated `src dst` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Duplicates {
    #[default]
    Dedup,
    Keep,
}

/// Handling of nodes without out-links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dangling {
    /// Spread their mass uniformly over all nodes; keeps `mean(PR) = 1`.
    #[default]
    Redistribute,
    /// Let their mass leak; the literal sum over in-links only.
    Drop,
}

/// Immutable directed graph in compressed adjacency form, both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl DirectedGraph {
    /// Builds a graph on nodes `0..n`. Out-lists keep the order of `edges`
    /// per source (after sorting by source).
    pub fn from_edges(n: usize, edges: &[(usize, usize)], duplicates: Duplicates) -> Result<Self> {
        if n == 0 {
            return param("graph must have at least one node");
        }
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= n || t >= n) {
            return param(format!("edge ({s}, {t}) references a node outside 0..{n}"));
        }
        let mut edges = edges.to_vec();
        match duplicates {
            Duplicates::Dedup => {
                edges.sort_unstable();
                edges.dedup();
            }
            Duplicates::Keep => edges.sort_by_key(|&(s, _)| s),
        }
        let (out_offsets, out_targets) = csr(n, edges.iter().copied());
        let mut reversed: Vec<(usize, usize)> = edges.iter().map(|&(s, t)| (t, s)).collect();
        reversed.sort_unstable();
        let (in_offsets, in_sources) = csr(n, reversed.into_iter());
        Ok(Self { n, out_offsets, out_targets, in_offsets, in_sources })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.in_degree(v)).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |s| self.successors(s).iter().map(move |&t| (s, t)))
    }

    /// SNAP-style edge list: a comment header, then `src\tdst` per line.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# Directed graph")?;
        writeln!(out, "# Nodes: {} Edges: {}", self.n, self.edge_count())?;
        writeln!(out, "# FromNodeId\tToNodeId")?;
        for (s, t) in self.edges() {
            writeln!(out, "{s}\t{t}")?;
        }
        Ok(())
    }
}

fn csr(n: usize, sorted_pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    let mut targets = Vec::new();
    for (s, t) in sorted_pairs {
        offsets[s + 1] += 1;
        targets.push(t);
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, targets)
}

/// A parsed edge list together with the original id of every dense node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: DirectedGraph,
    /// `ids[v]` is the id node `v` carried in the input; ascending.
    pub ids: Vec<u64>,
}

/// Reads whitespace-separated `src dst` lines; `#` starts a comment line.
///
/// Ids may be arbitrary nonnegative integers and are remapped to `0..n` in
/// ascending id order.
pub fn parse_edge_list<R: BufRead>(input: R, duplicates: Duplicates) -> Result<ParsedGraph> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::Parse { line: lineno, message: format!("missing {what} node id") })?;
            tok.parse::<u64>()
                .map_err(|_| Error::Parse { line: lineno, message: format!("invalid {what} node id {tok:?}") })
        };
        let src = next_id("source")?;
        let dst = next_id("target")?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse { line: lineno, message: format!("unexpected trailing field {extra:?}") });
        }
        raw.push((src, dst));
    }
    if raw.is_empty() {
        return param("edge list contains no edges");
    }
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(s, t)| [s, t]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges: Vec<(usize, usize)> = raw.iter().map(|(s, t)| (index[s], index[t])).collect();
    let graph = DirectedGraph::from_edges(ids.len(), &edges, duplicates)?;
    Ok(ParsedGraph { graph, ids })
}

/// Power-iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig<F> {
    pub c: F,
    /// Stopping threshold on the L1 change per node.
    pub tol: F,
    pub max_iter: usize,
    pub dangling: Dangling,
}

impl<F: Scalar> PageRankConfig<F> {
    pub fn new(c: F) -> Self {
        Self { c, tol: F::lit(1e-10), max_iter: 1000, dangling: Dangling::Redistribute }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankVector<F> {
    pub values: Vec<F>,
    pub c: F,
    pub iterations: usize,
    /// Final L1 change (total over nodes).
    pub residual: F,
    pub converged: bool,
    /// L1 change after every iteration.
    pub residual_history: Vec<F>,
}

impl<F: Scalar> PageRankVector<F> {
    pub fn mean(&self) -> F {
        self.values.iter().copied().sum::<F>() / F::from_count(self.values.len())
    }

    pub fn to_samples(&self) -> SampleSet<F> {
        SampleSet::new(SampleSource::PageRank, None, format!("c={}", self.c), self.values.clone())
    }

    /// `node value` lines using the caller's node labels, after a metadata
    /// header.
    pub fn write_text<W: Write>(&self, labels: &[u64], mut out: W) -> Result<()> {
        if labels.len() != self.values.len() {
            return param("label count does not match PageRank vector length");
        }
        writeln!(out, "# c: {}", self.c)?;
        writeln!(out, "# iterations: {}", self.iterations)?;
        writeln!(out, "# residual: {}", self.residual)?;
        writeln!(out, "# converged: {}", self.converged)?;
        for (id, v) in labels.iter().zip(&self.values) {
            writeln!(out, "{id} {v}")?;
        }
        Ok(())
    }
}

/// PageRank of `g`, starting from the all-ones vector.
///
/// Stops once the L1 change drops to `tol · n` or after `max_iter` sweeps;
/// in the latter case `converged` is false and the last iterate is returned.
pub fn pagerank<F: Scalar>(g: &DirectedGraph, config: &PageRankConfig<F>) -> Result<PageRankVector<F>> {
    let c = config.c;
    if !(c > F::zero() && c < F::one()) {
        return param(format!("damping c must lie in (0, 1), got {c}"));
    }
    if !(config.tol >= F::zero()) {
        return param("tolerance must be nonnegative");
    }
    let n = g.node_count();
    let nf = F::from_count(n);
    let teleport = F::one() - c;
    let inv_out: Vec<F> = (0..n)
        .map(|v| match g.out_degree(v) {
            0 => F::zero(),
            k => F::one() / F::from_count(k),
        })
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&v| g.out_degree(v) == 0).collect();
    let threshold = config.tol * nf;

    let mut x = vec![F::one(); n];
    let mut next = vec![F::zero(); n];
    let mut history = Vec::new();
    let mut residual = F::infinity();
    let mut iterations = 0;
    while iterations < config.max_iter {
        let spread = match config.dangling {
            Dangling::Redistribute => dangling.iter().map(|&v| x[v]).sum::<F>() / nf,
            Dangling::Drop => F::zero(),
        };
        next.par_iter_mut().enumerate().for_each(|(i, out)| {
            let inflow: F = g.predecessors(i).iter().map(|&j| x[j] * inv_out[j]).sum();
            *out = c * (inflow + spread) + teleport;
        });
        residual = x.par_iter().zip(next.par_iter()).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        iterations += 1;
        history.push(residual);
        if residual <= threshold {
            break;
        }
    }
    Ok(PageRankVector {
        values: x,
        c,
        iterations,
        residual,
        converged: residual <= threshold,
        residual_history: history,
    })
}

/// Per-node in- and out-degrees as integer sample sets.
pub fn degree_histograms<F: Scalar>(g: &DirectedGraph) -> (SampleSet<F>, SampleSet<F>) {
    let to_set = |source, degrees: Vec<usize>| {
        SampleSet::new(
            source,
            None,
            format!("nodes={}", g.node_count()),
            degrees.into_iter().map(F::from_count).collect(),
        )
    };
    (to_set(SampleSource::InDegree, g.in_degrees()), to_set(SampleSource::OutDegree, g.out_degrees()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn parse(text: &str) -> ParsedGraph {
        parse_edge_list(text.as_bytes(), Duplicates::Dedup).unwrap()
    }

    #[test]
    fn two_cycle() {
        let p = parse("# comment\n1 2\n2 1\n");
        assert_eq!(p.graph.node_count(), 2);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.graph.in_degrees(), vec![1, 1]);
        assert_eq!(p.ids, vec![1, 2]);
        let (ins, outs) = degree_histograms::<f64>(&p.graph);
        assert_eq!(ins.values, vec![1.0, 1.0]);
        assert_eq!(outs.values, vec![1.0, 1.0]);
    }

    #[test]
    fn star_degrees() {
        let p = parse("2 1\n3 1\n4 1\n1 2\n");
        let (ins, outs) = degree_histograms::<f64>(&p.graph);
        assert_eq!(ins.values, vec![3.0, 1.0, 0.0, 0.0]);
        assert_eq!(outs.values, vec![1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn malformed_line_reports_number() {
        match parse_edge_list("1 2\nx 3\n".as_bytes(), Duplicates::Dedup) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_edge_list("1\n".as_bytes(), Duplicates::Dedup), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("1 2 3\n".as_bytes(), Duplicates::Dedup), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_graph_is_parameter_error() {
        assert!(matches!(parse_edge_list("# nothing\n\n".as_bytes(), Duplicates::Dedup), Err(Error::Parameter(_))));
    }

    #[test]
    fn duplicate_policy() {
        let text = "1 2\n1 2\n2 1\n";
        assert_eq!(parse_edge_list(text.as_bytes(), Duplicates::Dedup).unwrap().graph.edge_count(), 2);
        let kept = parse_edge_list(text.as_bytes(), Duplicates::Keep).unwrap().graph;
        assert_eq!(kept.edge_count(), 3);
        assert_eq!(kept.out_degree(0), 2);
        assert_eq!(kept.in_degree(1), 2);
    }

    #[test]
    fn three_cycle_is_flat() {
        let g = parse("1 2\n2 3\n3 1\n").graph;
        for c in [0.1, 0.5, 0.85, 0.99] {
            let pr = pagerank(&g, &PageRankConfig::new(c)).unwrap();
            assert!(pr.converged);
            for v in &pr.values {
                assert_relative_eq!(*v, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn star_matches_hand_solution() {
        // Nodes (dense) 0..4 = ids 1..4. Edges 1→0, 2→0, 3→0, 0→1.
        // No dangling nodes. x0 = c(x1 + x2 + x3) + b, x1 = c x0 + b,
        // x2 = x3 = b, with b = 1 − c.
        let g = parse("2 1\n3 1\n4 1\n1 2\n").graph;
        let c = 0.85;
        let b = 1.0 - c;
        let x0 = (b + c * b + 2.0 * c * b) / (1.0 - c * c);
        let x1 = c * x0 + b;
        let mut cfg = PageRankConfig::new(c);
        cfg.tol = 1e-15;
        let pr = pagerank(&g, &cfg).unwrap();
        let expected = [x0, x1, b, b];
        for (got, want) in pr.values.iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }
        assert_relative_eq!(pr.mean(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dangling_redistribution_keeps_mean_one() {
        // node 2 is dangling
        let g = DirectedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], Duplicates::Dedup).unwrap();
        let pr = pagerank(&g, &PageRankConfig::new(0.85)).unwrap();
        assert_relative_eq!(pr.mean(), 1.0, epsilon = 1e-12);
        assert!(pr.values.iter().all(|&v| v >= 0.15));
        let mut drop = PageRankConfig::new(0.85);
        drop.dangling = Dangling::Drop;
        let pr = pagerank(&g, &drop).unwrap();
        assert!(pr.mean() < 1.0);
        assert!(pr.values.iter().all(|&v| v >= 0.15));
    }

    #[test]
    fn max_iter_flags_non_convergence() {
        let g = parse("1 2\n2 3\n3 1\n1 3\n").graph;
        let mut cfg = PageRankConfig::new(0.99);
        cfg.max_iter = 2;
        let pr = pagerank(&g, &cfg).unwrap();
        assert!(!pr.converged);
        assert_eq!(pr.iterations, 2);
    }

    #[test]
    fn bad_damping() {
        let g = parse("1 2\n").graph;
        assert!(pagerank(&g, &PageRankConfig::new(0.0)).is_err());
        assert!(pagerank(&g, &PageRankConfig::new(1.0)).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let p = parse("5 7\n7 9\n9 5\n5 9\n");
        let mut out = Vec::new();
        p.graph.write_edge_list(&mut out).unwrap();
        let back = parse_edge_list(out.as_slice(), Duplicates::Keep).unwrap();
        assert_eq!(back.graph, p.graph);
    }

    #[test]
    fn pagerank_text_output() {
        let p = parse("1 2\n2 1\n");
        let pr = pagerank(&p.graph, &PageRankConfig::new(0.5)).unwrap();
        let mut out = Vec::new();
        pr.write_text(&p.ids, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# c: 0.5\n# iterations: 1\n# residual: 0\n# converged: true\n1 1\n2 1\n"), "{text}");
    }
}
