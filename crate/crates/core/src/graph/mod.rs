//! Undirected agent-network graphs: named catalog, random generators
//! (Erdős–Rényi, Barabási–Albert) and Laplacian construction.

mod catalog;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{sym_eigvals, Matrix};

/// ER generation resamples the whole graph until it is connected, up to this
/// many attempts.
pub const ER_RESAMPLE_LIMIT: usize = 1000;

/// Undirected simple graph on nodes `0..node_count`.
///
/// Edges are stored once, normalized as `(min, max)` pairs in sorted order;
/// adjacency lists are precomputed with neighbors ascending, which pins the
/// floating-point summation order of every consensus loop built on top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and normalizes an edge list. Rejects self-loops, duplicate
    /// edges and endpoints outside `0..node_count`. Connectivity is NOT
    /// required here; scenario construction enforces it.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Config("graph needs at least one node".to_string()));
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Config(format!("self-loop at node {u}")));
            }
            if u >= node_count || v >= node_count {
                return Err(Error::Config(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Config(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { node_count, edges, adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized `(min, max)` edge pairs, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `k`, ascending.
    pub fn neighbors(&self, k: usize) -> &[usize] {
        &self.adjacency[k]
    }

    pub fn degree(&self, k: usize) -> usize {
        self.adjacency[k].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True iff a traversal from node 0 reaches every node.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.node_count
    }

    /// Graph Laplacian `L = D - A` (degree matrix minus adjacency matrix).
    pub fn laplacian(&self) -> Matrix {
        let n = self.node_count;
        let mut l = Matrix::zeros(n, n);
        for k in 0..n {
            l.set(k, k, self.degree(k) as f64);
        }
        for &(u, v) in &self.edges {
            l.set(u, v, -1.0);
            l.set(v, u, -1.0);
        }
        l
    }

    /// Largest Laplacian eigenvalue.
    pub fn laplacian_lambda_max(&self) -> Result<f64> {
        let vals = sym_eigvals(&self.laplacian())?;
        Ok(*vals.last().expect("nonempty spectrum"))
    }
}

/// The named-graph catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Karate,
    KrackhardtKite,
    Chvatal,
    Pappus,
    Tutte,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 5] = [
        NamedGraph::Karate,
        NamedGraph::KrackhardtKite,
        NamedGraph::Chvatal,
        NamedGraph::Pappus,
        NamedGraph::Tutte,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGraph::Karate => "karate",
            NamedGraph::KrackhardtKite => "krackhardt_kite",
            NamedGraph::Chvatal => "chvatal",
            NamedGraph::Pappus => "pappus",
            NamedGraph::Tutte => "tutte",
        }
    }
}

impl core::str::FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "karate" => Ok(NamedGraph::Karate),
            "krackhardt_kite" => Ok(NamedGraph::KrackhardtKite),
            "chvatal" => Ok(NamedGraph::Chvatal),
            "pappus" => Ok(NamedGraph::Pappus),
            "tutte" => Ok(NamedGraph::Tutte),
            other => Err(Error::Config(format!(
                "unknown graph name '{other}' (expected one of: karate, krackhardt_kite, chvatal, pappus, tutte)"
            ))),
        }
    }
}

/// Builds a catalog graph from its embedded canonical edge list.
pub fn named_graph(name: NamedGraph) -> Graph {
    let (nodes, edges) = match name {
        NamedGraph::Karate => (catalog::KARATE_NODES, catalog::KARATE_EDGES),
        NamedGraph::KrackhardtKite => (catalog::KRACKHARDT_KITE_NODES, catalog::KRACKHARDT_KITE_EDGES),
        NamedGraph::Chvatal => (catalog::CHVATAL_NODES, catalog::CHVATAL_EDGES),
        NamedGraph::Pappus => (catalog::PAPPUS_NODES, catalog::PAPPUS_EDGES),
        NamedGraph::Tutte => (catalog::TUTTE_NODES, catalog::TUTTE_EDGES),
    };
    Graph::new(nodes, edges.iter().copied()).expect("embedded catalog data is valid")
}

/// Samples an Erdős–Rényi graph: every unordered pair is an edge
/// independently with probability `p`, resampled until connected.
///
/// Returns the graph together with the number of resamples it took.
pub fn gen_er<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> Result<(Graph, usize)> {
    if k < 2 {
        return Err(Error::Config("ER graph needs at least 2 nodes".to_string()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
    }
    for attempt in 0..ER_RESAMPLE_LIMIT {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in (u + 1)..k {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(k, edges)?;
        if g.is_connected() {
            return Ok((g, attempt));
        }
    }
    Err(Error::Generation(format!(
        "no connected ER graph with K={k}, p={p} after {ER_RESAMPLE_LIMIT} resamples"
    )))
}

/// Grows a Barabási–Albert preferential-attachment graph.
///
/// The seed component is a clique on `m_attach + 1` nodes; every further node
/// attaches to `m_attach` distinct existing nodes drawn with probability
/// proportional to current degree. Connected by construction, with a
/// deterministic edge count of `m_attach * (k - m_attach - 1) +
/// m_attach * (m_attach + 1) / 2`.
pub fn gen_ba<R: Rng + ?Sized>(k: usize, m_attach: usize, rng: &mut R) -> Result<Graph> {
    if m_attach < 1 {
        return Err(Error::Config("BA attachment count must be at least 1".to_string()));
    }
    if k <= m_attach {
        return Err(Error::Config(format!(
            "BA graph needs more nodes than the attachment count (K={k}, m={m_attach})"
        )));
    }
    let seed = m_attach + 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // each node appears in `stubs` once per unit of degree
    let mut stubs: Vec<usize> = Vec::new();
    for u in 0..seed.min(k) {
        for v in (u + 1)..seed.min(k) {
            edges.push((u, v));
            stubs.push(u);
            stubs.push(v);
        }
    }
    for new in seed..k {
        let mut targets = BTreeSet::new();
        while targets.len() < m_attach {
            let t = stubs[rng.gen_range(0..stubs.len())];
            targets.insert(t);
        }
        for &t in &targets {
            edges.push((t, new));
            stubs.push(t);
            stubs.push(new);
        }
    }
    Graph::new(k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // catalog sizes (|V|, |E|) from the standard references
    const SIZES: [(NamedGraph, usize, usize); 5] = [
        (NamedGraph::Karate, 34, 78),
        (NamedGraph::KrackhardtKite, 10, 18),
        (NamedGraph::Chvatal, 12, 24),
        (NamedGraph::Pappus, 18, 27),
        (NamedGraph::Tutte, 46, 69),
    ];

    #[test]
    fn catalog_sizes_match_references() {
        for (name, v, e) in SIZES {
            let g = named_graph(name);
            assert_eq!(g.node_count(), v, "{}", name.name());
            assert_eq!(g.edge_count(), e, "{}", name.name());
            assert!(g.is_connected(), "{} must be connected", name.name());
        }
    }

    #[test]
    fn name_round_trip() {
        for (name, _, _) in SIZES {
            assert_eq!(name.name().parse::<NamedGraph>().unwrap(), name);
        }
        assert!(matches!("petersen".parse::<NamedGraph>(), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_malformed_edge_lists() {
        assert!(matches!(Graph::new(3, [(0, 0)]), Err(Error::Config(_))));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(Error::Config(_))));
        assert!(matches!(Graph::new(3, [(0, 1), (1, 0)]), Err(Error::Config(_))));
        assert!(matches!(Graph::new(0, []), Err(Error::Config(_))));
    }

    #[test]
    fn connectivity_examples() {
        assert!(!Graph::new(2, []).unwrap().is_connected());
        assert!(!Graph::new(4, [(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::new(1, []).unwrap().is_connected());
        for (name, _, _) in SIZES {
            assert!(named_graph(name).is_connected());
        }
    }

    #[test]
    fn laplacian_two_node_path() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let l = g.laplacian();
        assert_eq!(
            (l.get(0, 0), l.get(0, 1), l.get(1, 0), l.get(1, 1)),
            (1.0, -1.0, -1.0, 1.0)
        );
    }

    #[test]
    fn laplacian_triangle_spectrum() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let vals = sym_eigvals(&g.laplacian()).unwrap();
        assert!(vals[0].abs() <= 1e-12);
        assert!((vals[1] - 3.0).abs() <= 1e-12);
        assert!((vals[2] - 3.0).abs() <= 1e-12);
        assert!((g.laplacian_lambda_max().unwrap() - 3.0).abs() <= 1e-10);
    }

    #[test]
    fn laplacian_star_lambda_max() {
        // star on 5 nodes has Laplacian spectrum {0, 1, 1, 1, 5}
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!((g.laplacian_lambda_max().unwrap() - 5.0).abs() <= 1e-10);
    }

    // frozen from an independent dense eigensolver on the embedded edge list
    const KARATE_LAMBDA_MAX: f64 = 18.136695973004414;

    #[test]
    fn karate_laplacian_cross_checked() {
        let g = named_graph(NamedGraph::Karate);
        let l = g.laplacian();
        for i in 0..34 {
            let s: f64 = (0..34).map(|j| l.get(i, j)).sum();
            assert!(s.abs() <= 1e-12, "row {i} sums to {s}");
        }
        let vals = sym_eigvals(&l).unwrap();
        assert!(vals[0].abs() <= 1e-9);
        let lmax = g.laplacian_lambda_max().unwrap();
        assert!(
            (lmax - KARATE_LAMBDA_MAX).abs() <= 1e-10 * KARATE_LAMBDA_MAX,
            "lambda_max {lmax}"
        );
    }

    fn laplacian_properties(g: &Graph) {
        let l = g.laplacian();
        assert!(l.is_symmetric(0.0));
        let n = g.node_count();
        for i in 0..n {
            let s: f64 = (0..n).map(|j| l.get(i, j)).sum();
            assert!(s.abs() <= 1e-12);
        }
        let vals = sym_eigvals(&l).unwrap();
        assert!(vals[0].abs() <= 1e-9, "smallest eigenvalue {}", vals[0]);
        if g.is_connected() && n > 1 {
            assert!(vals[1] > 1e-9, "algebraic connectivity {}", vals[1]);
        }
        let bound = 2.0 * g.max_degree() as f64;
        assert!(*vals.last().unwrap() <= bound + 1e-9);
    }

    #[test]
    fn laplacian_properties_catalog_and_generated() {
        for (name, _, _) in SIZES {
            laplacian_properties(&named_graph(name));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let (g, _) = gen_er(20, 0.3, &mut rng).unwrap();
            laplacian_properties(&g);
            let g = gen_ba(20, 3, &mut rng).unwrap();
            laplacian_properties(&g);
        }
    }

    #[test]
    fn er_p_one_is_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, resamples) = gen_er(5, 1.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert_eq!(resamples, 0);
    }

    #[test]
    fn er_p_zero_fails_generation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(gen_er(5, 0.0, &mut rng), Err(Error::Generation(_))));
    }

    #[test]
    fn er_rejects_bad_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(gen_er(1, 0.5, &mut rng), Err(Error::Config(_))));
        assert!(matches!(gen_er(5, 1.5, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn er_edge_count_matches_binomial_statistics() {
        // 1000 seeds at K=100, p=0.25: sample mean within 3 sigma of the
        // binomial mean p*K*(K-1)/2 = 1237.5
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let trials = 1000;
        let mut total = 0usize;
        for _ in 0..trials {
            let (g, _) = gen_er(100, 0.25, &mut rng).unwrap();
            assert!(g.is_connected());
            total += g.edge_count();
        }
        let mean = total as f64 / trials as f64;
        let pairs = 4950.0;
        let want = 0.25 * pairs;
        let three_sigma = 3.0 * (pairs * 0.25 * 0.75 / trials as f64).sqrt();
        assert!(
            (mean - want).abs() <= three_sigma,
            "mean {mean} outside {want} +- {three_sigma}"
        );
    }

    #[test]
    fn ba_single_new_node_completes_clique() {
        // K=4, m=3: seed clique on 4 nodes is already K4; growing from a
        // triangle by one node forced to join all three gives the same graph
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gen_ba(4, 3, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn ba_edge_count_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = gen_ba(30, 3, &mut rng).unwrap();
            // m*(K - m - 1) + clique edges of the seed component
            assert_eq!(g.edge_count(), 3 * (30 - 4) + 6);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn ba_rejects_bad_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(gen_ba(3, 3, &mut rng), Err(Error::Config(_))));
        assert!(matches!(gen_ba(10, 0, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn ba_degree_distribution_is_heavy_tailed() {
        // max degree > 2x mean degree in at least 95 of 100 seeds
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut hits = 0;
        for _ in 0..100 {
            let g = gen_ba(200, 3, &mut rng).unwrap();
            let mean = 2.0 * g.edge_count() as f64 / 200.0;
            if g.max_degree() as f64 > 2.0 * mean {
                hits += 1;
            }
        }
        assert!(hits >= 95, "heavy tail in only {hits}/100 seeds");
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let (a, _) = gen_er(30, 0.2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let (b, _) = gen_er(30, 0.2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let a = gen_ba(30, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = gen_ba(30, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
