//! Simple undirected graphs with stable edge ids.
//!
//! A [`Graph`] is immutable once built. Every edge `{u, v}` is stored with
//! `u < v` and carries a dense [`EdgeId`] in `0..edge_count()`; ids follow the
//! order in which edges were supplied. Adjacency lists are sorted by neighbour
//! so edge lookup is a binary search.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HgameError, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

/// Wire form: `{"n": int, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = HgameError;

    fn try_from(value: GraphJson) -> Result<Self> {
        Graph::new(value.n, value.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range
    /// endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        let mut adj: Vec<Vec<(Vertex, EdgeId)>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(HgameError::InvalidInput(format!(
                    "edge {{{a}, {b}}} has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(HgameError::InvalidInput(format!("loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            let id = list.len();
            list.push((u, v));
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for (v, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(HgameError::InvalidInput(format!(
                    "parallel edge {{{}, {}}}",
                    v.min(w[0].0),
                    v.max(w[0].0)
                )));
            }
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, std::iter::empty()).expect("empty graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is valid")
    }

    /// `K_5` minus the edge `{3, 4}`.
    pub fn k5_minus() -> Self {
        let edges = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .filter(|&e| e != (3, 4));
        Graph::new(5, edges).expect("K5 minus an edge is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// Neighbours of `v` with the connecting edge ids, sorted by neighbour.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Subgraph induced by `vertices`, relabelled to `0..k` in the given
    /// order. Returns the subgraph and, for every new edge id, the parent id.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<EdgeId>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut parent_ids = Vec::new();
        let mut edges = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
                parent_ids.push(id);
            }
        }
        let g = Graph::new(vertices.len(), edges).expect("induced subgraph is valid");
        (g, parent_ids)
    }

    /// Spanning subgraph keeping the listed edges (in the given order) and all
    /// vertices. Local edge `i` corresponds to `ids[i]`.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Graph {
        Graph::new(self.n, ids.iter().map(|&e| self.edges[e])).expect("edge subgraph is valid")
    }

    /// Subgraph on the given edges with isolated vertices dropped. Returns the
    /// graph together with the local-to-parent vertex map.
    pub fn compact_edge_subgraph(&self, ids: &[EdgeId]) -> (Graph, Vec<Vertex>) {
        let touched: BTreeSet<Vertex> = ids
            .iter()
            .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
            .collect();
        let vmap: Vec<Vertex> = touched.into_iter().collect();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vmap.iter().enumerate() {
            local[v] = i;
        }
        let g = Graph::new(
            vmap.len(),
            ids.iter().map(|&e| (local[self.edges[e].0], local[self.edges[e].1])),
        )
        .expect("compacted subgraph is valid");
        (g, vmap)
    }

    /// Graph with one extra edge appended (id = old edge count).
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Parses the edge-list text format: one `u v` pair per line, 0-based,
    /// blank lines and `#` comments ignored. The vertex count is one more
    /// than the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut pairs = Vec::new();
        let mut n = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<Vertex> {
                let tok = parts.next().ok_or_else(|| HgameError::Parse {
                    line: lineno + 1,
                    msg: "expected two vertex indices".into(),
                })?;
                tok.parse().map_err(|_| HgameError::Parse {
                    line: lineno + 1,
                    msg: format!("`{tok}` is not a vertex index"),
                })
            };
            let u = next()?;
            let v = next()?;
            if parts.next().is_some() {
                return Err(HgameError::Parse {
                    line: lineno + 1,
                    msg: "trailing tokens after edge".into(),
                });
            }
            n = n.max(u + 1).max(v + 1);
            pairs.push((u, v));
        }
        Graph::new(n, pairs)
    }

    /// Parses either the edge-list format or the JSON form, sniffing on the
    /// first non-blank character.
    pub fn parse_any(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            Graph::parse_edge_list(text)
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parameters of a `G(n, p)` draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(HgameError::InvalidInput(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(SampleSpec { n, p, seed })
    }
}

/// Samples `G(n, p)`: pairs are visited in lexicographic order and each is
/// kept independently with probability `p`. Identical specs give identical
/// graphs, edge ids included.
///
/// Panics if `p` is outside `[0, 1]`; use [`SampleSpec::new`] to validate.
pub fn gnp_sample(spec: &SampleSpec) -> Graph {
    assert!((0.0..=1.0).contains(&spec.p), "edge probability outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut edges = Vec::new();
    if spec.p > 0.0 {
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < spec.p {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::new(n, edges).expect("sampled graph is simple")
}

/// `N_G(A)`: vertices outside `A` with a neighbour in `A`, sorted.
pub fn neighborhood(g: &Graph, set: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut in_set = vec![false; g.vertex_count()];
    for &a in set {
        if a >= g.vertex_count() {
            return Err(HgameError::InvalidInput(format!(
                "vertex {a} outside 0..{}",
                g.vertex_count()
            )));
        }
        in_set[a] = true;
    }
    let mut hit = vec![false; g.vertex_count()];
    for &a in set {
        for w in g.neighbors(a) {
            if !in_set[w] {
                hit[w] = true;
            }
        }
    }
    Ok((0..g.vertex_count()).filter(|&v| hit[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_loops_parallel_edges_and_bad_endpoints() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edge_ids_follow_input_order() {
        let g = Graph::new(4, [(2, 1), (0, 3)]).unwrap();
        assert_eq!(g.endpoints(0), (1, 2));
        assert_eq!(g.edge_between(3, 0), Some(1));
        assert_eq!(g.edge_between(0, 1), None);
    }

    #[test]
    fn gnp_extremes() {
        let g = gnp_sample(&SampleSpec::new(5, 0.0, 1).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 0));
        let g = gnp_sample(&SampleSpec::new(4, 1.0, 1).unwrap());
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        let g = gnp_sample(&SampleSpec::new(1000, 0.01, 7).unwrap());
        let mean = 499_500.0 * 0.01;
        let sd = (499_500.0f64 * 0.01 * 0.99).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sd);
    }

    #[test]
    fn sample_spec_validates_probability() {
        assert!(SampleSpec::new(3, 1.5, 0).is_err());
        assert!(SampleSpec::new(3, -0.1, 0).is_err());
    }

    #[test]
    fn neighborhood_examples() {
        assert_eq!(neighborhood(&Graph::complete(3), &[0]).unwrap(), vec![1, 2]);
        assert!(neighborhood(&Graph::cycle(5), &[]).unwrap().is_empty());
        assert_eq!(neighborhood(&Graph::path(4), &[1, 2]).unwrap(), vec![0, 3]);
        assert!(neighborhood(&Graph::path(4), &[4]).is_err());
    }

    #[test]
    fn parses_edge_list_with_comments() {
        let g = Graph::parse_edge_list("# triangle\n0 1\n\n1 2 # second\n2 0\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertex_count(), 3);
        assert!(matches!(
            Graph::parse_edge_list("0 1\n1 x\n"),
            Err(HgameError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::k5_minus();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with("{\"n\":5,\"edges\":[[0,1]"));
        assert_eq!(Graph::parse_any(&text).unwrap(), g);
    }

    proptest! {
        #[test]
        fn neighborhood_is_disjoint_from_input(seed in 0u64..500, mask in 0u32..(1 << 12)) {
            let g = gnp_sample(&SampleSpec::new(12, 0.3, seed).unwrap());
            let set: Vec<usize> = (0..12).filter(|i| mask >> i & 1 == 1).collect();
            let nb = neighborhood(&g, &set).unwrap();
            prop_assert!(nb.iter().all(|v| !set.contains(v)));
        }

        #[test]
        fn sampling_is_reproducible(seed in any::<u64>(), n in 0usize..40, p in 0.0f64..1.0) {
            let spec = SampleSpec::new(n, p, seed).unwrap();
            prop_assert_eq!(gnp_sample(&spec).to_edge_list(), gnp_sample(&spec).to_edge_list());
        }
    }
}
