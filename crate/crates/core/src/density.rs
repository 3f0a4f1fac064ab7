//! Exact density invariants of graphs.
//!
//! * `d2(G) = (e - 1) / (v - 2)` for `v >= 3`,
//! * `m2(G)`: the maximum of `d2` over subgraphs with at least 3 vertices,
//! * `m(G)`: the maximum of `e / v` over nonempty subgraphs,
//! * `ar(G)`: the maximum of `e / (v - 1)` over subgraphs with `v >= 2`.
//!
//! All maxima are taken over induced subgraphs: for a fixed vertex set the
//! induced subgraph has the most edges and so the largest value. Small graphs
//! are searched exhaustively over vertex subsets; `m` and `ar` of larger
//! graphs come from a max-closure (min-cut) computation driven by Dinkelbach
//! iteration, which stays exact because every candidate ratio is rational.

use serde::{Deserialize, Serialize};

use crate::error::{HgameError, Result};
use crate::flow::max_closure;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::matching::max_bipartite_matching;
use crate::rational::{self, ceil, Ratio};

/// Largest vertex count searched exhaustively by default.
pub const EXHAUSTIVE_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exhaustive,
    Flow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub m2: Option<Vec<Vertex>>,
    pub m: Vec<Vertex>,
    pub ar: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub vertices: usize,
    pub edges: usize,
    #[serde(with = "rational::opt_as_str")]
    pub d2: Option<Ratio>,
    /// `None` when `v < 3` or the graph is too large for exhaustive search.
    #[serde(with = "rational::opt_as_str")]
    pub m2: Option<Ratio>,
    #[serde(with = "rational::as_str")]
    pub m: Ratio,
    #[serde(with = "rational::as_str")]
    pub ar: Ratio,
    pub is_2_balanced: Option<bool>,
    pub is_strictly_2_balanced: Option<bool>,
    pub witnesses: Witnesses,
    pub backend: Backend,
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertex_count()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn mask_vertices(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn induced_edges(adj: &[u32], mask: u32) -> i64 {
    let twice: u32 = mask_vertices(mask)
        .iter()
        .map(|&v| (adj[v] & mask).count_ones())
        .sum();
    i64::from(twice / 2)
}

/// Keeps the better of two (value, vertex list) candidates; ties go to the
/// lexicographically smaller vertex list.
fn better(best: &mut Option<(Ratio, Vec<Vertex>)>, value: Ratio, verts: Vec<Vertex>) {
    let replace = match best {
        None => true,
        Some((b, bv)) => value > *b || (value == *b && verts < *bv),
    };
    if replace {
        *best = Some((value, verts));
    }
}

struct Exhaustive {
    m2: Option<(Ratio, Vec<Vertex>)>,
    m: (Ratio, Vec<Vertex>),
    ar: (Ratio, Vec<Vertex>),
    strict: Option<bool>,
}

fn exhaustive(g: &Graph) -> Exhaustive {
    let n = g.vertex_count();
    assert!(n <= 31, "exhaustive density search is limited to 31 vertices");
    let adj = adjacency_masks(g);
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let (mut m2, mut m, mut ar) = (None, None, None);
    let d2_full = (n >= 3).then(|| Ratio::new(g.edge_count() as i64 - 1, n as i64 - 2));
    let mut strict = d2_full.map(|_| true);
    for mask in 1..=full {
        let v = i64::from(mask.count_ones());
        let e = induced_edges(&adj, mask);
        let verts = mask_vertices(mask);
        better(&mut m, Ratio::new(e, v), verts.clone());
        if v >= 2 {
            better(&mut ar, Ratio::new(e, v - 1), verts.clone());
        }
        if v >= 3 {
            let d2 = Ratio::new(e - 1, v - 2);
            if mask != full && Some(d2) >= d2_full {
                strict = Some(false);
            }
            better(&mut m2, d2, verts);
        }
    }
    let zero = || (Ratio::from_integer(0), Vec::new());
    Exhaustive {
        m2,
        m: m.unwrap_or_else(zero),
        ar: ar.unwrap_or_else(|| (Ratio::from_integer(0), (0..n).collect())),
        strict,
    }
}

/// Dinkelbach iteration for `max e(S) / |S|`.
fn max_density_flow(g: &Graph) -> (Ratio, Vec<Vertex>) {
    let n = g.vertex_count();
    if n == 0 {
        return (Ratio::from_integer(0), Vec::new());
    }
    if g.edge_count() == 0 {
        return (Ratio::from_integer(0), vec![0]);
    }
    let mut best = (
        Ratio::new(g.edge_count() as i64, n as i64),
        (0..n).collect::<Vec<_>>(),
    );
    loop {
        let (a, b) = (*best.0.numer(), *best.0.denom());
        let (value, set) = max_closure(n, g.edges(), b, a, None);
        if value <= 0 || set.is_empty() {
            return best;
        }
        let (sub, _) = g.induced(&set);
        best = (Ratio::new(sub.edge_count() as i64, set.len() as i64), set);
    }
}

/// Dinkelbach iteration for `max e(S) / (|S| - 1)`, one forced vertex at a
/// time. A maximiser can be taken connected, so each vertex is checked only
/// inside its own component.
fn arboricity_flow(g: &Graph) -> (Ratio, Vec<Vertex>) {
    let n = g.vertex_count();
    if n < 2 {
        return (Ratio::from_integer(0), (0..n).collect());
    }
    let mut best = (
        Ratio::new(g.edge_count() as i64, n as i64 - 1),
        (0..n).collect::<Vec<_>>(),
    );
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let (sub, _) = g.induced(&comp);
        let candidate = Ratio::new(sub.edge_count() as i64, comp.len() as i64 - 1);
        if candidate > best.0 {
            best = (candidate, comp.clone());
        }
    }
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let (sub, _) = g.induced(&comp);
        for root in 0..comp.len() {
            loop {
                let (a, b) = (*best.0.numer(), *best.0.denom());
                let (value, set) = max_closure(sub.vertex_count(), sub.edges(), b, a, Some(root));
                // value = b e(S) - a |S|; improvement iff it beats -a.
                if value + a <= 0 || set.len() < 2 {
                    break;
                }
                let verts: Vec<Vertex> = set.iter().map(|&i| comp[i]).collect();
                let (inner, _) = g.induced(&verts);
                best = (
                    Ratio::new(inner.edge_count() as i64, verts.len() as i64 - 1),
                    verts,
                );
            }
        }
    }
    best
}

/// `m(G)` with a maximising vertex set.
pub fn max_density(g: &Graph) -> (Ratio, Vec<Vertex>) {
    if g.vertex_count() <= EXHAUSTIVE_LIMIT {
        exhaustive(g).m
    } else {
        max_density_flow(g)
    }
}

/// `ar(G)` (fractional, Nash-Williams form) with a maximising vertex set.
pub fn fractional_arboricity(g: &Graph) -> (Ratio, Vec<Vertex>) {
    if g.vertex_count() <= EXHAUSTIVE_LIMIT {
        exhaustive(g).ar
    } else {
        arboricity_flow(g)
    }
}

/// `d2(G)`; requires at least three vertices.
pub fn d2(g: &Graph) -> Result<Ratio> {
    let v = g.vertex_count();
    if v < 3 {
        return Err(HgameError::Precondition(format!("d2 needs at least 3 vertices, got {v}")));
    }
    Ok(Ratio::new(g.edge_count() as i64 - 1, v as i64 - 2))
}

/// `m2(G)` with a maximising vertex set; exhaustive only.
pub fn two_density(g: &Graph) -> Result<(Ratio, Vec<Vertex>)> {
    let v = g.vertex_count();
    if v < 3 {
        return Err(HgameError::Precondition(format!("m2 needs at least 3 vertices, got {v}")));
    }
    if v > EXHAUSTIVE_LIMIT {
        return Err(HgameError::Capability(format!(
            "m2 is computed by exhaustive search, limited to {EXHAUSTIVE_LIMIT} vertices (got {v})"
        )));
    }
    Ok(exhaustive(g).m2.expect("v >= 3"))
}

/// True iff `d2(H) = m2(H)` and every proper subgraph on at least three
/// vertices has strictly smaller `d2`.
pub fn is_strictly_2_balanced(h: &Graph) -> Result<bool> {
    two_density(h)?;
    Ok(exhaustive(h).strict.expect("v >= 3"))
}

pub fn density_report(g: &Graph) -> Result<DensityReport> {
    let v = g.vertex_count();
    let d2 = d2(g).ok();
    if v <= EXHAUSTIVE_LIMIT {
        let ex = exhaustive(g);
        let m2 = ex.m2.clone();
        Ok(DensityReport {
            vertices: v,
            edges: g.edge_count(),
            d2,
            m2: m2.as_ref().map(|x| x.0),
            m: ex.m.0,
            ar: ex.ar.0,
            is_2_balanced: m2.as_ref().map(|x| Some(x.0) == d2),
            is_strictly_2_balanced: ex.strict,
            witnesses: Witnesses {
                m2: m2.map(|x| x.1),
                m: ex.m.1,
                ar: ex.ar.1,
            },
            backend: Backend::Exhaustive,
        })
    } else {
        let m = max_density_flow(g);
        let ar = arboricity_flow(g);
        Ok(DensityReport {
            vertices: v,
            edges: g.edge_count(),
            d2,
            m2: None,
            m: m.0,
            ar: ar.0,
            is_2_balanced: None,
            is_strictly_2_balanced: None,
            witnesses: Witnesses {
                m2: None,
                m: m.1,
                ar: ar.1,
            },
            backend: Backend::Flow,
        })
    }
}

/// Exposes the flow backend directly, for cross-checks against the
/// exhaustive search.
pub fn flow_max_density(g: &Graph) -> (Ratio, Vec<Vertex>) {
    max_density_flow(g)
}

pub fn flow_fractional_arboricity(g: &Graph) -> (Ratio, Vec<Vertex>) {
    arboricity_flow(g)
}

/// A partition of the edge set into acyclic parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestDecomposition {
    pub forests: Vec<Vec<EdgeId>>,
}

impl ForestDecomposition {
    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }
}

struct Forests {
    /// Per forest, per vertex: incident (neighbour, edge) pairs.
    adj: Vec<Vec<Vec<(Vertex, EdgeId)>>>,
    owner: Vec<Option<usize>>,
    n: usize,
}

impl Forests {
    fn add(&mut self, g: &Graph, e: EdgeId, f: usize) {
        let (u, v) = g.endpoints(e);
        self.adj[f][u].push((v, e));
        self.adj[f][v].push((u, e));
        self.owner[e] = Some(f);
    }

    fn remove(&mut self, g: &Graph, e: EdgeId) {
        if let Some(f) = self.owner[e].take() {
            let (u, v) = g.endpoints(e);
            self.adj[f][u].retain(|&(_, x)| x != e);
            self.adj[f][v].retain(|&(_, x)| x != e);
        }
    }

    /// Edges on the tree path from `u` to `v` inside forest `f`.
    fn path(&self, f: usize, u: Vertex, v: Vertex) -> Option<Vec<EdgeId>> {
        let mut via = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if x == v {
                let mut out = Vec::new();
                let mut cur = v;
                while let Some((prev, e)) = via[cur] {
                    out.push(e);
                    cur = prev;
                }
                return Some(out);
            }
            for &(y, e) in &self.adj[f][x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
        None
    }
}

/// Partitions `E(G)` into the minimum number of forests, which is
/// `ceil(ar(G))` by Nash-Williams.
///
/// Edges are inserted one at a time with matroid-partition augmenting paths:
/// a breadth-first search over "edge `x` enters forest `i`, displacing edge
/// `f` on the cycle it closes". When no augmenting path exists the current
/// edge set needs one more forest, so a new one is opened.
pub fn forest_decomposition(g: &Graph) -> Result<ForestDecomposition> {
    let mut fs = Forests {
        adj: Vec::new(),
        owner: vec![None; g.edge_count()],
        n: g.vertex_count(),
    };
    for e in 0..g.edge_count() {
        if !insert_edge(g, &mut fs, e) {
            fs.adj.push(vec![Vec::new(); g.vertex_count()]);
            let last = fs.adj.len() - 1;
            fs.add(g, e, last);
        }
    }
    let mut forests = vec![Vec::new(); fs.adj.len()];
    for (e, owner) in fs.owner.iter().enumerate() {
        forests[owner.expect("every edge placed")].push(e);
    }
    let decomposition = ForestDecomposition { forests };
    for part in &decomposition.forests {
        if !is_acyclic(g, part) {
            return Err(HgameError::Internal("forest decomposition produced a cycle".into()));
        }
    }
    Ok(decomposition)
}

fn insert_edge(g: &Graph, fs: &mut Forests, e: EdgeId) -> bool {
    let k = fs.adj.len();
    let mut parent: Vec<Option<EdgeId>> = vec![None; g.edge_count()];
    let mut visited = vec![false; g.edge_count()];
    visited[e] = true;
    let mut queue = std::collections::VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        let (u, v) = g.endpoints(x);
        for i in 0..k {
            if fs.owner[x] == Some(i) {
                continue;
            }
            match fs.path(i, u, v) {
                None => {
                    // Shift along the exchange path back to `e`.
                    let (mut cur, mut target) = (x, i);
                    loop {
                        let old = fs.owner[cur];
                        fs.remove(g, cur);
                        fs.add(g, cur, target);
                        match parent[cur] {
                            None => return true,
                            Some(p) => {
                                target = old.expect("displaced edge had a forest");
                                cur = p;
                            }
                        }
                    }
                }
                Some(cycle) => {
                    for f in cycle {
                        if !visited[f] {
                            visited[f] = true;
                            parent[f] = Some(x);
                            queue.push_back(f);
                        }
                    }
                }
            }
        }
    }
    false
}

/// Union-find acyclicity test for an edge subset.
pub fn is_acyclic(g: &Graph, edges: &[EdgeId]) -> bool {
    let mut uf = crate::unionfind::UnionFind::new(g.vertex_count());
    edges.iter().all(|&e| {
        let (u, v) = g.endpoints(e);
        uf.union(u, v)
    })
}

/// Direction of every edge as `(tail, head)`, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub arcs: Vec<(Vertex, Vertex)>,
    /// The guaranteed bound `ceil(m(G))`.
    pub bound: usize,
}

impl Orientation {
    pub fn out_degrees(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for &(tail, _) in &self.arcs {
            out[tail] += 1;
        }
        out
    }

    pub fn tail(&self, e: EdgeId) -> Vertex {
        self.arcs[e].0
    }
}

/// Orients `G` with every out-degree at most `k = ceil(m(G))`.
///
/// Bipartite construction: one side holds the edges, the other `k` copies of
/// every vertex, and an edge is joined to all copies of its two endpoints.
/// Hall's condition holds on the edge side because every vertex set `S`
/// spans at most `m(G) |S| <= k |S|` edges, so a maximum matching saturates
/// the edges. An edge matched to a copy of `v` is oriented out of `v`.
pub fn orient_bounded_outdegree(g: &Graph) -> Result<Orientation> {
    let (m, _) = max_density(g);
    let k = ceil(m) as usize;
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            (0..k)
                .map(|c| u * k + c)
                .chain((0..k).map(|c| v * k + c))
                .collect()
        })
        .collect();
    let matching = max_bipartite_matching(&adj, n * k);
    let mut arcs = Vec::with_capacity(g.edge_count());
    for (e, slot) in matching.into_iter().enumerate() {
        let slot = slot.ok_or_else(|| {
            HgameError::Internal(format!("edge {e} left unmatched with {k} copies per vertex"))
        })?;
        let (u, v) = g.endpoints(e);
        let tail = slot / k;
        arcs.push(if tail == u { (u, v) } else { (v, u) });
    }
    Ok(Orientation { arcs, bound: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_sample, SampleSpec};
    use crate::rational::ratio;

    #[test]
    fn triangle_two_density() {
        assert_eq!(two_density(&Graph::complete(3)).unwrap().0, ratio(2, 1));
    }

    #[test]
    fn c4_values() {
        let r = density_report(&Graph::cycle(4)).unwrap();
        assert_eq!(r.ar, ratio(4, 3));
        assert_eq!(r.m2, Some(ratio(3, 2)));
        assert_eq!(r.m, ratio(1, 1));
        assert_eq!(r.is_strictly_2_balanced, Some(true));
    }

    #[test]
    fn k4_values() {
        let r = density_report(&Graph::complete(4)).unwrap();
        assert_eq!(r.d2, Some(ratio(5, 2)));
        assert_eq!(r.m2, Some(ratio(5, 2)));
        assert_eq!(r.m, ratio(3, 2));
        assert_eq!(r.ar, ratio(2, 1));
        assert_eq!(r.is_2_balanced, Some(true));
        assert_eq!(r.is_strictly_2_balanced, Some(true));
        assert_eq!(r.witnesses.m, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k5_minus_density_is_nine_fifths() {
        let (m, _) = max_density(&Graph::k5_minus());
        assert_eq!(m, ratio(9, 5));
    }

    #[test]
    fn k4_with_pendant_is_not_strictly_balanced() {
        let mut edges = Graph::complete(4).edges().to_vec();
        edges.push((3, 4));
        let g = Graph::new(5, edges).unwrap();
        assert!(!is_strictly_2_balanced(&g).unwrap());
        assert!(is_strictly_2_balanced(&Graph::complete(4)).unwrap());
        assert!(is_strictly_2_balanced(&Graph::cycle(4)).unwrap());
    }

    #[test]
    fn strict_balance_needs_three_vertices() {
        assert!(is_strictly_2_balanced(&Graph::path(2)).is_err());
    }

    #[test]
    fn witness_tie_break_is_lexicographic() {
        // Two disjoint triangles: both maximise m; the first one wins.
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = density_report(&g).unwrap();
        assert_eq!(r.witnesses.m, vec![0, 1, 2]);
        assert_eq!(r.witnesses.m2, Some(vec![0, 1, 2]));
    }

    #[test]
    fn large_graphs_use_flow_backend() {
        let g = gnp_sample(&SampleSpec::new(60, 0.1, 3).unwrap());
        let r = density_report(&g).unwrap();
        assert_eq!(r.backend, Backend::Flow);
        assert!(r.m2.is_none());
        let (sub, _) = g.induced(&r.witnesses.m);
        assert_eq!(ratio(sub.edge_count() as i64, r.witnesses.m.len() as i64), r.m);
        let (sub, _) = g.induced(&r.witnesses.ar);
        assert_eq!(ratio(sub.edge_count() as i64, r.witnesses.ar.len() as i64 - 1), r.ar);
        assert!(matches!(two_density(&g), Err(HgameError::Capability(_))));
    }

    #[test]
    fn flow_matches_exhaustive_on_random_graphs() {
        for seed in 0..60 {
            let n = 3 + (seed as usize % 10);
            let p = 0.15 + 0.1 * (seed % 7) as f64;
            let g = gnp_sample(&SampleSpec::new(n, p, seed).unwrap());
            let ex = exhaustive(&g);
            assert_eq!(flow_max_density(&g).0, ex.m.0, "m, seed {seed}");
            assert_eq!(flow_fractional_arboricity(&g).0, ex.ar.0, "ar, seed {seed}");
        }
    }

    #[test]
    fn forest_decomposition_examples() {
        let tree = Graph::star(6);
        assert_eq!(forest_decomposition(&tree).unwrap().len(), 1);
        let k4 = forest_decomposition(&Graph::complete(4)).unwrap();
        assert_eq!(k4.len(), 2);
        let c4 = forest_decomposition(&Graph::cycle(4)).unwrap();
        assert_eq!(c4.len(), 2);
        assert_eq!(forest_decomposition(&Graph::empty(3)).unwrap().len(), 0);
    }

    #[test]
    fn forest_count_is_ceiling_of_arboricity() {
        for seed in 0..80 {
            let n = 4 + (seed as usize % 11);
            let g = gnp_sample(&SampleSpec::new(n, 0.2 + 0.08 * (seed % 9) as f64, seed).unwrap());
            let fd = forest_decomposition(&g).unwrap();
            let (ar, _) = fractional_arboricity(&g);
            assert_eq!(fd.len() as i64, ceil(ar), "seed {seed}");
            let mut all: Vec<usize> = fd.forests.concat();
            all.sort_unstable();
            assert_eq!(all, (0..g.edge_count()).collect::<Vec<_>>());
            assert!(fd.forests.iter().all(|f| is_acyclic(&g, f)));
        }
    }

    #[test]
    fn cycle_orientation_is_a_directed_cycle() {
        let g = Graph::cycle(7);
        let o = orient_bounded_outdegree(&g).unwrap();
        assert_eq!(o.bound, 1);
        assert!(o.out_degrees(7).iter().all(|&d| d == 1));
    }

    #[test]
    fn star_and_k4_orientations() {
        let star = Graph::star(5);
        let o = orient_bounded_outdegree(&star).unwrap();
        assert_eq!(o.bound, 1);
        assert!(o.out_degrees(6).iter().all(|&d| d <= 1));
        let k4 = orient_bounded_outdegree(&Graph::complete(4)).unwrap();
        assert_eq!(k4.bound, 2);
        assert!(k4.out_degrees(4).iter().all(|&d| d <= 2));
        for (e, &(t, h)) in k4.arcs.iter().enumerate() {
            let (u, v) = Graph::complete(4).endpoints(e);
            assert!((t, h) == (u, v) || (t, h) == (v, u));
        }
    }
}
