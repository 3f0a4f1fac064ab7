//! H-core preprocessing, the decomposition of the core into minimal
//! H-closed components, the composite Breaker strategy built on top of them,
//! and the growth process that regenerates a component copy by copy.
//!
//! An edge is free, open or closed when it lies in zero, one or at least two
//! H-copies of the current graph. A copy is unproblematic when it has at
//! least two open edges. Preprocessing repeatedly takes an unproblematic
//! copy, remembers two of its open edges as a Breaker pair and deletes all
//! of its open edges; afterwards every free edge is deleted. What remains is
//! the H-core, which does not depend on the order of removals.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::breaker::{deterministic_router, PairResponder, PairingPlan, Responder, RoutedBreaker, Router, SolverResponder};
use crate::copies::{enumerate_copies, HCopy};
use crate::error::{HgameError, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Free,
    Open,
    Closed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub classes: Vec<EdgeClass>,
    pub copies: Vec<HCopy>,
    /// Per copy: at most one open edge.
    pub problematic: Vec<bool>,
}

fn class_of(count: usize) -> EdgeClass {
    match count {
        0 => EdgeClass::Free,
        1 => EdgeClass::Open,
        _ => EdgeClass::Closed,
    }
}

pub fn classify_edges(g: &Graph, h: &Graph) -> Classification {
    let copies = enumerate_copies(g, h);
    let mut count = vec![0usize; g.edge_count()];
    for c in &copies {
        for &e in &c.edge_ids {
            count[e] += 1;
        }
    }
    let problematic = copies
        .iter()
        .map(|c| c.edge_ids.iter().filter(|&&e| count[e] == 1).count() <= 1)
        .collect();
    Classification {
        classes: count.into_iter().map(class_of).collect(),
        copies,
        problematic,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    /// Edge ids of the unproblematic copy removed at this step.
    pub copy: Vec<EdgeId>,
    pub pair: (EdgeId, EdgeId),
    pub removed_open: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HCoreResult {
    pub core_edges: Vec<EdgeId>,
    /// `S_1, ..., S_k` in removal order.
    pub pairs: Vec<(EdgeId, EdgeId)>,
    pub removed_open: Vec<EdgeId>,
    pub removed_free: Vec<EdgeId>,
    pub iterations: Vec<RemovalStep>,
    pub copies_total: usize,
}

impl HCoreResult {
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairing_plan(&self) -> PairingPlan {
        PairingPlan::new(self.pairs.clone()).expect("removal pairs are disjoint")
    }
}

/// Runs preprocessing with the unproblematic copies taken in an order fixed
/// by `order_seed`.
///
/// Copy-membership counts and per-copy open-edge counts are maintained under
/// deletion instead of re-enumerating copies.
pub fn preprocess(g: &Graph, h: &Graph, order_seed: u64) -> HCoreResult {
    preprocess_with_copies(g, enumerate_copies(g, h), order_seed)
}

/// As [`preprocess`] with the copies of `h` in `g` supplied.
pub fn preprocess_with_copies(g: &Graph, copies: Vec<HCopy>, order_seed: u64) -> HCoreResult {
    let m = g.edge_count();
    let mut rank: Vec<usize> = (0..copies.len()).collect();
    rank.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, c) in copies.iter().enumerate() {
        for &e in &c.edge_ids {
            through[e].push(i);
        }
    }
    let mut count: Vec<usize> = through.iter().map(Vec::len).collect();
    let mut present = vec![true; m];
    let mut alive = vec![true; copies.len()];
    let mut open: Vec<usize> = copies
        .iter()
        .map(|c| c.edge_ids.iter().filter(|&&e| count[e] == 1).count())
        .collect();
    let mut candidates: BTreeSet<(usize, usize)> = (0..copies.len())
        .filter(|&i| open[i] >= 2)
        .map(|i| (rank[i], i))
        .collect();

    let mut pairs = Vec::new();
    let mut removed_open = Vec::new();
    let mut iterations = Vec::new();
    while let Some((_, c)) = candidates.pop_first() {
        let open_edges: Vec<EdgeId> = copies[c]
            .edge_ids
            .iter()
            .copied()
            .filter(|&e| count[e] == 1)
            .collect();
        let pair = (open_edges[0], open_edges[1]);
        for &e in &open_edges {
            present[e] = false;
        }
        // The copy dies; its surviving closed edges lose one copy each.
        alive[c] = false;
        for &f in &copies[c].edge_ids {
            count[f] -= 1;
            if present[f] && count[f] == 1 {
                let d = *through[f]
                    .iter()
                    .find(|&&d| alive[d])
                    .expect("one live copy remains on f");
                open[d] += 1;
                if open[d] >= 2 {
                    candidates.insert((rank[d], d));
                }
            }
        }
        pairs.push(pair);
        removed_open.extend(open_edges.iter().copied());
        iterations.push(RemovalStep {
            copy: copies[c].edge_ids.clone(),
            pair,
            removed_open: open_edges,
        });
    }
    let removed_free: Vec<EdgeId> = (0..m).filter(|&e| present[e] && count[e] == 0).collect();
    for &e in &removed_free {
        present[e] = false;
    }
    HCoreResult {
        core_edges: (0..m).filter(|&e| present[e]).collect(),
        pairs,
        removed_open,
        removed_free,
        iterations,
        copies_total: copies.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HClosedComponent {
    pub edges: Vec<EdgeId>,
    pub copies: Vec<HCopy>,
}

/// Minimal H-closed components of the core spanned by `core_edges` of `g`,
/// with edge ids of `g`. Copies sharing an edge end up together.
pub fn core_components(g: &Graph, core_edges: &[EdgeId], h: &Graph) -> Result<Vec<HClosedComponent>> {
    let mut ids = core_edges.to_vec();
    ids.sort_unstable();
    let core = g.edge_subgraph(&ids);
    let local = minimal_h_closed_components(&core, h)?;
    Ok(local
        .into_iter()
        .map(|c| HClosedComponent {
            edges: c.edges.iter().map(|&e| ids[e]).collect(),
            copies: c
                .copies
                .into_iter()
                .map(|k| {
                    let mut edge_ids: Vec<EdgeId> = k.edge_ids.iter().map(|&e| ids[e]).collect();
                    edge_ids.sort_unstable();
                    HCopy {
                        edge_ids,
                        vertex_set: k.vertex_set,
                    }
                })
                .collect(),
        })
        .collect())
}

/// Minimal H-closed components of a graph that is its own H-core, ordered
/// by smallest edge id.
pub fn minimal_h_closed_components(core: &Graph, h: &Graph) -> Result<Vec<HClosedComponent>> {
    let copies = enumerate_copies(core, h);
    let mut first_copy = vec![None; core.edge_count()];
    let mut uf = UnionFind::new(copies.len());
    for (i, c) in copies.iter().enumerate() {
        for &e in &c.edge_ids {
            match first_copy[e] {
                None => first_copy[e] = Some(i),
                Some(j) => {
                    uf.union(i, j);
                }
            }
        }
    }
    if let Some(e) = first_copy.iter().position(Option::is_none) {
        return Err(HgameError::Precondition(format!(
            "edge {e} {:?} lies in no copy, so the input is not an H-core",
            core.endpoints(e)
        )));
    }
    let mut groups: BTreeMap<usize, (BTreeSet<EdgeId>, Vec<HCopy>)> = BTreeMap::new();
    for (i, c) in copies.into_iter().enumerate() {
        let entry = groups.entry(uf.find(i)).or_default();
        entry.0.extend(c.edge_ids.iter().copied());
        entry.1.push(c);
    }
    let mut out: Vec<HClosedComponent> = groups
        .into_values()
        .map(|(edges, copies)| HClosedComponent {
            edges: edges.into_iter().collect(),
            copies,
        })
        .collect();
    out.sort_by_key(|c| c.edges[0]);
    Ok(out)
}

/// Strategy used inside each core component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseStrategy {
    Solver,
    /// The dispatcher for boards with `m(G) <= m2(H)`; falls back to the
    /// solver where its preconditions fail.
    Deterministic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositeSummary {
    pub core_edges: usize,
    pub k: usize,
    pub component_sizes: Vec<usize>,
    pub notes: Vec<String>,
}

/// The composite Breaker: component strategies on the core, pair answers
/// on the removal pairs, smallest unclaimed edge otherwise.
pub fn composite_breaker(
    g: &Graph,
    h: &Graph,
    pre: &HCoreResult,
    base: BaseStrategy,
    cap: usize,
) -> Result<(RoutedBreaker, CompositeSummary)> {
    let components = core_components(g, &pre.core_edges, h)?;
    let mut router = Router::new();
    let mut notes = Vec::new();
    for (i, comp) in components.iter().enumerate() {
        let (local, _) = g.compact_edge_subgraph(&comp.edges);
        let solver = |cap| -> Result<Box<dyn Responder>> {
            let r = SolverResponder::for_graph(&local, h, &comp.edges, cap).map_err(|err| {
                HgameError::Capability(format!(
                    "component {i} with {} edges has no base strategy: {err}",
                    comp.edges.len()
                ))
            })?;
            Ok(Box::new(r))
        };
        let responder = match base {
            BaseStrategy::Solver => solver(cap)?,
            BaseStrategy::Deterministic => match deterministic_router(&local, h, &comp.edges, cap) {
                Ok((r, report)) => {
                    notes.push(format!("component {i}: {:?}", report.branch));
                    Box::new(r)
                }
                Err(err) if err.is_refusal() => {
                    notes.push(format!("component {i}: solver ({err})"));
                    solver(cap)?
                }
                Err(err) => return Err(err),
            },
        };
        router.add(comp.edges.iter().copied(), responder);
    }
    let plan = pre.pairing_plan();
    router.add(
        plan.pairs.iter().flat_map(|&(a, b)| [a, b]),
        Box::new(PairResponder::new(&plan)),
    );
    let summary = CompositeSummary {
        core_edges: pre.core_edges.len(),
        k: pre.k(),
        component_sizes: components.iter().map(|c| c.edges.len()).collect(),
        notes: notes.clone(),
    };
    Ok((RoutedBreaker::new("composite", router).with_notes(notes), summary))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttachKind {
    Regular,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub copy: Vec<EdgeId>,
    pub kind: AttachKind,
    /// The edge that dictated the attachment, when the first branch fired.
    pub attached_at: Option<EdgeId>,
    pub reg: usize,
    pub deg: usize,
    pub fully_open: usize,
    pub delta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub start: Vec<EdgeId>,
    pub steps: Vec<GrowthStep>,
}

impl GrowthTrace {
    /// Violations of the Δ bounds, the consecutive-regular property and the
    /// fully-open counting bound, one line each.
    pub fn violations(&self, h: &Graph) -> Vec<String> {
        let (vh, eh) = (h.vertex_count(), h.edge_count());
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            let l = i + 1;
            let bound = match s.kind {
                AttachKind::Regular => 1,
                AttachKind::Degenerate => vh - 1,
            };
            if s.delta > bound {
                out.push(format!("step {l}: delta {} exceeds {bound}", s.delta));
            }
            if eh > 2 {
                // f_o >= reg (1 - 1/(e_H - 2)) - deg v_H, scaled by e_H - 2.
                let lhs = (s.fully_open * (eh - 2)) as i64;
                let rhs = (s.reg * (eh - 3)) as i64 - (s.deg * vh * (eh - 2)) as i64;
                if lhs < rhs {
                    out.push(format!(
                        "step {l}: f_o = {} below reg(1 - 1/(e_H - 2)) - deg v_H with reg {}, deg {}",
                        s.fully_open, s.reg, s.deg
                    ));
                }
            }
        }
        if eh >= 4 {
            for (i, s) in self.steps.iter().enumerate() {
                if s.delta != 1 || s.kind != AttachKind::Regular {
                    continue;
                }
                let run = &self.steps[i..self.steps.len().min(i + eh - 2)];
                if run.len() == eh - 2 && run.iter().all(|r| r.kind == AttachKind::Regular) {
                    if let Some(j) = run[1..].iter().position(|r| r.delta != 0) {
                        out.push(format!(
                            "steps {}..{}: regular run after delta 1 has delta {} at step {}",
                            i + 1,
                            i + eh - 2,
                            run[j + 1].delta,
                            i + j + 2
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Regenerates `gprime` from its first copy by attaching copies one at a
/// time. `omega[e]` is the rank of edge `e` in the total edge order.
///
/// `gprime` must be a minimal H-closed subgraph of an H-core, given as a
/// graph on its own; otherwise the process may stall, which is reported as a
/// precondition failure.
pub fn grow_h_closed(gprime: &Graph, h: &Graph, omega: &[usize]) -> Result<GrowthTrace> {
    if omega.len() != gprime.edge_count() {
        return Err(HgameError::InvalidInput("edge order must rank every edge".into()));
    }
    let copies = enumerate_copies(gprime, h);
    let Some(first) = copies.first() else {
        return Err(HgameError::Precondition("G' contains no copy of H".into()));
    };
    let m = gprime.edge_count();
    let mut in_prime = vec![0usize; m];
    for c in &copies {
        for &e in &c.edge_ids {
            in_prime[e] += 1;
        }
    }
    let mut in_hat = vec![false; m];
    let mut covered = 0;
    let mut seen_vertices: BTreeSet<Vertex> = BTreeSet::new();
    let mut chosen: Vec<usize> = vec![0];
    // For each chosen copy: its new vertices and whether it was regular.
    let mut new_vertices: Vec<Vec<Vertex>> = vec![Vec::new()];
    let mut regular: Vec<bool> = vec![false];
    let mut touched: Vec<bool> = vec![false];
    for &e in &first.edge_ids {
        in_hat[e] = true;
        covered += 1;
    }
    seen_vertices.extend(first.vertex_set.iter().copied());
    let mut steps = Vec::new();
    let (mut reg, mut deg) = (0, 0);
    let fully_open = |regular: &[bool], touched: &[bool]| -> usize {
        (0..regular.len()).filter(|&i| regular[i] && !touched[i]).count()
    };
    while covered < m {
        let inside: Vec<usize> = (0..copies.len())
            .filter(|&i| copies[i].edge_ids.iter().all(|&e| in_hat[e]))
            .collect();
        let mut hat_count = vec![0usize; m];
        for &i in &inside {
            for &e in &copies[i].edge_ids {
                hat_count[e] += 1;
            }
        }
        let unproblematic = |i: usize| copies[i].edge_ids.iter().filter(|&&e| hat_count[e] == 1).count() >= 2;
        let earliest = chosen.iter().copied().find(|&i| unproblematic(i));
        let (next, attached_at) = match earliest {
            Some(l) => {
                let e = copies[l]
                    .edge_ids
                    .iter()
                    .copied()
                    .filter(|&e| hat_count[e] == 1 && in_prime[e] >= 2)
                    .min_by_key(|&e| omega[e])
                    .ok_or_else(|| {
                        HgameError::Precondition(
                            "an unproblematic copy has no edge closed in G'; G' is not part of an H-core".into(),
                        )
                    })?;
                let k = (0..copies.len())
                    .find(|&i| copies[i].edge_ids.contains(&e) && !copies[i].edge_ids.iter().all(|&f| in_hat[f]))
                    .ok_or_else(|| HgameError::Internal("closed edge has no second copy".into()))?;
                (k, Some(e))
            }
            None => {
                let k = (0..copies.len())
                    .find(|&i| {
                        let c = &copies[i].edge_ids;
                        c.iter().any(|&f| in_hat[f]) && !c.iter().all(|&f| in_hat[f])
                    })
                    .ok_or_else(|| {
                        HgameError::Precondition("no copy extends the current graph; G' is not H-closed-minimal".into())
                    })?;
                (k, None)
            }
        };
        let copy = &copies[next];
        let shared: Vec<Vertex> = copy
            .vertex_set
            .iter()
            .copied()
            .filter(|v| seen_vertices.contains(v))
            .collect();
        let kind = if shared.len() == 2 {
            AttachKind::Regular
        } else {
            AttachKind::Degenerate
        };
        match kind {
            AttachKind::Regular => reg += 1,
            AttachKind::Degenerate => deg += 1,
        }
        let before = fully_open(&regular, &touched);
        let mut lost = 0;
        for i in 0..chosen.len() {
            if regular[i] && !touched[i] && new_vertices[i].iter().any(|v| copy.vertex_set.contains(v)) {
                touched[i] = true;
                lost += 1;
            }
        }
        let fresh: Vec<Vertex> = copy
            .vertex_set
            .iter()
            .copied()
            .filter(|v| !seen_vertices.contains(v))
            .collect();
        chosen.push(next);
        regular.push(kind == AttachKind::Regular);
        touched.push(false);
        new_vertices.push(fresh.clone());
        seen_vertices.extend(fresh);
        for &e in &copy.edge_ids {
            if !in_hat[e] {
                in_hat[e] = true;
                covered += 1;
            }
        }
        debug_assert_eq!(before - lost + usize::from(kind == AttachKind::Regular), fully_open(&regular, &touched));
        steps.push(GrowthStep {
            copy: copy.edge_ids.clone(),
            kind,
            attached_at,
            reg,
            deg,
            fully_open: fully_open(&regular, &touched),
            delta: lost,
        });
    }
    Ok(GrowthTrace {
        start: first.edge_ids.clone(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_sample, SampleSpec};

    fn two_triangles() -> Graph {
        // Triangles 0-1-2 and 0-1-3 sharing edge 0-1 (id 0).
        Graph::new(4, [(0, 1), (1, 2), (0, 2), (1, 3), (0, 3)]).unwrap()
    }

    #[test]
    fn classification_examples() {
        let k3 = Graph::complete(3);
        let c = classify_edges(&k3, &k3);
        assert!(c.classes.iter().all(|&x| x == EdgeClass::Open));
        assert_eq!(c.problematic, vec![false]);
        let c = classify_edges(&two_triangles(), &k3);
        assert_eq!(c.classes[0], EdgeClass::Closed);
        assert!(c.classes[1..].iter().all(|&x| x == EdgeClass::Open));
        assert_eq!(c.problematic, vec![false, false]);
        let c = classify_edges(&Graph::cycle(5), &k3);
        assert!(c.classes.iter().all(|&x| x == EdgeClass::Free));
    }

    #[test]
    fn preprocess_examples() {
        let k3 = Graph::complete(3);
        let r = preprocess(&k3, &k3, 0);
        assert_eq!(r.k(), 1);
        assert!(r.core_edges.is_empty());
        assert_eq!(r.removed_open.len(), 3);
        assert!(r.removed_free.is_empty());

        let r = preprocess(&two_triangles(), &k3, 0);
        assert_eq!(r.k(), 2);
        assert!(r.core_edges.is_empty());
        assert!(r.removed_free.is_empty());

        let r = preprocess(&Graph::cycle(5), &k3, 0);
        assert_eq!(r.k(), 0);
        assert_eq!(r.removed_free, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn k4_is_its_own_triangle_core() {
        // Every K4 edge lies in two triangles.
        let r = preprocess(&Graph::complete(4), &Graph::complete(3), 3);
        assert_eq!(r.core_edges.len(), 6);
        let comps = core_components(&Graph::complete(4), &r.core_edges, &Graph::complete(3)).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].copies.len(), 4);
    }

    #[test]
    fn components_examples() {
        let k3 = Graph::complete(3);
        assert!(minimal_h_closed_components(&Graph::empty(3), &k3).unwrap().is_empty());
        let two_k4 = Graph::new(
            8,
            Graph::complete(4)
                .edges()
                .iter()
                .copied()
                .chain(Graph::complete(4).edges().iter().map(|&(u, v)| (u + 4, v + 4))),
        )
        .unwrap();
        assert_eq!(minimal_h_closed_components(&two_k4, &k3).unwrap().len(), 2);
        let err = minimal_h_closed_components(&Graph::path(3), &k3).unwrap_err();
        assert!(matches!(err, HgameError::Precondition(_)));
    }

    #[test]
    fn incremental_counts_match_reclassification() {
        let c4 = Graph::cycle(4);
        for seed in 0..30 {
            let g = gnp_sample(&SampleSpec::new(10, 0.4, seed).unwrap());
            let r = preprocess(&g, &c4, seed);
            let core = g.edge_subgraph(&r.core_edges);
            let c = classify_edges(&core, &c4);
            assert!(c.classes.iter().all(|&x| x != EdgeClass::Free), "seed {seed}");
            assert!(c.problematic.iter().all(|&p| p), "seed {seed}");
        }
    }

    #[test]
    fn growth_of_single_copy_is_empty() {
        let t = grow_h_closed(&Graph::cycle(4), &Graph::cycle(4), &[0, 1, 2, 3]).unwrap();
        assert!(t.steps.is_empty());
    }

    #[test]
    fn growth_on_k4_triangles() {
        let k4 = Graph::complete(4);
        let omega: Vec<usize> = (0..6).collect();
        let t = grow_h_closed(&k4, &Graph::complete(3), &omega).unwrap();
        assert!(!t.steps.is_empty());
        let total: usize = t.steps.len();
        assert_eq!(t.steps.last().unwrap().reg + t.steps.last().unwrap().deg, total);
    }
}
