//! Enumeration of subgraph copies of a small pattern `H` inside a host `G`.
//!
//! Copies are counted as subgraphs, not embeddings: each distinct edge set
//! spanning a subgraph isomorphic to `H` is reported once. The search maps
//! pattern vertices one at a time, always extending along an already-mapped
//! neighbour, and prunes on host degree.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HCopy {
    pub edge_ids: Vec<EdgeId>,
    pub vertex_set: Vec<Vertex>,
}

/// Search plan: pattern vertices in matching order with, for each position,
/// the earlier positions it must be adjacent to.
struct Plan {
    order: Vec<Vertex>,
    back: Vec<Vec<usize>>,
    degree: Vec<usize>,
    /// Pattern edges rewritten in plan positions.
    edges: Vec<(usize, usize)>,
    isolated: usize,
}

impl Plan {
    fn new(h: &Graph, prefix: &[Vertex]) -> Plan {
        let nh = h.vertex_count();
        let mut pos = vec![usize::MAX; nh];
        let mut order = Vec::new();
        for &v in prefix {
            pos[v] = order.len();
            order.push(v);
        }
        let active = (0..nh).filter(|&v| h.degree(v) > 0).count();
        while order.len() < active {
            // Most already-placed neighbours first, then highest degree.
            let next = (0..nh)
                .filter(|&v| pos[v] == usize::MAX && h.degree(v) > 0)
                .max_by_key(|&v| {
                    let placed = h.neighbors(v).filter(|&w| pos[w] != usize::MAX).count();
                    (placed, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced active vertex exists");
            pos[next] = order.len();
            order.push(next);
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut b: Vec<usize> = h
                    .neighbors(v)
                    .map(|w| pos[w])
                    .filter(|&p| p < i)
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        let degree = order.iter().map(|&v| h.degree(v)).collect();
        let edges = h.edges().iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        Plan {
            order,
            back,
            degree,
            edges,
            isolated: nh - active,
        }
    }
}

struct Search<'a, F: Fn(EdgeId) -> bool> {
    g: &'a Graph,
    plan: &'a Plan,
    allowed: F,
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl<F: Fn(EdgeId) -> bool> Search<'_, F> {
    fn edge_ok(&self, u: Vertex, v: Vertex) -> bool {
        self.g.edge_between(u, v).is_some_and(|e| (self.allowed)(e))
    }

    /// Depth-first extension; `visit` returns false to stop the search.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if depth == self.plan.order.len() {
            return visit(&self.map);
        }
        let need = self.plan.degree[depth];
        let back = &self.plan.back[depth];
        let candidates: Vec<Vertex> = match back.first() {
            Some(&anchor) => self.g.neighbors(self.map[anchor]).collect(),
            None => (0..self.g.vertex_count()).collect(),
        };
        for c in candidates {
            if self.used[c] || self.g.degree(c) < need {
                continue;
            }
            if !back.iter().all(|&b| self.edge_ok(self.map[b], c)) {
                continue;
            }
            self.used[c] = true;
            self.map.push(c);
            let go_on = self.run(depth + 1, visit);
            self.map.pop();
            self.used[c] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn copy_from_map(g: &Graph, plan: &Plan, map: &[Vertex]) -> HCopy {
    let mut edge_ids: Vec<EdgeId> = plan
        .edges
        .iter()
        .map(|&(a, b)| g.edge_between(map[a], map[b]).expect("mapped edge exists"))
        .collect();
    edge_ids.sort_unstable();
    let mut vertex_set = map.to_vec();
    vertex_set.sort_unstable();
    HCopy {
        edge_ids,
        vertex_set,
    }
}

/// All copies of `h` in `g`, sorted lexicographically by edge ids.
///
/// An edgeless pattern has no copies.
pub fn enumerate_copies(g: &Graph, h: &Graph) -> Vec<HCopy> {
    enumerate_copies_capped(g, h, usize::MAX).expect("uncapped enumeration never overflows")
}

/// Like [`enumerate_copies`] but gives up with `None` once more than `limit`
/// distinct copies have been found.
pub fn enumerate_copies_capped(g: &Graph, h: &Graph, limit: usize) -> Option<Vec<HCopy>> {
    if h.edge_count() == 0 || h.vertex_count() > g.vertex_count() {
        return Some(Vec::new());
    }
    let plan = Plan::new(h, &[]);
    let mut found = BTreeSet::new();
    let mut overflow = false;
    let mut search = Search {
        g,
        plan: &plan,
        allowed: |_| true,
        map: Vec::new(),
        used: vec![false; g.vertex_count()],
    };
    search.run(0, &mut |map| {
        found.insert(copy_from_map(g, &plan, map));
        if found.len() > limit {
            overflow = true;
            return false;
        }
        true
    });
    (!overflow).then(|| found.into_iter().collect())
}

/// Finds one copy of `h` that uses edge `through` and only edges accepted by
/// `allowed` (the edge `through` must itself be allowed).
pub fn find_copy_through<F>(g: &Graph, h: &Graph, through: EdgeId, allowed: F) -> Option<HCopy>
where
    F: Fn(EdgeId) -> bool,
{
    if h.edge_count() == 0 || h.vertex_count() > g.vertex_count() || !allowed(through) {
        return None;
    }
    let (u, v) = g.endpoints(through);
    // Pattern edges that are equivalent under automorphism would give the
    // same answers; trying all of them keeps this simple and the patterns
    // used here are small.
    for &(a, b) in h.edges() {
        let plan = Plan::new(h, &[a, b]);
        if plan.isolated + plan.order.len() > g.vertex_count() {
            return None;
        }
        for (x, y) in [(u, v), (v, u)] {
            if g.degree(x) < plan.degree[0] || g.degree(y) < plan.degree[1] {
                continue;
            }
            let mut search = Search {
                g,
                plan: &plan,
                allowed: &allowed,
                map: vec![x, y],
                used: vec![false; g.vertex_count()],
            };
            search.used[x] = true;
            search.used[y] = true;
            let mut hit = None;
            search.run(2, &mut |map| {
                hit = Some(copy_from_map(g, &plan, map));
                false
            });
            if hit.is_some() {
                return hit;
            }
        }
    }
    None
}

/// The first copy met by the deterministic search. Much cheaper than
/// enumerating every copy of a dense pattern.
pub fn first_copy(g: &Graph, h: &Graph) -> Option<HCopy> {
    if h.edge_count() == 0 || h.vertex_count() > g.vertex_count() {
        return None;
    }
    let plan = Plan::new(h, &[]);
    let mut search = Search {
        g,
        plan: &plan,
        allowed: |_| true,
        map: Vec::new(),
        used: vec![false; g.vertex_count()],
    };
    let mut hit = None;
    search.run(0, &mut |map| {
        hit = Some(copy_from_map(g, &plan, map));
        false
    });
    hit
}

/// Whether `g` contains at least one copy of `h`.
pub fn contains_copy(g: &Graph, h: &Graph) -> bool {
    enumerate_copies_capped(g, h, 0).is_none()
}
