//! Audits of the two random-graph properties the threshold arguments lean on:
//! vertex expansion of small sets and bounded density of small subgraphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HgameError, Result};
use crate::graph::{neighborhood, Graph, Vertex};
use crate::rational::{self, Ratio};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub pass: bool,
    /// Smallest observed `|N(X)| / (|X| * np)`.
    pub worst_ratio: f64,
    pub witness: Vec<Vertex>,
    pub singletons_checked: usize,
    pub samples_checked: usize,
    pub max_set_size: usize,
}

/// Checks `|N(X)| >= (1 - eps) |X| np` for every singleton and for `samples`
/// random sets of size `2..=min(n, 1/p)` where `p = np / n`.
pub fn expansion_check(
    g: &Graph,
    eps: f64,
    np_value: f64,
    samples: usize,
    seed: u64,
) -> Result<ExpansionReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(HgameError::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if np_value <= 0.0 {
        return Err(HgameError::InvalidInput("np must be positive".into()));
    }
    let n = g.vertex_count();
    let p = np_value / n.max(1) as f64;
    let max_set_size = ((1.0 / p).floor() as usize).min(n);
    let mut report = ExpansionReport {
        pass: true,
        worst_ratio: f64::INFINITY,
        witness: Vec::new(),
        singletons_checked: 0,
        samples_checked: 0,
        max_set_size,
    };
    let consider = |set: Vec<Vertex>, report: &mut ExpansionReport| {
        let size = if set.len() == 1 {
            g.degree(set[0])
        } else {
            neighborhood(g, &set).expect("sampled vertices are in range").len()
        };
        let ratio = size as f64 / (set.len() as f64 * np_value);
        if ratio < report.worst_ratio {
            report.worst_ratio = ratio;
            report.witness = set;
        }
    };
    for v in 0..n {
        consider(vec![v], &mut report);
        report.singletons_checked += 1;
    }
    if max_set_size >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let k = rng.gen_range(2..=max_set_size);
            let mut set = sample(&mut rng, n, k).into_vec();
            set.sort_unstable();
            consider(set, &mut report);
            report.samples_checked += 1;
        }
    }
    report.pass = report.worst_ratio >= 1.0 - eps;
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
pub struct AuditLimits {
    /// Largest subgraph order the exhaustive search accepts.
    pub max_order: usize,
    /// Bail out after examining this many connected vertex sets.
    pub max_subsets: u64,
}

impl Default for AuditLimits {
    fn default() -> Self {
        AuditLimits {
            max_order: 10,
            max_subsets: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityAuditReport {
    pub pass: bool,
    #[serde(with = "rational::as_str")]
    pub alpha: Ratio,
    /// Densest small vertex set found (ties: lexicographically smallest).
    pub densest: Vec<Vertex>,
    pub densest_edges: usize,
    #[serde(with = "rational::as_str")]
    pub densest_density: Ratio,
    pub subsets_examined: u64,
}

/// Exhaustively checks that every subgraph on at most `order` vertices has
/// `e / v <= alpha`. Only connected vertex sets are enumerated: a disconnected
/// set is never denser than its densest component.
pub fn density_audit(
    g: &Graph,
    alpha: Ratio,
    order: usize,
    limits: AuditLimits,
) -> Result<DensityAuditReport> {
    if order < 2 {
        return Err(HgameError::InvalidInput("subgraph order bound must be at least 2".into()));
    }
    if order > limits.max_order {
        return Err(HgameError::Capability(format!(
            "exhaustive density audit limited to {} vertices, asked for {order}",
            limits.max_order
        )));
    }
    let mut esu = Esu {
        g,
        k: order,
        in_sub: vec![false; g.vertex_count()],
        near: vec![0; g.vertex_count()],
        sub: Vec::new(),
        best: (Ratio::from_integer(-1), Vec::new(), 0),
        examined: 0,
        budget: limits.max_subsets,
    };
    for v in 0..g.vertex_count() {
        esu.sub.push(v);
        esu.in_sub[v] = true;
        esu.mark(v, 1);
        let ext: Vec<Vertex> = g.neighbors(v).filter(|&w| w > v).collect();
        let ok = esu.extend(ext, v, 0);
        esu.mark(v, -1);
        esu.in_sub[v] = false;
        esu.sub.pop();
        if !ok {
            return Err(HgameError::Capability(format!(
                "density audit exceeded {} vertex sets",
                limits.max_subsets
            )));
        }
    }
    let (density, mut densest, edges) = esu.best;
    densest.sort_unstable();
    let density = density.max(Ratio::from_integer(0));
    Ok(DensityAuditReport {
        pass: density <= alpha,
        alpha,
        densest,
        densest_edges: edges,
        densest_density: density,
        subsets_examined: esu.examined,
    })
}

/// ESU enumeration of connected vertex sets (each set visited exactly once).
struct Esu<'a> {
    g: &'a Graph,
    k: usize,
    in_sub: Vec<bool>,
    /// Number of current-subgraph vertices at distance <= 1 (incl. itself).
    near: Vec<i32>,
    sub: Vec<Vertex>,
    best: (Ratio, Vec<Vertex>, usize),
    examined: u64,
    budget: u64,
}

impl Esu<'_> {
    fn mark(&mut self, v: Vertex, delta: i32) {
        self.near[v] += delta;
        for w in self.g.neighbors(v) {
            self.near[w] += delta;
        }
    }

    fn record(&mut self, edges: usize) {
        self.examined += 1;
        let d = Ratio::new(edges as i64, self.sub.len() as i64);
        let better = match d.cmp(&self.best.0) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => {
                let mut mine = self.sub.clone();
                mine.sort_unstable();
                let mut theirs = self.best.1.clone();
                theirs.sort_unstable();
                mine < theirs
            }
        };
        if better {
            self.best = (d, self.sub.clone(), edges);
        }
    }

    fn extend(&mut self, mut ext: Vec<Vertex>, root: Vertex, edges: usize) -> bool {
        self.record(edges);
        if self.examined > self.budget {
            return false;
        }
        if self.sub.len() == self.k {
            return true;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for u in self.g.neighbors(w) {
                if u > root && !self.in_sub[u] && self.near[u] == 0 {
                    next.push(u);
                }
            }
            let added = self.g.neighbors(w).filter(|&u| self.in_sub[u]).count();
            self.sub.push(w);
            self.in_sub[w] = true;
            self.mark(w, 1);
            let ok = self.extend(next, root, edges + added);
            self.mark(w, -1);
            self.in_sub[w] = false;
            self.sub.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_sample, SampleSpec};
    use crate::rational::ratio;

    #[test]
    fn complete_graph_expands() {
        let g = Graph::complete(8);
        let r = expansion_check(&g, 0.5, 7.0, 0, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.singletons_checked, 8);
    }

    #[test]
    fn empty_graph_fails_expansion() {
        let r = expansion_check(&Graph::empty(6), 0.5, 2.0, 10, 1).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness.len(), 1);
        assert_eq!(r.worst_ratio, 0.0);
    }

    #[test]
    fn expansion_rejects_bad_eps() {
        assert!(expansion_check(&Graph::complete(3), 1.0, 2.0, 1, 0).is_err());
    }

    #[test]
    fn gnp_expands_at_moderate_density() {
        // At n p = 20 some vertex typically has degree below 10, so the
        // singleton check needs n p large against log n; n p = 50 gives a
        // per-vertex failure probability near 1e-5.
        let mut failures = 0;
        for seed in 0..5 {
            let g = gnp_sample(&SampleSpec::new(1000, 0.05, seed).unwrap());
            let r = expansion_check(&g, 0.5, 50.0, 200, seed).unwrap();
            if !r.pass {
                failures += 1;
            }
        }
        assert!(failures <= 1, "{failures} of 5 samples failed the expansion audit");
    }

    #[test]
    fn forests_pass_density_audit() {
        let g = Graph::path(9);
        let r = density_audit(&g, ratio(1, 1), 8, AuditLimits::default()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn k4_fails_density_audit() {
        let r = density_audit(&Graph::complete(4), ratio(7, 5), 4, AuditLimits::default()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.densest, vec![0, 1, 2, 3]);
        assert_eq!(r.densest_density, ratio(3, 2));
    }

    #[test]
    fn audit_order_cap_is_a_capability_error() {
        let err = density_audit(&Graph::path(3), ratio(1, 1), 11, AuditLimits::default()).unwrap_err();
        assert!(matches!(err, HgameError::Capability(_)));
    }

    #[test]
    fn esu_visits_every_connected_set_once() {
        // K4 has 4 + 6 + 4 + 1 connected vertex sets.
        let r = density_audit(&Graph::complete(4), ratio(2, 1), 4, AuditLimits::default()).unwrap();
        assert_eq!(r.subsets_examined, 15);
        // Path on 5 vertices: sum over lengths of sub-paths = 5+4+3+2+1.
        let r = density_audit(&Graph::path(5), ratio(2, 1), 5, AuditLimits::default()).unwrap();
        assert_eq!(r.subsets_examined, 15);
    }

    #[test]
    fn witness_rechecks_against_brute_force() {
        for seed in 0..20 {
            let g = gnp_sample(&SampleSpec::new(9, 0.45, seed).unwrap());
            let r = density_audit(&g, ratio(1, 1), 6, AuditLimits::default()).unwrap();
            let mut best = Ratio::from_integer(0);
            for mask in 1u32..(1 << 9) {
                if mask.count_ones() > 6 {
                    continue;
                }
                let verts: Vec<usize> = (0..9).filter(|i| mask >> i & 1 == 1).collect();
                let e = g
                    .edges()
                    .iter()
                    .filter(|&&(u, v)| verts.contains(&u) && verts.contains(&v))
                    .count();
                best = best.max(Ratio::new(e as i64, verts.len() as i64));
            }
            assert_eq!(r.densest_density, best, "seed {seed}");
            let (sub, _) = g.induced(&r.densest);
            assert_eq!(Ratio::new(sub.edge_count() as i64, r.densest.len() as i64), best);
            assert_eq!(r.pass, best <= ratio(1, 1));
        }
    }
}
