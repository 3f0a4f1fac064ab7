//! Constructive Breaker strategies.
//!
//! Every strategy here is a [`RoutedBreaker`]: each board element belongs to
//! at most one region, each region has a [`Responder`], and Breaker answers
//! Maker's last move with the response of that move's region. When there is
//! no response (Maker moved outside every region, the region has nothing to
//! say, or Breaker moves first) Breaker takes the smallest unclaimed element.
//! Extra Breaker elements never hurt Breaker, so the fallback is harmless.
//!
//! Responders speak in board element ids. Builders accept a graph together
//! with the board id of each of its edges, so the same responders serve a
//! whole board and a component embedded in a larger one.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::copies::enumerate_copies;
use crate::density::{
    fractional_arboricity, is_strictly_2_balanced, max_density, orient_bounded_outdegree, two_density,
    ForestDecomposition,
};
use crate::error::{HgameError, Result};
use crate::game::{GameState, Player, Strategy};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::rational::{ceil, Ratio};
use crate::solver::{Solver, DEFAULT_CAP};
use crate::unionfind::UnionFind;

/// Answers a Maker move inside its region.
pub trait Responder {
    fn respond(&mut self, maker_move: usize, state: &GameState) -> Option<usize>;

    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Disjoint pairs; Maker taking one member is answered with the other.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingPlan {
    pub pairs: Vec<(usize, usize)>,
}

impl PairingPlan {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &pairs {
            if a == b || !seen.insert(a) || !seen.insert(b) {
                return Err(HgameError::InvalidInput(format!(
                    "pair ({a}, {b}) overlaps another pair"
                )));
            }
        }
        Ok(PairingPlan { pairs })
    }

    pub fn partner(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct PairResponder {
    partner: HashMap<usize, usize>,
}

impl PairResponder {
    pub fn new(plan: &PairingPlan) -> Self {
        let mut partner = HashMap::new();
        for &(a, b) in &plan.pairs {
            partner.insert(a, b);
            partner.insert(b, a);
        }
        PairResponder { partner }
    }
}

impl Responder for PairResponder {
    fn respond(&mut self, x: usize, state: &GameState) -> Option<usize> {
        self.partner.get(&x).copied().filter(|&y| state.is_unclaimed(y))
    }
}

/// Dispatches to sub-responders by element.
#[derive(Default)]
pub struct Router {
    region_of: HashMap<usize, usize>,
    parts: Vec<Box<dyn Responder>>,
}

impl Router {
    pub fn new() -> Self {
        Router::default()
    }

    /// Adds a region; elements already routed elsewhere are left there.
    pub fn add(&mut self, elements: impl IntoIterator<Item = usize>, responder: Box<dyn Responder>) {
        let r = self.parts.len();
        for x in elements {
            self.region_of.entry(x).or_insert(r);
        }
        self.parts.push(responder);
    }

    pub fn region(&self, x: usize) -> Option<usize> {
        self.region_of.get(&x).copied()
    }
}

impl Responder for Router {
    fn respond(&mut self, x: usize, state: &GameState) -> Option<usize> {
        let r = self.region(x)?;
        self.parts[r].respond(x, state)
    }

    fn notes(&self) -> Vec<String> {
        self.parts.iter().flat_map(|p| p.notes()).collect()
    }
}

pub struct RoutedBreaker {
    name: String,
    router: Router,
    notes: Vec<String>,
}

impl RoutedBreaker {
    pub fn new(name: impl Into<String>, router: Router) -> Self {
        RoutedBreaker {
            name: name.into(),
            router,
            notes: Vec::new(),
        }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }
}

impl Strategy for RoutedBreaker {
    fn name(&self) -> &str {
        &self.name
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        state
            .last_opponent_move()
            .and_then(|x| self.router.respond(x, state))
            .filter(|&y| state.is_unclaimed(y))
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }

    fn notes(&self) -> Vec<String> {
        let mut out = self.notes.clone();
        out.extend(self.router.notes());
        out
    }
}

fn identity_ids(g: &Graph) -> Vec<usize> {
    (0..g.edge_count()).collect()
}

/// `ceil(ar(G) / 2) < ar(H)`.
pub fn breaker_wins_by_arboricity(g: &Graph, h: &Graph) -> bool {
    let (ar_g, _) = fractional_arboricity(g);
    let (ar_h, _) = fractional_arboricity(h);
    Ratio::from_integer(ceil(ar_g / 2)) < ar_h
}

/// `ceil(m(G) / 2) < m(H)`.
pub fn breaker_wins_by_orientation(g: &Graph, h: &Graph) -> bool {
    let (m_g, _) = max_density(g);
    let (m_h, _) = max_density(h);
    Ratio::from_integer(ceil(m_g / 2)) < m_h
}

/// Answers a Maker edge leaving `v` with another unclaimed edge leaving `v`.
#[derive(Clone, Debug)]
pub struct OutStarResponder {
    tail: HashMap<usize, Vertex>,
    out: HashMap<Vertex, Vec<usize>>,
}

impl OutStarResponder {
    /// `ids[e]` is the board element of edge `e` of `g`.
    pub fn new(g: &Graph, ids: &[usize]) -> Result<Self> {
        let orientation = orient_bounded_outdegree(g)?;
        let mut tail = HashMap::new();
        let mut out: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (e, &(t, _)) in orientation.arcs.iter().enumerate() {
            tail.insert(ids[e], t);
            out.entry(t).or_default().push(ids[e]);
        }
        for list in out.values_mut() {
            list.sort_unstable();
        }
        Ok(OutStarResponder { tail, out })
    }

    pub fn tail(&self, x: usize) -> Option<Vertex> {
        self.tail.get(&x).copied()
    }
}

impl Responder for OutStarResponder {
    fn respond(&mut self, x: usize, state: &GameState) -> Option<usize> {
        let v = self.tail(x)?;
        self.out[&v].iter().copied().find(|&y| state.is_unclaimed(y))
    }
}

/// Orientation pairing on the whole board `E(G)`; refused unless
/// `ceil(m(G)/2) < m(H)`.
pub fn orientation_pairing_breaker(g: &Graph, h: &Graph) -> Result<RoutedBreaker> {
    if !breaker_wins_by_orientation(g, h) {
        return Err(HgameError::Precondition(
            "orientation pairing needs ceil(m(G)/2) < m(H)".into(),
        ));
    }
    let ids = identity_ids(g);
    let mut router = Router::new();
    router.add(ids.clone(), Box::new(OutStarResponder::new(g, &ids)?));
    Ok(RoutedBreaker::new("orientation-pairing", router))
}

/// Keeps Maker's edges inside one forest pair acyclic.
///
/// Invariant: after contracting Maker's edges of the pair, the unclaimed
/// edges of each side still form a forest. A Maker edge `e` of one side joins
/// two different classes `a`, `b`; contracting it can close at most one cycle
/// in the other side, namely the path from `a` to `b`, and Breaker claims the
/// first edge of that path. Arbitrary Breaker moves only delete edges and
/// keep the invariant.
#[derive(Clone, Debug)]
pub struct ForestPairResponder {
    ends: HashMap<usize, (Vertex, Vertex)>,
    side: HashMap<usize, usize>,
    sides: [Vec<usize>; 2],
    classes: UnionFind,
    violations: usize,
}

impl ForestPairResponder {
    /// `first` and `second` hold edge ids of `g`; `ids` maps them to board
    /// elements.
    pub fn new(g: &Graph, first: &[EdgeId], second: &[EdgeId], ids: &[usize]) -> Self {
        let mut ends = HashMap::new();
        let mut side = HashMap::new();
        let mut sides = [Vec::new(), Vec::new()];
        for (s, part) in [first, second].into_iter().enumerate() {
            for &e in part {
                ends.insert(ids[e], g.endpoints(e));
                side.insert(ids[e], s);
                sides[s].push(ids[e]);
            }
        }
        ForestPairResponder {
            ends,
            side,
            sides,
            classes: UnionFind::new(g.vertex_count()),
            violations: 0,
        }
    }

    fn path(&mut self, side: usize, a: Vertex, b: Vertex, state: &GameState) -> Option<usize> {
        let mut adj: HashMap<Vertex, Vec<(Vertex, usize)>> = HashMap::new();
        for &x in &self.sides[side] {
            if state.is_unclaimed(x) {
                let (u, v) = self.ends[&x];
                let (cu, cv) = (self.classes.find(u), self.classes.find(v));
                adj.entry(cu).or_default().push((cv, x));
                adj.entry(cv).or_default().push((cu, x));
            }
        }
        let mut via: HashMap<Vertex, (Vertex, usize)> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        via.insert(a, (a, usize::MAX));
        while let Some(c) = queue.pop_front() {
            if c == b {
                let mut cur = b;
                let mut first = None;
                while cur != a {
                    let (prev, x) = via[&cur];
                    first = Some(x);
                    cur = prev;
                }
                return first;
            }
            for &(d, x) in adj.get(&c).into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(d) {
                    slot.insert((c, x));
                    queue.push_back(d);
                }
            }
        }
        None
    }
}

impl Responder for ForestPairResponder {
    fn respond(&mut self, x: usize, state: &GameState) -> Option<usize> {
        let (u, v) = *self.ends.get(&x)?;
        let (a, b) = (self.classes.find(u), self.classes.find(v));
        if a == b {
            // Only possible if the invariant was broken from outside.
            self.violations += 1;
            return None;
        }
        let other = 1 - self.side[&x];
        let reply = self.path(other, a, b, state);
        self.classes.union(a, b);
        reply
    }

    fn notes(&self) -> Vec<String> {
        if self.violations > 0 {
            vec![format!("forest pair saw {} cycle-closing Maker edges", self.violations)]
        } else {
            Vec::new()
        }
    }
}

/// Forests paired as `(F0, F1), (F2, F3), ...`, padding with an empty forest.
pub fn forest_pairs(forests: &ForestDecomposition) -> Vec<(Vec<EdgeId>, Vec<EdgeId>)> {
    forests
        .forests
        .chunks(2)
        .map(|c| (c[0].clone(), c.get(1).cloned().unwrap_or_default()))
        .collect()
}

fn forest_router(g: &Graph, forests: &ForestDecomposition, ids: &[usize]) -> Router {
    let mut router = Router::new();
    for (a, b) in forest_pairs(forests) {
        let members: Vec<usize> = a.iter().chain(&b).map(|&e| ids[e]).collect();
        router.add(members, Box::new(ForestPairResponder::new(g, &a, &b, ids)));
    }
    router
}

/// Forest pairing on `E(G)` for the given decomposition.
pub fn forest_pairing_breaker(g: &Graph, forests: &ForestDecomposition) -> RoutedBreaker {
    RoutedBreaker::new("forest-pairing", forest_router(g, forests, &identity_ids(g)))
}

/// Forest pairing on a minimum decomposition; refused unless
/// `ceil(ar(G)/2) < ar(H)`.
pub fn arboricity_pairing_breaker(g: &Graph, h: &Graph) -> Result<RoutedBreaker> {
    if !breaker_wins_by_arboricity(g, h) {
        return Err(HgameError::Precondition(
            "forest pairing needs ceil(ar(G)/2) < ar(H)".into(),
        ));
    }
    let fd = crate::density::forest_decomposition(g)?;
    Ok(forest_pairing_breaker(g, &fd))
}

/// Breaker answering inside a subgame with exact solver moves.
#[derive(Clone, Debug)]
pub struct SolverResponder {
    solver: Solver,
}

impl SolverResponder {
    /// Winning sets are H-copies of `g`, translated through `ids`.
    pub fn for_graph(g: &Graph, h: &Graph, ids: &[usize], cap: usize) -> Result<Self> {
        let sets = enumerate_copies(g, h)
            .into_iter()
            .map(|c| c.edge_ids.iter().map(|&e| ids[e]).collect())
            .collect();
        Ok(SolverResponder {
            solver: Solver::new(sets, |_| None, cap)?,
        })
    }

    pub fn live_count(&self) -> usize {
        self.solver.live_count()
    }
}

impl Responder for SolverResponder {
    fn respond(&mut self, _x: usize, state: &GameState) -> Option<usize> {
        self.solver.best_move(|y| state.owner(y), Player::Breaker)
    }
}

/// Mirrors Maker inside one star: Maker's edge at `v` is answered with
/// another unclaimed edge at `v`.
#[derive(Clone, Debug)]
pub struct StarResponder {
    edges: Vec<usize>,
}

impl Responder for StarResponder {
    fn respond(&mut self, x: usize, state: &GameState) -> Option<usize> {
        self.edges.iter().copied().find(|&y| y != x && state.is_unclaimed(y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peeling {
    /// Peeled vertices with the board elements of their stars at peel time.
    pub stars: Vec<(Vertex, Vec<usize>)>,
    /// Edges of `g` left after peeling.
    pub base_edges: Vec<EdgeId>,
    pub threshold: usize,
}

/// Repeatedly removes the smallest vertex of positive degree at most
/// `threshold` until none is left.
pub fn peel_low_degree(g: &Graph, threshold: usize, ids: &[usize]) -> Peeling {
    let n = g.vertex_count();
    let mut alive = vec![true; g.edge_count()];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut stars = Vec::new();
    while let Some(v) = (0..n).find(|&v| degree[v] > 0 && degree[v] <= threshold) {
        let mut star = Vec::new();
        for &(w, e) in g.incident(v) {
            if alive[e] {
                alive[e] = false;
                degree[v] -= 1;
                degree[w] -= 1;
                star.push(ids[e]);
            }
        }
        star.sort_unstable();
        stars.push((v, star));
    }
    Peeling {
        stars,
        base_edges: (0..g.edge_count()).filter(|&e| alive[e]).collect(),
        threshold,
    }
}

fn low_degree_router(g: &Graph, h: &Graph, ids: &[usize], cap: usize) -> Result<(Router, Peeling)> {
    let delta = h.min_degree();
    if delta == 0 {
        return Err(HgameError::Precondition("low-degree recursion needs delta(H) >= 1".into()));
    }
    let peeling = peel_low_degree(g, 2 * (delta - 1), ids);
    let mut router = Router::new();
    for (_, star) in &peeling.stars {
        router.add(star.clone(), Box::new(StarResponder { edges: star.clone() }));
    }
    if !peeling.base_edges.is_empty() {
        let (base, _) = g.compact_edge_subgraph(&peeling.base_edges);
        let base_ids: Vec<usize> = peeling.base_edges.iter().map(|&e| ids[e]).collect();
        let responder = SolverResponder::for_graph(&base, h, &base_ids, cap).map_err(|err| {
            HgameError::Capability(format!("low-degree base board has no strategy: {err}"))
        })?;
        router.add(base_ids, Box::new(responder));
    }
    Ok((router, peeling))
}

/// Per-vertex mirroring at vertices of degree at most `2(delta(H) - 1)`,
/// peeled recursively, with exact solving on whatever board remains.
pub fn low_degree_recursion_breaker(g: &Graph, h: &Graph) -> Result<RoutedBreaker> {
    let (router, peeling) = low_degree_router(g, h, &identity_ids(g), DEFAULT_CAP)?;
    let note = format!(
        "peeled {} vertices at threshold {}, base board has {} edges",
        peeling.stars.len(),
        peeling.threshold,
        peeling.base_edges.len()
    );
    Ok(RoutedBreaker::new("low-degree", router).with_notes(vec![note]))
}

/// Branch chosen by [`dispatch`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `x < 1/2`: low-degree recursion.
    LowDegree,
    /// `k >= 3`: orientation pairing.
    OrientationDense,
    /// `e_H < v_H^2 / 4`: orientation pairing.
    OrientationSparse,
    /// `2.5 <= m2(H) < 3` with `v_H >= 5`: forest pairing.
    Arboricity,
    /// `H = C4`: forest pairing.
    ArboricityC4,
    /// `H = K4`: exact solving.
    SolverK4,
    /// No constructive branch verified: exact solving.
    SolverFallback,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DispatchReport {
    pub branch: Branch,
    #[serde(with = "crate::rational::as_str")]
    pub m2_h: Ratio,
    #[serde(with = "crate::rational::as_str")]
    pub m_g: Ratio,
    pub k: i64,
    #[serde(with = "crate::rational::as_str")]
    pub x: Ratio,
    /// One line per checked condition, in order.
    pub audit: Vec<String>,
}

fn is_c4(h: &Graph) -> bool {
    h.vertex_count() == 4 && h.edge_count() == 4 && (0..4).all(|v| h.degree(v) == 2) && h.is_connected()
}

fn is_k4(h: &Graph) -> bool {
    h.vertex_count() == 4 && h.edge_count() == 6
}

/// Checks the theorem's preconditions and picks the proof branch, verifying
/// the branch's own condition exactly before committing to it.
pub fn dispatch(g: &Graph, h: &Graph) -> Result<DispatchReport> {
    let vh = h.vertex_count();
    if vh < 4 {
        return Err(HgameError::Precondition(format!("H needs at least 4 vertices, has {vh}")));
    }
    if !is_strictly_2_balanced(h)? {
        return Err(HgameError::Precondition("H is not strictly 2-balanced".into()));
    }
    let (m2_h, _) = two_density(h)?;
    let (m_g, _) = max_density(g);
    if m_g > m2_h {
        return Err(HgameError::Precondition(format!("m(G) = {m_g} exceeds m2(H) = {m2_h}")));
    }
    let k = m2_h.to_integer();
    let x = m2_h - Ratio::from_integer(k);
    let half = Ratio::new(1, 2);
    let mut audit = vec![format!("m(G) = {m_g} <= m2(H) = {m2_h} = {k} + {x}")];
    let orientation_ok = breaker_wins_by_orientation(g, h);
    let arboricity_ok = breaker_wins_by_arboricity(g, h);
    let eh = h.edge_count();
    let branch = if x < half {
        audit.push(format!("(a) x = {x} < 1/2"));
        Branch::LowDegree
    } else if k >= 3 && orientation_ok {
        audit.push(format!("(b) k = {k} >= 3 and ceil(m(G)/2) < m(H)"));
        Branch::OrientationDense
    } else if 4 * eh < vh * vh && orientation_ok {
        audit.push(format!("(c) 4 e_H = {} < v_H^2 = {} and ceil(m(G)/2) < m(H)", 4 * eh, vh * vh));
        Branch::OrientationSparse
    } else if vh >= 5 && m2_h >= Ratio::new(5, 2) && m2_h < Ratio::from_integer(3) && arboricity_ok {
        audit.push(format!("(d) 5/2 <= m2(H) = {m2_h} < 3, v_H = {vh} and ceil(ar(G)/2) < ar(H)"));
        Branch::Arboricity
    } else if is_c4(h) && arboricity_ok {
        audit.push("H = C4 and ceil(ar(G)/2) < ar(H)".into());
        Branch::ArboricityC4
    } else if is_k4(h) {
        audit.push("H = K4: exact solving".into());
        Branch::SolverK4
    } else {
        audit.push("no constructive branch verified: exact solving".into());
        Branch::SolverFallback
    };
    Ok(DispatchReport {
        branch,
        m2_h,
        m_g,
        k,
        x,
        audit,
    })
}

/// A responder realising the dispatched branch on `g`, whose edges are
/// board elements `ids`.
pub fn deterministic_router(
    g: &Graph,
    h: &Graph,
    ids: &[usize],
    cap: usize,
) -> Result<(Router, DispatchReport)> {
    let report = dispatch(g, h)?;
    let mut router = Router::new();
    match report.branch {
        Branch::LowDegree => {
            let (inner, _) = low_degree_router(g, h, ids, cap)?;
            router.add(ids.iter().copied(), Box::new(inner));
        }
        Branch::OrientationDense | Branch::OrientationSparse => {
            router.add(ids.iter().copied(), Box::new(OutStarResponder::new(g, ids)?));
        }
        Branch::Arboricity | Branch::ArboricityC4 => {
            let fd = crate::density::forest_decomposition(g)?;
            router.add(ids.iter().copied(), Box::new(forest_router(g, &fd, ids)));
        }
        Branch::SolverK4 | Branch::SolverFallback => {
            let responder = SolverResponder::for_graph(g, h, ids, cap)?;
            router.add(ids.iter().copied(), Box::new(responder));
        }
    }
    Ok((router, report))
}

/// Breaker for boards with `m(G) <= m2(H)`, `H` strictly 2-balanced on at
/// least 4 vertices.
pub fn deterministic_breaker(g: &Graph, h: &Graph) -> Result<(RoutedBreaker, DispatchReport)> {
    let (router, report) = deterministic_router(g, h, &identity_ids(g), DEFAULT_CAP)?;
    let breaker = RoutedBreaker::new("deterministic", router).with_notes(report.audit.clone());
    Ok((breaker, report))
}

/// Whether Maker's elements inside each forest pair are acyclic.
pub fn maker_pairs_acyclic(g: &Graph, forests: &ForestDecomposition, state: &GameState) -> bool {
    forest_pairs(forests).iter().all(|(a, b)| {
        let mut uf = UnionFind::new(g.vertex_count());
        a.iter()
            .chain(b)
            .filter(|&&e| state.owner(e) == Some(Player::Maker))
            .all(|&e| {
                let (u, v) = g.endpoints(e);
                uf.union(u, v)
            })
    })
}
