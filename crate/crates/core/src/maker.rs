//! Maker-side constructions: the `H_P` pattern, the triangle opening on a
//! `K5^-` copy, the five-phase Maker for the `H_P`-game and the Maker that
//! plays Erdős–Selfridge on an auxiliary container hypergraph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::audit::expansion_check;
use crate::copies::{enumerate_copies, enumerate_copies_capped, first_copy, HCopy};
use crate::error::{HgameError, Result};
use crate::game::{erdos_selfridge_value, es_breaker_move, GameState, Player, Strategy, WinningSetSystem};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::rational::Ratio;
use crate::solver::{Solver, DEFAULT_CAP};

/// `h` plus a fresh triangle joined to `attach` by a fresh path of length 3.
///
/// The triangle is `v_H, v_H + 1, v_H + 2`; the path runs
/// `v_H - (v_H + 3) - (v_H + 4) - attach`.
pub fn hp_construct(h: &Graph, attach: Vertex) -> Result<Graph> {
    let vh = h.vertex_count();
    if attach >= vh {
        return Err(HgameError::InvalidInput(format!(
            "attach vertex {attach} is not a vertex of H (v_H = {vh})"
        )));
    }
    let t = vh;
    let extra = [(t, t + 1), (t + 1, t + 2), (t, t + 2), (t, t + 3), (t + 3, t + 4), (t + 4, attach)];
    Graph::new(vh + 5, h.edges().iter().copied().chain(extra))
}

/// Maker moves the `K5^-` opening needs against any Breaker.
pub const TRIANGLE_MOVES: u32 = 4;

/// Triangles of the subgraph spanned by `edge_ids`, as sets of `g`-edge ids.
fn triangles_within(g: &Graph, edge_ids: &[EdgeId]) -> Vec<Vec<usize>> {
    let (local, _) = g.compact_edge_subgraph(edge_ids);
    enumerate_copies(&local, &Graph::complete(3))
        .into_iter()
        .map(|c| c.edge_ids.iter().map(|&e| edge_ids[e]).collect())
        .collect()
}

/// Maker building a triangle inside one `K5^-` copy of the board graph,
/// using only that copy's 9 edges.
#[derive(Clone, Debug)]
pub struct TriangleMaker {
    copy: HCopy,
    triangles: Vec<Vec<usize>>,
    solver: Solver,
}

impl TriangleMaker {
    pub fn copy(&self) -> &HCopy {
        &self.copy
    }

    /// The triangle Maker owns inside the copy, if any.
    pub fn owned_triangle(&self, state: &GameState) -> Option<&[usize]> {
        self.triangles
            .iter()
            .find(|t| t.iter().all(|&e| state.owner(e) == Some(Player::Maker)))
            .map(Vec::as_slice)
    }

    /// The next move inside the copy, `None` once no copy edge helps.
    fn copy_move(&mut self, state: &GameState) -> Option<usize> {
        let used = self
            .copy
            .edge_ids
            .iter()
            .filter(|&&e| state.owner(e) == Some(Player::Maker))
            .count() as u32;
        let owner = |e: usize| state.owner(e);
        // Shortest forced win first.
        let budget = TRIANGLE_MOVES.saturating_sub(used);
        (1..=budget)
            .find_map(|b| self.solver.best_move_within(owner, b))
            .or_else(|| self.solver.best_move(owner, Player::Maker))
    }
}

/// The opening on the first `K5^-` copy found in `g`.
pub fn triangle_maker_on_k5minus(g: &Graph) -> Result<TriangleMaker> {
    let copy = first_copy(g, &Graph::k5_minus())
        .ok_or_else(|| HgameError::Precondition("the board graph contains no copy of K5^-".into()))?;
    let triangles = triangles_within(g, &copy.edge_ids);
    let solver = Solver::new(triangles.clone(), |_| None, DEFAULT_CAP)?;
    Ok(TriangleMaker {
        copy,
        triangles,
        solver,
    })
}

impl Strategy for TriangleMaker {
    fn name(&self) -> &str {
        "k5minus-triangle"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        self.copy_move(state)
            .filter(|&e| state.is_unclaimed(e))
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }
}

/// Target sizes of `N1`, `N2`, `N3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseBudgets {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl PhaseBudgets {
    /// `8 / (n p^2)`, `1 / p` and `n / 6`, rounded up.
    pub fn from_formulas(n: usize, p: f64) -> Self {
        let nf = n as f64;
        PhaseBudgets {
            n1: (8.0 / (nf * p * p)).ceil().max(1.0) as usize,
            n2: (1.0 / p).ceil().max(1.0) as usize,
            n3: (nf / 6.0).ceil().max(1.0) as usize,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub budgets: PhaseBudgets,
    /// Largest live board the exact solver takes in phase 5.
    pub solver_cap: usize,
    /// Give up enumerating `H`-copies inside `G[N3]` beyond this many.
    pub copy_limit: usize,
    /// Random vertex sets checked by the expansion audit; 0 skips it.
    pub expansion_samples: usize,
    pub expansion_seed: u64,
}

impl PhaseConfig {
    pub fn for_gnp(n: usize, p: f64) -> Self {
        PhaseConfig {
            budgets: PhaseBudgets::from_formulas(n, p),
            solver_cap: DEFAULT_CAP,
            copy_limit: 200_000,
            expansion_samples: 0,
            expansion_seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseState {
    /// 1 to 5.
    pub phase: u8,
    pub triangle: Option<[Vertex; 3]>,
    pub v1: Option<Vertex>,
    pub n1: BTreeSet<Vertex>,
    pub n2: BTreeSet<Vertex>,
    pub n3: BTreeSet<Vertex>,
    /// Maker moves spent in each phase.
    pub moves: [usize; 5],
    /// Budgets after clamping to what the board offers.
    pub targets: Option<PhaseBudgets>,
    pub failures: Vec<String>,
}

impl PhaseState {
    /// Checks the nesting invariants against Maker's edges in `g`.
    pub fn check(&self, g: &Graph, state: &GameState) -> std::result::Result<(), String> {
        let maker_nbr = |v: Vertex, w: Vertex| {
            g.edge_between(v, w)
                .is_some_and(|e| state.owner(e) == Some(Player::Maker))
        };
        let k: BTreeSet<Vertex> = self.triangle.map(|t| t.into_iter().collect()).unwrap_or_default();
        if let Some(v1) = self.v1 {
            if let Some(&w) = self.n1.iter().find(|&&w| k.contains(&w) || !maker_nbr(v1, w)) {
                return Err(format!("N1 vertex {w} is not a Maker neighbour of v1 outside K"));
            }
        }
        let reach = |w: Vertex, from: &BTreeSet<Vertex>| from.iter().any(|&a| maker_nbr(a, w));
        if let Some(&w) = self.n2.iter().find(|&&w| k.contains(&w) || !reach(w, &self.n1)) {
            return Err(format!("N2 vertex {w} is not a Maker neighbour of N1 outside K"));
        }
        if let Some(&w) = self
            .n3
            .iter()
            .find(|&&w| k.contains(&w) || self.n1.contains(&w) || !reach(w, &self.n2))
        {
            return Err(format!("N3 vertex {w} is not a Maker neighbour of N2 outside N1 and K"));
        }
        Ok(())
    }
}

enum Finisher {
    Solver(Solver),
    Greedy,
}

/// Maker for the `H_P`-game on `g`, playing in five phases: a triangle on a
/// `K5^-` copy, then stars `N1`, `N2`, `N3` grown outward from a triangle
/// vertex, then a copy of `H` inside `G[N3]`.
///
/// Every vertex of `N3` is the end of a Maker path `v1 - N1 - N2 - N3` whose
/// inner vertices avoid `N3` and `K`, so any Maker copy of `H` inside `N3`
/// closes a copy of `H_P`.
pub struct HpPhaseMaker {
    g: Graph,
    h: Graph,
    config: PhaseConfig,
    opening: TriangleMaker,
    state: PhaseState,
    /// Copies of `H` inside `G[N3]` as sets of board edges.
    targets: Vec<Vec<usize>>,
    finisher: Option<Finisher>,
    stalled: bool,
    notes: Vec<String>,
}

pub fn hp_phase_maker(g: &Graph, h: &Graph, config: PhaseConfig) -> Result<HpPhaseMaker> {
    if config.expansion_samples > 0 {
        let n = g.vertex_count() as f64;
        let np = 2.0 * g.edge_count() as f64 / n.max(1.0);
        let report = expansion_check(g, 0.5, np, config.expansion_samples, config.expansion_seed)?;
        if !report.pass {
            return Err(HgameError::Precondition(format!(
                "expansion audit failed at eps = 1/2 on {:?} (ratio {:.3})",
                report.witness, report.worst_ratio
            )));
        }
    }
    let opening = triangle_maker_on_k5minus(g)?;
    Ok(HpPhaseMaker {
        g: g.clone(),
        h: h.clone(),
        config,
        opening,
        state: PhaseState {
            phase: 1,
            ..PhaseState::default()
        },
        targets: Vec::new(),
        finisher: None,
        stalled: false,
        notes: Vec::new(),
    })
}

impl HpPhaseMaker {
    pub fn phase_state(&self) -> &PhaseState {
        &self.state
    }

    fn fail(&mut self, msg: String) {
        self.notes.push(format!("phase {} failed: {msg}", self.state.phase));
        self.state.failures.push(msg);
    }

    fn advance(&mut self) {
        self.state.phase += 1;
        self.notes.push(format!("phase {} begins", self.state.phase));
    }

    fn excluded(&self) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self.state.triangle.map(|t| t.into_iter().collect()).unwrap_or_default();
        out.extend(&self.state.n1);
        out.extend(&self.state.n2);
        out.extend(&self.state.n3);
        out
    }

    /// Unclaimed `(a, w)` edges with `a` in `from` and `w` outside
    /// `excluded`, and the set of such `w`.
    fn frontier(&self, from: &BTreeSet<Vertex>, state: &GameState) -> (Vec<(EdgeId, Vertex)>, BTreeSet<Vertex>) {
        let excluded = self.excluded();
        let mut edges = Vec::new();
        for &a in from {
            for &(w, e) in self.g.incident(a) {
                if !excluded.contains(&w) && state.is_unclaimed(e) {
                    edges.push((e, w));
                }
            }
        }
        edges.sort_unstable();
        let reach = edges.iter().map(|&(_, w)| w).collect();
        (edges, reach)
    }

    fn start_phase2(&mut self, tri: [Vertex; 3], state: &GameState) {
        self.state.triangle = Some(tri);
        // v1: the triangle vertex with the most unclaimed edges leaving K.
        let open = |v: Vertex| {
            self.g
                .incident(v)
                .iter()
                .filter(|&&(w, e)| !tri.contains(&w) && state.is_unclaimed(e))
                .count()
        };
        let v1 = *tri.iter().max_by_key(|&&v| (open(v), std::cmp::Reverse(v))).expect("three vertices");
        self.state.v1 = Some(v1);
        let budgets = self.config.budgets;
        self.state.targets = Some(PhaseBudgets {
            n1: budgets.n1.min(open(v1)),
            ..budgets
        });
        self.notes.push(format!("triangle {tri:?}, v1 = {v1}"));
        self.advance();
    }

    fn set_mut(&mut self, phase: u8) -> &mut BTreeSet<Vertex> {
        match phase {
            2 => &mut self.state.n1,
            3 => &mut self.state.n2,
            _ => &mut self.state.n3,
        }
    }

    fn target_mut(&mut self, phase: u8) -> &mut usize {
        let t = self.state.targets.as_mut().expect("set when phase 1 ends");
        match phase {
            2 => &mut t.n1,
            3 => &mut t.n2,
            _ => &mut t.n3,
        }
    }

    fn grow(&mut self, state: &GameState) -> Option<usize> {
        while (2..=4).contains(&self.state.phase) {
            let phase = self.state.phase;
            let from = match phase {
                2 => BTreeSet::from([self.state.v1.expect("set with the triangle")]),
                3 => self.state.n1.clone(),
                _ => self.state.n2.clone(),
            };
            let (edges, reach) = self.frontier(&from, state);
            let size = self.set_mut(phase).len();
            if size == 0 && phase > 2 {
                // Entering the phase: clamp the target to what is reachable.
                let target = *self.target_mut(phase);
                let clamped = target.min(reach.len());
                if clamped < target {
                    self.notes.push(format!("phase {phase} target clamped from {target} to {clamped}"));
                    *self.target_mut(phase) = clamped;
                }
                if clamped == 0 {
                    self.fail("no unclaimed edge leaves the previous set".into());
                }
            }
            let target = *self.target_mut(phase);
            if size >= target {
                self.advance();
                continue;
            }
            match edges.first() {
                Some(&(e, w)) => {
                    self.set_mut(phase).insert(w);
                    return Some(e);
                }
                None => {
                    self.fail(format!("stuck at {size} of {target} vertices"));
                    self.advance();
                }
            }
        }
        None
    }

    fn enter_phase5(&mut self, state: &GameState) {
        let n3: Vec<Vertex> = self.state.n3.iter().copied().collect();
        let (local, parent) = self.g.induced(&n3);
        match enumerate_copies_capped(&local, &self.h, self.config.copy_limit) {
            Some(copies) => {
                self.targets = copies
                    .into_iter()
                    .map(|c| c.edge_ids.iter().map(|&e| parent[e]).collect())
                    .collect();
            }
            None => self.fail(format!("more than {} copies of H in G[N3]", self.config.copy_limit)),
        }
        let live: Vec<Vec<usize>> = self
            .targets
            .iter()
            .filter(|t| t.iter().all(|&e| state.owner(e) != Some(Player::Breaker)))
            .cloned()
            .collect();
        self.notes.push(format!(
            "G[N3]: {} vertices, {} edges, {} copies of H ({} Breaker-free)",
            n3.len(),
            local.edge_count(),
            self.targets.len(),
            live.len()
        ));
        self.finisher = Some(match Solver::new(live, |e| state.owner(e), self.config.solver_cap) {
            Ok(s) => {
                self.notes.push("phase 5 solved exactly".into());
                Finisher::Solver(s)
            }
            Err(_) => {
                self.notes.push("phase 5 uses greedy copy completion".into());
                Finisher::Greedy
            }
        });
    }

    fn finish(&mut self, state: &GameState) -> Option<usize> {
        if self.finisher.is_none() {
            self.enter_phase5(state);
        }
        let owner = |e: usize| state.owner(e);
        if let Some(Finisher::Solver(s)) = self.finisher.as_mut() {
            if let Some(e) = s.best_move(owner, Player::Maker) {
                return Some(e);
            }
        }
        // Greedy: push the Breaker-free copy closest to completion.
        let mut best: Option<(usize, usize)> = None;
        for t in &self.targets {
            if t.iter().any(|&e| state.owner(e) == Some(Player::Breaker)) {
                continue;
            }
            let open: Vec<usize> = t.iter().copied().filter(|&e| state.is_unclaimed(e)).collect();
            if let Some(&e) = open.first() {
                if best.is_none_or(|b| (open.len(), e) < b) {
                    best = Some((open.len(), e));
                }
            }
        }
        if best.is_none() && !self.stalled {
            self.stalled = true;
            self.fail("no Breaker-free copy of H left in G[N3]".into());
        }
        best.map(|b| b.1)
    }
}

impl Strategy for HpPhaseMaker {
    fn name(&self) -> &str {
        "hp-phase"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        let phase = self.state.phase;
        let pick = if phase == 1 {
            match self.opening.owned_triangle(state) {
                Some(t) => {
                    let mut vs: BTreeSet<Vertex> = BTreeSet::new();
                    for &e in t {
                        let (u, v) = self.g.endpoints(e);
                        vs.insert(u);
                        vs.insert(v);
                    }
                    let vs: Vec<Vertex> = vs.into_iter().collect();
                    self.start_phase2([vs[0], vs[1], vs[2]], state);
                    None
                }
                None => {
                    let e = self.opening.copy_move(state).filter(|&e| state.is_unclaimed(e));
                    if e.is_none() && !self.stalled {
                        self.stalled = true;
                        self.fail("Breaker blocked every triangle of the K5^- copy".into());
                    }
                    e
                }
            }
        } else {
            None
        };
        let pick = pick
            .or_else(|| (2..=4).contains(&self.state.phase).then(|| self.grow(state)).flatten())
            .or_else(|| (self.state.phase == 5).then(|| self.finish(state)).flatten());
        self.state.moves[usize::from(self.state.phase.clamp(1, 5)) - 1] += 1;
        pick.filter(|&e| state.is_unclaimed(e))
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }

    fn notes(&self) -> Vec<String> {
        self.notes.clone()
    }
}

/// Fingerprints `T_i` and containers `C_i` over a board `0..board_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerFamily {
    pub board_size: usize,
    /// Each fingerprint is a tuple of element sets.
    pub fingerprints: Vec<Vec<Vec<usize>>>,
    pub containers: Vec<Vec<usize>>,
}

impl ContainerFamily {
    /// Validates `T_i ⊆ C_i` and that each `C_i` misses at least a
    /// `delta` fraction of the board.
    pub fn new(
        board_size: usize,
        fingerprints: Vec<Vec<Vec<usize>>>,
        containers: Vec<Vec<usize>>,
        delta: Ratio,
    ) -> Result<Self> {
        if fingerprints.len() != containers.len() {
            return Err(HgameError::InvalidInput(format!(
                "{} fingerprints for {} containers",
                fingerprints.len(),
                containers.len()
            )));
        }
        for (i, (t, c)) in fingerprints.iter().zip(&containers).enumerate() {
            let c: BTreeSet<usize> = c.iter().copied().collect();
            if let Some(&x) = c.iter().find(|&&x| x >= board_size) {
                return Err(HgameError::InvalidInput(format!("container {i} has element {x} off the board")));
            }
            if let Some(&x) = t.iter().flatten().find(|x| !c.contains(x)) {
                return Err(HgameError::InvalidInput(format!(
                    "fingerprint {i} has element {x} outside its container"
                )));
            }
            let missing = (board_size - c.len()) as i64;
            if Ratio::from_integer(missing) < delta * Ratio::from_integer(board_size as i64) {
                return Err(HgameError::InvalidInput(format!(
                    "container {i} misses {missing} of {board_size} elements, below the fraction {delta}"
                )));
            }
        }
        Ok(ContainerFamily {
            board_size,
            fingerprints,
            containers,
        })
    }

    /// The exact family of a toy H-game: the maximal H-free edge sets as
    /// containers, each with an empty fingerprint. The board must have at
    /// most 20 edges.
    pub fn of_h_free_sets(g: &Graph, h: &Graph) -> Result<Self> {
        let m = g.edge_count();
        if m > 20 {
            return Err(HgameError::Capability(format!("{m} edges is too many to enumerate subsets")));
        }
        let copies: Vec<u32> = enumerate_copies(g, h)
            .iter()
            .map(|c| c.edge_ids.iter().fold(0u32, |acc, &e| acc | 1 << e))
            .collect();
        let free = |s: u32| copies.iter().all(|&c| c & s != c);
        let full: u32 = if m == 32 { u32::MAX } else { (1 << m) - 1 };
        let containers: Vec<Vec<usize>> = (0..=full)
            .filter(|&s| free(s) && (0..m).all(|e| s & 1 << e != 0 || !free(s | 1 << e)))
            .map(|s| (0..m).filter(|&e| s & 1 << e != 0).collect())
            .collect();
        let fingerprints = vec![Vec::new(); containers.len()];
        ContainerFamily::new(m, fingerprints, containers, Ratio::from_integer(0))
    }

    /// Sets `(board \ C_i) \ removed` for every `i` whose fingerprint avoids
    /// `removed`.
    pub fn auxiliary(&self, removed: &[usize]) -> Result<WinningSetSystem> {
        let removed: BTreeSet<usize> = removed.iter().copied().collect();
        let sets = self
            .fingerprints
            .iter()
            .zip(&self.containers)
            .filter(|(t, _)| t.iter().flatten().all(|x| !removed.contains(x)))
            .map(|(_, c)| {
                let c: BTreeSet<usize> = c.iter().copied().collect();
                (0..self.board_size)
                    .filter(|x| !c.contains(x) && !removed.contains(x))
                    .collect()
            })
            .collect();
        WinningSetSystem::new(self.board_size, sets)
    }
}

/// Maker for the H-game who claims an element of every auxiliary set by
/// playing the potential strategy there. Since every H-free set sits in some
/// container, hitting every container's complement leaves Maker with a
/// copy of `H`.
#[derive(Clone, Debug)]
pub struct ContainerMaker {
    auxiliary: WinningSetSystem,
}

impl ContainerMaker {
    pub fn auxiliary(&self) -> &WinningSetSystem {
        &self.auxiliary
    }
}

/// Refuses unless the auxiliary hypergraph has potential below 1, which is
/// what the potential strategy needs when its opponent, the real Breaker,
/// answers second.
pub fn auxiliary_container_breaker(
    board_size: usize,
    family: &ContainerFamily,
    removed: &[usize],
) -> Result<ContainerMaker> {
    if family.board_size != board_size {
        return Err(HgameError::InvalidInput(format!(
            "family is over {} elements, board has {board_size}",
            family.board_size
        )));
    }
    let auxiliary = family.auxiliary(removed)?;
    let value = erdos_selfridge_value(&auxiliary);
    if value >= num_traits::One::one() {
        return Err(HgameError::Precondition(format!(
            "auxiliary potential {value} is not below 1"
        )));
    }
    Ok(ContainerMaker { auxiliary })
}

impl Strategy for ContainerMaker {
    fn name(&self) -> &str {
        "container-aux"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        // The potential strategy sees Maker as its Breaker.
        let mirrored = mirror(state);
        es_breaker_move(&self.auxiliary, &mirrored)
            .ok()
            .filter(|&x| state.is_unclaimed(x))
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }
}

/// The same position with the players' roles swapped.
fn mirror(state: &GameState) -> GameState {
    let first = state.first().opponent();
    GameState::replay(state.board_size(), first, state.history()).expect("a legal history stays legal")
}
