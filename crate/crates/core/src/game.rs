//! Maker–Breaker games on an abstract hypergraph.
//!
//! The board is `0..board_size`; for H-games the elements are edge ids of the
//! host graph and the winning sets are the edge sets of the H-copies. Two
//! [`Game`] implementations decide when Maker has completed a set: the
//! explicit [`WinningSetSystem`] and the implicit [`GraphGame`], which looks
//! for an H-copy through Maker's latest edge and so never enumerates copies
//! on large boards.
//!
//! Strategies see only the [`GameState`]. An illegal move (out of range or
//! already claimed) forfeits the game for the player who made it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::copies::{enumerate_copies, find_copy_through};
use crate::error::{HgameError, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl std::str::FromStr for Player {
    type Err = HgameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maker" => Ok(Player::Maker),
            "breaker" => Ok(Player::Breaker),
            other => Err(HgameError::InvalidInput(format!(
                "expected `maker` or `breaker`, got `{other}`"
            ))),
        }
    }
}

/// The hypergraph of a game: board `0..board_size` and its winning sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemJson", into = "SystemJson")]
pub struct WinningSetSystem {
    board_size: usize,
    sets: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub board_size: usize,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<SystemJson> for WinningSetSystem {
    type Error = HgameError;

    fn try_from(value: SystemJson) -> Result<Self> {
        WinningSetSystem::new(value.board_size, value.sets)
    }
}

impl From<WinningSetSystem> for SystemJson {
    fn from(s: WinningSetSystem) -> Self {
        SystemJson {
            board_size: s.board_size,
            sets: s.sets,
        }
    }
}

impl WinningSetSystem {
    /// Sorts every set, drops duplicates within and across sets, and orders
    /// the sets lexicographically.
    pub fn new(board_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if let Some(&bad) = sets.iter().flatten().find(|&&x| x >= board_size) {
            return Err(HgameError::InvalidInput(format!(
                "winning-set element {bad} is not on a board of {board_size} elements"
            )));
        }
        sets.sort();
        sets.dedup();
        let mut incidence = vec![Vec::new(); board_size];
        for (i, s) in sets.iter().enumerate() {
            for &x in s {
                incidence[x].push(i);
            }
        }
        Ok(WinningSetSystem {
            board_size,
            sets,
            incidence,
        })
    }

    pub fn board_size(&self) -> usize {
        self.board_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Indices of the winning sets containing `x`.
    pub fn sets_containing(&self, x: usize) -> &[usize] {
        &self.incidence[x]
    }

    /// Elements that lie in at least one winning set.
    pub fn live_elements(&self) -> Vec<usize> {
        (0..self.board_size)
            .filter(|&x| !self.incidence[x].is_empty())
            .collect()
    }

    /// Relabels elements by `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.board_size {
            return Err(HgameError::InvalidInput("permutation length differs from board".into()));
        }
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|&x| perm[x]).collect())
            .collect();
        WinningSetSystem::new(self.board_size, sets)
    }

    /// Drops the given elements from the board, renumbering the rest in
    /// order. Sets touching a dropped element are removed with it.
    pub fn without_elements(&self, drop: &[usize]) -> Result<Self> {
        let mut new_id = vec![None; self.board_size];
        let mut next = 0;
        for (x, slot) in new_id.iter_mut().enumerate() {
            if !drop.contains(&x) {
                *slot = Some(next);
                next += 1;
            }
        }
        let sets = self
            .sets
            .iter()
            .filter_map(|s| s.iter().map(|&x| new_id[x]).collect::<Option<Vec<_>>>())
            .collect();
        WinningSetSystem::new(next, sets)
    }

    pub fn without_set(&self, index: usize) -> Result<Self> {
        let mut sets = self.sets.clone();
        sets.remove(index);
        WinningSetSystem::new(self.board_size, sets)
    }
}

/// Board `E(G)` with one winning set per copy of `h`.
pub fn build_h_game(g: &Graph, h: &Graph) -> WinningSetSystem {
    let sets = enumerate_copies(g, h).into_iter().map(|c| c.edge_ids).collect();
    WinningSetSystem::new(g.edge_count(), sets).expect("copy edge ids lie on the board")
}

/// Claims so far plus whose turn it is.
#[derive(Clone, Debug)]
pub struct GameState {
    owner: Vec<Option<Player>>,
    to_move: Player,
    first: Player,
    history: Vec<usize>,
    /// Unclaimed elements in arbitrary order, with positions for O(1) removal.
    pool: Vec<usize>,
    slot: Vec<usize>,
    /// Every element below the cursor is claimed.
    cursor: usize,
}

impl GameState {
    pub fn new(board_size: usize, first: Player) -> Self {
        GameState {
            owner: vec![None; board_size],
            to_move: first,
            first,
            history: Vec::new(),
            pool: (0..board_size).collect(),
            slot: (0..board_size).collect(),
            cursor: 0,
        }
    }

    /// Replays a transcript from the empty board.
    pub fn replay(board_size: usize, first: Player, moves: &[usize]) -> Result<Self> {
        let mut state = GameState::new(board_size, first);
        for &m in moves {
            state.claim(m)?;
        }
        Ok(state)
    }

    pub fn board_size(&self) -> usize {
        self.owner.len()
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn owner(&self, x: usize) -> Option<Player> {
        self.owner.get(x).copied().flatten()
    }

    pub fn is_unclaimed(&self, x: usize) -> bool {
        x < self.owner.len() && self.owner[x].is_none()
    }

    pub fn unclaimed_count(&self) -> usize {
        self.pool.len()
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn last_move(&self) -> Option<usize> {
        self.history.last().copied()
    }

    /// The opponent's most recent move, if the opponent has moved.
    pub fn last_opponent_move(&self) -> Option<usize> {
        let x = self.last_move()?;
        (self.owner[x] == Some(self.to_move.opponent())).then_some(x)
    }

    pub fn elements_of(&self, player: Player) -> Vec<usize> {
        (0..self.owner.len())
            .filter(|&x| self.owner[x] == Some(player))
            .collect()
    }

    pub fn unclaimed(&self) -> Vec<usize> {
        let mut out = self.pool.clone();
        out.sort_unstable();
        out
    }

    pub fn smallest_unclaimed(&self) -> Option<usize> {
        (self.cursor..self.owner.len()).find(|&x| self.owner[x].is_none())
    }

    pub fn random_unclaimed<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        (!self.pool.is_empty()).then(|| self.pool[rng.gen_range(0..self.pool.len())])
    }

    /// Claims `x` for the player to move and passes the turn.
    pub fn claim(&mut self, x: usize) -> Result<()> {
        if !self.is_unclaimed(x) {
            return Err(HgameError::InvalidInput(format!("element {x} is not available")));
        }
        self.owner[x] = Some(self.to_move);
        let i = self.slot[x];
        let last = *self.pool.last().expect("pool holds x");
        self.pool.swap_remove(i);
        if last != x {
            self.slot[last] = i;
        }
        while self.cursor < self.owner.len() && self.owner[self.cursor].is_some() {
            self.cursor += 1;
        }
        self.history.push(x);
        self.to_move = self.to_move.opponent();
        Ok(())
    }
}

pub trait Strategy {
    fn name(&self) -> &str;

    /// An unclaimed element; called only when one exists.
    fn next_move(&mut self, state: &GameState) -> usize;

    /// Free-form diagnostics gathered while playing.
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        (**self).next_move(state)
    }

    fn notes(&self) -> Vec<String> {
        (**self).notes()
    }
}

/// A set completed by Maker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    /// Index into the winning-set list when the game has an explicit one.
    pub set_index: Option<usize>,
    pub elements: Vec<usize>,
}

/// Win detection for a game.
pub trait Game {
    fn board_size(&self) -> usize;

    /// A winning set owned entirely by Maker that contains `x`, checked
    /// right after Maker claims `x`.
    fn completed_through(&self, state: &GameState, x: usize) -> Option<Completion>;

    /// A winning set Maker already owns before any move (the empty set).
    fn completed_at_start(&self) -> Option<Completion> {
        None
    }
}

impl Game for WinningSetSystem {
    fn board_size(&self) -> usize {
        self.board_size
    }

    fn completed_through(&self, state: &GameState, x: usize) -> Option<Completion> {
        self.incidence[x]
            .iter()
            .copied()
            .find(|&i| self.sets[i].iter().all(|&y| state.owner(y) == Some(Player::Maker)))
            .map(|i| Completion {
                set_index: Some(i),
                elements: self.sets[i].clone(),
            })
    }

    fn completed_at_start(&self) -> Option<Completion> {
        self.sets.iter().position(|s| s.is_empty()).map(|i| Completion {
            set_index: Some(i),
            elements: Vec::new(),
        })
    }
}

/// The H-game on `E(G)` with copies found on demand.
#[derive(Clone, Debug)]
pub struct GraphGame {
    pub g: Graph,
    pub h: Graph,
}

impl Game for GraphGame {
    fn board_size(&self) -> usize {
        self.g.edge_count()
    }

    fn completed_through(&self, state: &GameState, x: usize) -> Option<Completion> {
        find_copy_through(&self.g, &self.h, x, |e| state.owner(e) == Some(Player::Maker)).map(|c| {
            Completion {
                set_index: None,
                elements: c.edge_ids,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub attempted: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameResult {
    pub winner: Player,
    pub first: Player,
    /// Legal moves in order; players alternate starting with `first`.
    pub transcript: Vec<usize>,
    pub completed_set: Option<usize>,
    pub completed_elements: Option<Vec<usize>>,
    pub forfeit: Option<Forfeit>,
    pub maker_name: String,
    pub breaker_name: String,
    pub notes: Vec<String>,
}

pub fn play<G, M, B>(game: &G, maker: &mut M, breaker: &mut B, first: Player) -> GameResult
where
    G: Game + ?Sized,
    M: Strategy + ?Sized,
    B: Strategy + ?Sized,
{
    play_from(game, GameState::new(game.board_size(), first), maker, breaker)
}

/// Plays to the end from `state`.
pub fn play_from<G, M, B>(game: &G, mut state: GameState, maker: &mut M, breaker: &mut B) -> GameResult
where
    G: Game + ?Sized,
    M: Strategy + ?Sized,
    B: Strategy + ?Sized,
{
    let finish = |state: GameState,
                  winner: Player,
                  done: Option<Completion>,
                  forfeit: Option<Forfeit>,
                  maker: &M,
                  breaker: &B| {
        let mut notes = maker.notes();
        notes.extend(breaker.notes());
        GameResult {
            winner,
            first: state.first(),
            transcript: state.history().to_vec(),
            completed_set: done.as_ref().and_then(|c| c.set_index),
            completed_elements: done.map(|c| c.elements),
            forfeit,
            maker_name: maker.name().to_string(),
            breaker_name: breaker.name().to_string(),
            notes,
        }
    };
    if let Some(c) = game.completed_at_start() {
        return finish(state, Player::Maker, Some(c), None, maker, breaker);
    }
    while state.unclaimed_count() > 0 {
        let player = state.to_move();
        let x = match player {
            Player::Maker => maker.next_move(&state),
            Player::Breaker => breaker.next_move(&state),
        };
        if state.claim(x).is_err() {
            let forfeit = Some(Forfeit {
                player,
                attempted: x,
            });
            return finish(state, player.opponent(), None, forfeit, maker, breaker);
        }
        if player == Player::Maker {
            if let Some(c) = game.completed_through(&state, x) {
                return finish(state, Player::Maker, Some(c), None, maker, breaker);
            }
        }
    }
    finish(state, Player::Breaker, None, None, maker, breaker)
}

fn pow2_inverse(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// `sum over A of 2^{-|A|}`.
pub fn erdos_selfridge_value(system: &WinningSetSystem) -> BigRational {
    system
        .sets()
        .iter()
        .fold(BigRational::zero(), |acc, s| acc + pow2_inverse(s.len()))
}

/// The criterion for a Breaker-first game: potential below 1.
pub fn es_criterion_breaker_first(system: &WinningSetSystem) -> bool {
    erdos_selfridge_value(system) < BigRational::one()
}

/// Potential Breaker faces after Maker's best opening move: the sets through
/// Maker's element lose one element each. The Breaker-first criterion then
/// applies to the game that remains.
pub fn es_value_after_maker_opening(system: &WinningSetSystem) -> BigRational {
    let base = erdos_selfridge_value(system);
    (0..system.board_size())
        .map(|x| {
            system
                .sets_containing(x)
                .iter()
                .fold(base.clone(), |acc, &i| acc + pow2_inverse(system.sets()[i].len()))
        })
        .max()
        .unwrap_or(base)
}

pub fn es_criterion_maker_first(system: &WinningSetSystem) -> bool {
    es_value_after_maker_opening(system) < BigRational::one()
}

/// Current potential: each set without a Breaker element weighs
/// `2^{-(its unclaimed elements)}`.
pub fn es_potential(system: &WinningSetSystem, state: &GameState) -> BigRational {
    system
        .sets()
        .iter()
        .filter(|s| s.iter().all(|&x| state.owner(x) != Some(Player::Breaker)))
        .fold(BigRational::zero(), |acc, s| {
            acc + pow2_inverse(s.iter().filter(|&&x| state.is_unclaimed(x)).count())
        })
}

/// The unclaimed element of largest potential weight
/// `sum over live A containing x of 2^{-(unclaimed elements of A)}`;
/// ties go to the smallest id.
pub fn es_breaker_move(system: &WinningSetSystem, state: &GameState) -> Result<usize> {
    let first = state
        .smallest_unclaimed()
        .ok_or_else(|| HgameError::Precondition("no unclaimed element".into()))?;
    let residual: Vec<Option<usize>> = system
        .sets()
        .iter()
        .map(|s| {
            let mut open = 0;
            for &x in s {
                match state.owner(x) {
                    Some(Player::Breaker) => return None,
                    None => open += 1,
                    Some(Player::Maker) => {}
                }
            }
            Some(open)
        })
        .collect();
    // Scale every weight by 2^top so the comparison stays in integers.
    let top = residual.iter().flatten().copied().max().unwrap_or(0);
    let weigh = |x: usize| -> BigUint {
        system
            .sets_containing(x)
            .iter()
            .filter_map(|&i| residual[i])
            .fold(BigUint::zero(), |acc, open| acc + (BigUint::one() << (top - open)))
    };
    let mut best = (weigh(first), first);
    for x in (first + 1)..state.board_size() {
        if state.is_unclaimed(x) && !system.sets_containing(x).is_empty() {
            let w = weigh(x);
            if w > best.0 {
                best = (w, x);
            }
        }
    }
    Ok(best.1)
}

/// Breaker playing the potential-maximising move.
#[derive(Clone, Debug)]
pub struct EsBreaker {
    system: WinningSetSystem,
}

impl EsBreaker {
    pub fn new(system: WinningSetSystem) -> Self {
        EsBreaker { system }
    }
}

impl Strategy for EsBreaker {
    fn name(&self) -> &str {
        "es"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        es_breaker_move(&self.system, state).expect("called with an unclaimed element")
    }
}

/// Uniformly random unclaimed element.
#[derive(Clone, Debug)]
pub struct RandomStrategy {
    rng: rand_chacha::ChaCha8Rng,
}

impl RandomStrategy {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        RandomStrategy {
            rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Strategy for RandomStrategy {
    fn name(&self) -> &str {
        "random"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        state.random_unclaimed(&mut self.rng).expect("called with an unclaimed element")
    }
}

/// Always the smallest unclaimed element.
#[derive(Clone, Copy, Debug, Default)]
pub struct SmallestFirst;

impl Strategy for SmallestFirst {
    fn name(&self) -> &str {
        "smallest"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        state.smallest_unclaimed().expect("called with an unclaimed element")
    }
}

/// Maker pushing the Breaker-free set closest to completion.
#[derive(Clone, Debug)]
pub struct GreedyMaker {
    system: WinningSetSystem,
}

impl GreedyMaker {
    pub fn new(system: WinningSetSystem) -> Self {
        GreedyMaker { system }
    }
}

impl Strategy for GreedyMaker {
    fn name(&self) -> &str {
        "greedy"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        let mut best: Option<(usize, usize)> = None;
        for s in self.system.sets() {
            if s.iter().any(|&x| state.owner(x) == Some(Player::Breaker)) {
                continue;
            }
            let open: Vec<usize> = s.iter().copied().filter(|&x| state.is_unclaimed(x)).collect();
            if let Some(&x) = open.first() {
                if best.is_none_or(|b| (open.len(), x) < b) {
                    best = Some((open.len(), x));
                }
            }
        }
        best.map(|b| b.1)
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn h_game_examples() {
        let k3 = Graph::complete(3);
        let s = build_h_game(&k3, &k3);
        assert_eq!((s.board_size(), s.sets().len(), s.sets()[0].len()), (3, 1, 3));
        let s = build_h_game(&Graph::cycle(5), &k3);
        assert_eq!((s.board_size(), s.sets().len()), (5, 0));
        let s = build_h_game(&Graph::k5_minus(), &k3);
        assert_eq!(s.board_size(), 9);
        assert_eq!(s.sets().len(), 7);
        assert!(s.sets().iter().all(|a| a.len() == 3));
    }

    #[test]
    fn system_canonicalises_sets() {
        let s = WinningSetSystem::new(4, vec![vec![2, 1], vec![1, 2], vec![0, 3, 3]]).unwrap();
        assert_eq!(s.sets(), &[vec![0, 3], vec![1, 2]]);
        assert!(WinningSetSystem::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn erdos_selfridge_values() {
        let one = WinningSetSystem::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(erdos_selfridge_value(&one), r(1, 8));
        let k5m = build_h_game(&Graph::k5_minus(), &Graph::complete(3));
        assert_eq!(erdos_selfridge_value(&k5m), r(7, 8));
        let none = WinningSetSystem::new(3, vec![]).unwrap();
        assert_eq!(erdos_selfridge_value(&none), r(0, 1));
        assert!(es_criterion_breaker_first(&k5m));
        // Maker's opening on an edge in three triangles adds 3/8.
        assert_eq!(es_value_after_maker_opening(&k5m), r(10, 8));
        assert!(!es_criterion_maker_first(&k5m));
    }

    #[test]
    fn es_move_prefers_smaller_sets() {
        // {a,b} = {0,1}, {c,d,e} = {2,3,4}.
        let s = WinningSetSystem::new(5, vec![vec![0, 1], vec![2, 3, 4]]).unwrap();
        let state = GameState::new(5, Player::Breaker);
        assert_eq!(es_breaker_move(&s, &state).unwrap(), 0);
    }

    #[test]
    fn es_move_blocks_forced_element() {
        let s = WinningSetSystem::new(4, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let mut state = GameState::new(4, Player::Maker);
        state.claim(0).unwrap();
        state.claim(3).unwrap();
        state.claim(1).unwrap();
        assert_eq!(es_breaker_move(&s, &state).unwrap(), 2);
    }

    #[test]
    fn es_move_with_all_sets_dead() {
        let s = WinningSetSystem::new(4, vec![vec![0, 1]]).unwrap();
        let mut state = GameState::new(4, Player::Breaker);
        state.claim(0).unwrap();
        state.claim(3).unwrap();
        assert_eq!(es_breaker_move(&s, &state).unwrap(), 1);
        state.claim(1).unwrap();
        state.claim(2).unwrap();
        assert!(es_breaker_move(&s, &state).is_err());
    }

    #[test]
    fn play_edge_cases() {
        let empty = WinningSetSystem::new(4, vec![]).unwrap();
        let res = play(&empty, &mut SmallestFirst, &mut SmallestFirst, Player::Maker);
        assert_eq!(res.winner, Player::Breaker);
        assert_eq!(res.transcript.len(), 4);

        let single = WinningSetSystem::new(3, vec![vec![1]]).unwrap();
        let mut greedy = GreedyMaker::new(single.clone());
        let res = play(&single, &mut greedy, &mut SmallestFirst, Player::Maker);
        assert_eq!(res.winner, Player::Maker);
        assert_eq!(res.transcript, vec![1]);
        assert_eq!(res.completed_set, Some(0));

        let trivial = WinningSetSystem::new(2, vec![vec![]]).unwrap();
        let res = play(&trivial, &mut SmallestFirst, &mut SmallestFirst, Player::Breaker);
        assert_eq!(res.winner, Player::Maker);
        assert!(res.transcript.is_empty());
    }

    struct Cheater;

    impl Strategy for Cheater {
        fn name(&self) -> &str {
            "cheater"
        }

        fn next_move(&mut self, _: &GameState) -> usize {
            0
        }
    }

    #[test]
    fn illegal_move_forfeits() {
        let s = WinningSetSystem::new(3, vec![vec![0, 1, 2]]).unwrap();
        let res = play(&s, &mut SmallestFirst, &mut Cheater, Player::Maker);
        assert_eq!(res.winner, Player::Maker);
        assert_eq!(
            res.forfeit,
            Some(Forfeit {
                player: Player::Breaker,
                attempted: 0
            })
        );
        assert_eq!(res.transcript, vec![0]);
    }

    #[test]
    fn graph_game_matches_explicit_system() {
        let g = Graph::k5_minus();
        let h = Graph::complete(3);
        let explicit = build_h_game(&g, &h);
        let implicit = GraphGame { g: g.clone(), h };
        for seed in 0..50 {
            let a = play(
                &explicit,
                &mut RandomStrategy::new(seed),
                &mut RandomStrategy::new(seed + 1000),
                Player::Maker,
            );
            let b = play(
                &implicit,
                &mut RandomStrategy::new(seed),
                &mut RandomStrategy::new(seed + 1000),
                Player::Maker,
            );
            assert_eq!(a.winner, b.winner);
            assert_eq!(a.transcript, b.transcript);
            assert_eq!(a.completed_elements, b.completed_elements);
        }
    }

    #[test]
    fn state_bookkeeping() {
        let mut st = GameState::new(5, Player::Breaker);
        for x in [0, 2, 1] {
            st.claim(x).unwrap();
        }
        assert_eq!(st.smallest_unclaimed(), Some(3));
        assert_eq!(st.unclaimed(), vec![3, 4]);
        assert_eq!(st.elements_of(Player::Breaker), vec![0, 1]);
        assert_eq!(st.elements_of(Player::Maker), vec![2]);
        assert_eq!(st.to_move(), Player::Maker);
        assert_eq!(st.last_opponent_move(), Some(1));
        assert!(st.claim(2).is_err());
    }
}
