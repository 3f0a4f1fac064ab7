//! Exact Maker–Breaker solver by memoised backward induction.
//!
//! A position is reduced to its residual family: for every winning set
//! without a Breaker element, the set of its still unclaimed elements. Sets
//! that contain another residual set are dropped (completing the larger one
//! completes the smaller), and elements outside every residual set are dead:
//! claiming one is a pass, and a pass never helps either player. What is
//! left is a sorted antichain of bitmasks over at most [`DEFAULT_CAP`] live
//! elements, which is the memo key together with the side to move.
//!
//! The solver never consults the Erdős–Selfridge potential, so it can serve
//! as an independent oracle for that criterion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{HgameError, Result};
use crate::game::{GameState, Player, Strategy, WinningSetSystem};

/// Largest number of live elements the solver accepts.
pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub winner: Player,
    /// The move optimal play makes first: a winning move for a winning side,
    /// otherwise the solver's heuristic choice. `None` if nothing is live.
    pub first_move: Option<usize>,
    pub node_count: u64,
    pub live_elements: usize,
}

/// Reduced position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Position {
    /// Maker already owns a whole winning set.
    MakerWon,
    Family(Vec<u64>),
}

type Key = (bool, Box<[u64]>);

/// Memoising solver over a fixed collection of winning sets. Element ids are
/// whatever the caller uses (global edge ids for subgames).
#[derive(Clone, Debug)]
pub struct Solver {
    sets: Vec<Vec<usize>>,
    elements: Vec<usize>,
    bit_of: HashMap<usize, u32>,
    memo: HashMap<Key, bool>,
    budget_memo: HashMap<(u32, Box<[u64]>), bool>,
    nodes: u64,
}

fn normalize(mut family: Vec<u64>) -> Vec<u64> {
    family.sort_unstable_by_key(|&s| (s.count_ones(), s));
    family.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|&k| k & s == k) {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

fn union(family: &[u64]) -> u64 {
    family.iter().fold(0, |acc, &s| acc | s)
}

fn bits(mask: u64) -> impl Iterator<Item = u32> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

/// Moves ordered by how much of the family they touch, smaller sets
/// weighing more; ties go to the lower bit.
fn ordered_moves(family: &[u64]) -> Vec<u32> {
    let mut scored: Vec<(u64, u32)> = bits(union(family))
        .map(|b| {
            let w = family
                .iter()
                .filter(|&&s| s >> b & 1 == 1)
                .map(|&s| 1u64 << (40 - s.count_ones()))
                .sum::<u64>();
            (w, b)
        })
        .collect();
    scored.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().map(|(_, b)| b).collect()
}

fn maker_move(family: &[u64], b: u32) -> Vec<u64> {
    normalize(family.iter().map(|&s| s & !(1u64 << b)).collect())
}

fn breaker_move(family: &[u64], b: u32) -> Vec<u64> {
    family.iter().copied().filter(|&s| s >> b & 1 == 0).collect()
}

impl Solver {
    /// Prepares a solver for the position given by `owner`. Elements dead in
    /// that position are ignored for the rest of the game.
    pub fn new<F>(sets: Vec<Vec<usize>>, owner: F, cap: usize) -> Result<Solver>
    where
        F: Fn(usize) -> Option<Player>,
    {
        let cap = cap.min(63);
        let mut elements: Vec<usize> = sets
            .iter()
            .filter(|s| s.iter().all(|&x| owner(x) != Some(Player::Breaker)))
            .flatten()
            .copied()
            .filter(|&x| owner(x).is_none())
            .collect();
        elements.sort_unstable();
        elements.dedup();
        if elements.len() > cap {
            return Err(HgameError::Capability(format!(
                "{} live elements exceed the solver cap of {cap}",
                elements.len()
            )));
        }
        let bit_of = elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        Ok(Solver {
            sets,
            elements,
            bit_of,
            memo: HashMap::new(),
            budget_memo: HashMap::new(),
            nodes: 0,
        })
    }

    pub fn for_system(system: &WinningSetSystem, cap: usize) -> Result<Solver> {
        Solver::new(system.sets().to_vec(), |_| None, cap)
    }

    pub fn live_count(&self) -> usize {
        self.elements.len()
    }

    pub fn node_count(&self) -> u64 {
        self.nodes
    }

    pub fn element(&self, bit: u32) -> usize {
        self.elements[bit as usize]
    }

    pub fn position<F>(&self, owner: F) -> Position
    where
        F: Fn(usize) -> Option<Player>,
    {
        let mut family = Vec::new();
        for s in &self.sets {
            let mut mask = 0u64;
            let mut live = true;
            for &x in s {
                match owner(x) {
                    Some(Player::Breaker) => {
                        live = false;
                        break;
                    }
                    Some(Player::Maker) => {}
                    None => {
                        if let Some(&b) = self.bit_of.get(&x) {
                            mask |= 1 << b;
                        } else {
                            // Unclaimed but dead at construction: cannot be
                            // in a live set, so this set was already dead.
                            live = false;
                            break;
                        }
                    }
                }
            }
            if live {
                if mask == 0 {
                    return Position::MakerWon;
                }
                family.push(mask);
            }
        }
        Position::Family(normalize(family))
    }

    /// Whether Maker wins from `family` with the given side to move.
    pub fn maker_wins(&mut self, family: &[u64], maker_to_move: bool) -> bool {
        self.nodes += 1;
        if family.is_empty() {
            return false;
        }
        if family[0] == 0 {
            return true;
        }
        let singles: Vec<u64> = family.iter().copied().filter(|s| s.count_ones() == 1).collect();
        if maker_to_move {
            if !singles.is_empty() {
                return true;
            }
        } else if singles.len() >= 2 {
            return true;
        }
        let key: Key = (maker_to_move, family.into());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let value = if maker_to_move {
            ordered_moves(family)
                .into_iter()
                .any(|b| self.maker_wins(&maker_move(family, b), false))
        } else if let Some(&s) = singles.first() {
            let b = s.trailing_zeros();
            self.maker_wins(&breaker_move(family, b), true)
        } else {
            ordered_moves(family)
                .into_iter()
                .all(|b| self.maker_wins(&breaker_move(family, b), true))
        };
        self.memo.insert(key, value);
        value
    }

    /// Whether Maker, to move, can complete a set within `budget` of his own
    /// moves against every Breaker reply.
    pub fn maker_wins_within(&mut self, family: &[u64], budget: u32) -> bool {
        self.nodes += 1;
        if family.is_empty() || budget == 0 {
            return false;
        }
        if family.iter().any(|s| s.count_ones() <= 1) {
            return true;
        }
        let key = (budget, Box::<[u64]>::from(family));
        if let Some(&v) = self.budget_memo.get(&key) {
            return v;
        }
        let value = ordered_moves(family).into_iter().any(|b| {
            let after = maker_move(family, b);
            if after.iter().any(|&s| s == 0) {
                return true;
            }
            if after.is_empty() {
                return false;
            }
            let replies = bits(union(&after)).collect::<Vec<_>>();
            replies
                .into_iter()
                .all(|r| self.maker_wins_within(&breaker_move(&after, r), budget - 1))
        });
        self.budget_memo.insert(key, value);
        value
    }

    /// The move `mover` should make: a winning move if one exists, else the
    /// highest-weight live element. `None` when no live element remains.
    pub fn best_move<F>(&mut self, owner: F, mover: Player) -> Option<usize>
    where
        F: Fn(usize) -> Option<Player>,
    {
        let family = match self.position(owner) {
            Position::MakerWon => return None,
            Position::Family(f) => f,
        };
        let moves = ordered_moves(&family);
        let chosen = match mover {
            Player::Maker => moves
                .iter()
                .copied()
                .find(|&b| self.maker_wins(&maker_move(&family, b), false)),
            Player::Breaker => moves
                .iter()
                .copied()
                .find(|&b| !self.maker_wins(&breaker_move(&family, b), true)),
        };
        chosen.or(moves.first().copied()).map(|b| self.element(b))
    }

    /// A Maker move that completes a set within `budget` moves, if any.
    pub fn best_move_within<F>(&mut self, owner: F, budget: u32) -> Option<usize>
    where
        F: Fn(usize) -> Option<Player>,
    {
        let family = match self.position(owner) {
            Position::MakerWon => return None,
            Position::Family(f) => f,
        };
        if budget == 0 {
            return None;
        }
        let moves = ordered_moves(&family);
        let found = moves.iter().copied().find(|&b| {
            let after = maker_move(&family, b);
            after.iter().any(|&s| s == 0)
                || (!after.is_empty()
                    && bits(union(&after))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .all(|r| self.maker_wins_within(&breaker_move(&after, r), budget - 1)))
        });
        found.map(|b| self.element(b))
    }
}

/// Solves the game from the empty board.
pub fn solve(system: &WinningSetSystem, first: Player) -> Result<SolveOutcome> {
    solve_position(system, &GameState::new(system.board_size(), first), DEFAULT_CAP)
}

pub fn solve_with_cap(system: &WinningSetSystem, first: Player, cap: usize) -> Result<SolveOutcome> {
    solve_position(system, &GameState::new(system.board_size(), first), cap)
}

/// Solves from an arbitrary position.
pub fn solve_position(system: &WinningSetSystem, state: &GameState, cap: usize) -> Result<SolveOutcome> {
    let owner = |x| state.owner(x);
    let mut solver = Solver::new(system.sets().to_vec(), owner, cap)?;
    let family = match solver.position(owner) {
        Position::MakerWon => {
            return Ok(SolveOutcome {
                winner: Player::Maker,
                first_move: None,
                node_count: 0,
                live_elements: solver.live_count(),
            })
        }
        Position::Family(f) => f,
    };
    let maker_to_move = state.to_move() == Player::Maker;
    let winner = if solver.maker_wins(&family, maker_to_move) {
        Player::Maker
    } else {
        Player::Breaker
    };
    let first_move = solver.best_move(owner, state.to_move());
    Ok(SolveOutcome {
        winner,
        first_move,
        node_count: solver.node_count(),
        live_elements: solver.live_count(),
    })
}

/// Plays solver moves for one side; the smallest unclaimed element when
/// nothing is live.
#[derive(Clone, Debug)]
pub struct SolverStrategy {
    solver: Solver,
    player: Player,
}

impl SolverStrategy {
    pub fn new(solver: Solver, player: Player) -> Self {
        SolverStrategy { solver, player }
    }

    pub fn solver_mut(&mut self) -> &mut Solver {
        &mut self.solver
    }
}

impl Strategy for SolverStrategy {
    fn name(&self) -> &str {
        "solver"
    }

    fn next_move(&mut self, state: &GameState) -> usize {
        self.solver
            .best_move(|x| state.owner(x), self.player)
            .filter(|&x| state.is_unclaimed(x))
            .or_else(|| state.smallest_unclaimed())
            .expect("called with an unclaimed element")
    }
}

/// The optimal strategy for `player` in `system`.
pub fn optimal_strategy(system: &WinningSetSystem, player: Player) -> Result<SolverStrategy> {
    optimal_strategy_with_cap(system, player, DEFAULT_CAP)
}

pub fn optimal_strategy_with_cap(
    system: &WinningSetSystem,
    player: Player,
    cap: usize,
) -> Result<SolverStrategy> {
    Ok(SolverStrategy::new(Solver::for_system(system, cap)?, player))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_h_game, play};
    use crate::graph::Graph;

    #[test]
    fn normalization_drops_supersets() {
        assert_eq!(normalize(vec![0b111, 0b011, 0b110, 0b011]), vec![0b011, 0b110]);
    }

    #[test]
    fn k5_minus_triangle_game_is_a_maker_win() {
        let s = build_h_game(&Graph::k5_minus(), &Graph::complete(3));
        let out = solve(&s, Player::Maker).unwrap();
        assert_eq!(out.winner, Player::Maker);
        assert!(out.first_move.is_some());
    }

    #[test]
    fn single_and_double_triangle_are_breaker_wins() {
        let k3 = Graph::complete(3);
        let s = build_h_game(&k3, &k3);
        assert_eq!(solve(&s, Player::Maker).unwrap().winner, Player::Breaker);
        let two = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let s = build_h_game(&two, &k3);
        assert_eq!(solve(&s, Player::Maker).unwrap().winner, Player::Breaker);
    }

    #[test]
    fn k4_triangle_game_is_a_breaker_win() {
        // K5 minus an edge is the smallest board Maker wins on.
        let s = build_h_game(&Graph::complete(4), &Graph::complete(3));
        assert_eq!(solve(&s, Player::Maker).unwrap().winner, Player::Breaker);
        let k5 = build_h_game(&Graph::complete(5), &Graph::complete(3));
        assert_eq!(solve(&k5, Player::Breaker).unwrap().winner, Player::Maker);
    }

    #[test]
    fn cap_is_enforced() {
        let s = WinningSetSystem::new(30, vec![(0..30).collect()]).unwrap();
        assert!(matches!(solve(&s, Player::Maker), Err(HgameError::Capability(_))));
        assert!(solve_with_cap(&s, Player::Maker, 30).is_ok());
    }

    #[test]
    fn forced_breaker_reply() {
        let s = WinningSetSystem::new(3, vec![vec![0, 2]]).unwrap();
        let out = solve(&s, Player::Breaker).unwrap();
        assert_eq!(out.winner, Player::Breaker);
        assert!(matches!(out.first_move, Some(0) | Some(2)));
    }

    #[test]
    fn optimal_players_reproduce_solved_value() {
        let s = build_h_game(&Graph::k5_minus(), &Graph::complete(3));
        let mut maker = optimal_strategy(&s, Player::Maker).unwrap();
        let mut breaker = optimal_strategy(&s, Player::Breaker).unwrap();
        assert_eq!(play(&s, &mut maker, &mut breaker, Player::Maker).winner, Player::Maker);
    }

    #[test]
    fn budgeted_search() {
        let s = build_h_game(&Graph::k5_minus(), &Graph::complete(3));
        let mut solver = Solver::for_system(&s, DEFAULT_CAP).unwrap();
        let Position::Family(f) = solver.position(|_| None) else {
            panic!("fresh board")
        };
        assert!(solver.maker_wins_within(&f, 4));
        assert!(!solver.maker_wins_within(&f, 2));
    }
}
