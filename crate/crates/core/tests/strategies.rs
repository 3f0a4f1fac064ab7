mod common;

use hgame_core::breaker::{
    arboricity_pairing_breaker, breaker_wins_by_arboricity, breaker_wins_by_orientation, deterministic_breaker,
    orientation_pairing_breaker,
};
use hgame_core::game::{build_h_game, play, GraphGame, RandomStrategy};
use hgame_core::graph::{gnp_sample, SampleSpec};
use hgame_core::solver::optimal_strategy;
use hgame_core::{Graph, Player, Ratio};

fn boards(h: &Graph, m2: Ratio, want: usize) -> Vec<Graph> {
    (0..5000u64)
        .filter_map(|s| common::qualifying_board(s, h, m2, 14))
        .take(want)
        .collect()
}

#[test]
fn deterministic_breaker_holds_on_qualifying_boards() {
    for (h, m2) in [(Graph::cycle(4), Ratio::new(3, 2)), (Graph::complete(4), Ratio::new(5, 2))] {
        let found = boards(&h, m2, 12);
        assert!(!found.is_empty());
        for g in found {
            let system = build_h_game(&g, &h);
            let game = GraphGame { g: g.clone(), h: h.clone() };
            let mut maker = optimal_strategy(&system, Player::Maker).unwrap();
            let (mut breaker, report) = deterministic_breaker(&g, &h).unwrap();
            let r = play(&game, &mut maker, &mut breaker, Player::Maker);
            assert_eq!(r.winner, Player::Breaker, "{:?} on {:?}", report.branch, g.edges());
            for seed in 0..5 {
                let (mut breaker, _) = deterministic_breaker(&g, &h).unwrap();
                let r = play(&game, &mut RandomStrategy::new(seed), &mut breaker, Player::Maker);
                assert_eq!(r.winner, Player::Breaker);
            }
        }
    }
}

#[test]
fn pairing_predicates_are_sound() {
    let patterns = [Graph::cycle(4), Graph::complete(4), Graph::cycle(5)];
    let mut hits = 0;
    for seed in 0..300u64 {
        let h = &patterns[seed as usize % 3];
        let g = common::prune_to_copies(&gnp_sample(&SampleSpec::new(7, 0.45, seed).unwrap()), h);
        if g.edge_count() == 0 || g.edge_count() > 16 {
            continue;
        }
        let system = build_h_game(&g, h);
        let game = GraphGame { g: g.clone(), h: h.clone() };
        if breaker_wins_by_orientation(&g, h) {
            hits += 1;
            assert_eq!(common::Minimax::new(&system, Player::Maker).winner(), Player::Breaker);
            let mut maker = optimal_strategy(&system, Player::Maker).unwrap();
            let mut breaker = orientation_pairing_breaker(&g, h).unwrap();
            assert_eq!(play(&game, &mut maker, &mut breaker, Player::Maker).winner, Player::Breaker);
        }
        if breaker_wins_by_arboricity(&g, h) {
            hits += 1;
            assert_eq!(common::Minimax::new(&system, Player::Maker).winner(), Player::Breaker);
            let mut maker = optimal_strategy(&system, Player::Maker).unwrap();
            let mut breaker = arboricity_pairing_breaker(&g, h).unwrap();
            assert_eq!(play(&game, &mut maker, &mut breaker, Player::Maker).winner, Player::Breaker);
        }
    }
    assert!(hits > 0);
}
