mod common;

use hgame_core::game::{erdos_selfridge_value, play, EsBreaker, RandomStrategy};
use hgame_core::solver::{optimal_strategy, solve};
use hgame_core::{Player, WinningSetSystem};
use num_traits::One;
use proptest::prelude::*;

fn arb_system() -> impl Strategy<Value = WinningSetSystem> {
    any::<u64>().prop_map(|seed| common::random_system(&mut common::rng(seed), 10, 7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_matches_minimax(system in arb_system(), maker_first in any::<bool>()) {
        let first = if maker_first { Player::Maker } else { Player::Breaker };
        let expected = common::Minimax::new(&system, first).winner();
        prop_assert_eq!(solve(&system, first).unwrap().winner, expected);
    }

    #[test]
    fn potential_below_one_is_a_breaker_win(system in arb_system()) {
        prop_assume!(erdos_selfridge_value(&system) < num_rational::BigRational::one());
        prop_assert_eq!(common::Minimax::new(&system, Player::Breaker).winner(), Player::Breaker);
        let mut maker = optimal_strategy(&system, Player::Maker).unwrap();
        let mut breaker = EsBreaker::new(system.clone());
        let r = play(&system, &mut maker, &mut breaker, Player::Breaker);
        prop_assert_eq!(r.winner, Player::Breaker);
    }

    #[test]
    fn relabelling_keeps_the_winner(system in arb_system(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..system.board_size()).collect();
        perm.shuffle(&mut common::rng(seed));
        let relabelled = system.permuted(&perm).unwrap();
        for first in [Player::Maker, Player::Breaker] {
            prop_assert_eq!(solve(&system, first).unwrap().winner, solve(&relabelled, first).unwrap().winner);
        }
    }

    #[test]
    fn optimal_player_wins_against_random(system in arb_system(), seed in any::<u64>()) {
        let value = solve(&system, Player::Maker).unwrap().winner;
        let r = match value {
            Player::Maker => {
                let mut maker = optimal_strategy(&system, Player::Maker).unwrap();
                play(&system, &mut maker, &mut RandomStrategy::new(seed), Player::Maker)
            }
            Player::Breaker => {
                let mut breaker = optimal_strategy(&system, Player::Breaker).unwrap();
                play(&system, &mut RandomStrategy::new(seed), &mut breaker, Player::Maker)
            }
        };
        prop_assert_eq!(r.winner, value);
    }
}
