//! Randomized invariants.

use linkgame::fraction::tangle_fraction;
use linkgame::generate::{random_resolution, random_two_component_shadow};
use linkgame::simplify::canonical_code;
use linkgame::solver::{solve_rational_with, SolveOptions};
use linkgame::tangle::{apply_statement, trace_syllable_kinds, Statement};
use linkgame::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nets() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-4i32..=4, 1..6)
}

fn sizes() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=6, 1..9)
}

fn split(word: &PseudoTangleWord) -> Option<bool> {
    rational_splittability(word).ok().and_then(|v| v.definite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn statements_keep_the_verdict(nets in nets()) {
        let word = PseudoTangleWord::from_nets(&nets);
        let Some(before) = split(&word) else { return Ok(()) };
        for st in Statement::ALL {
            for pos in 0..nets.len() {
                if let Some(next) = apply_statement(word.syllables(), st, pos) {
                    let next = PseudoTangleWord::new(next);
                    prop_assert_eq!(split(&next), Some(before), "{:?} at {} on {}", st, pos, word);
                }
            }
        }
        prop_assert_eq!(split(&reduce_word(&word)), Some(before));
    }

    #[test]
    fn mirroring_negates_the_fraction(nets in nets()) {
        let word = PseudoTangleWord::from_nets(&nets);
        prop_assert_eq!(tangle_fraction(&word.mirror()), tangle_fraction(&word).negate());
        prop_assert_eq!(split(&word.mirror()), split(&word));
    }

    #[test]
    fn classification_rules_match_tracing(sizes in sizes()) {
        let word = PseudoTangleWord::shadow(&sizes);
        prop_assert_eq!(classify_syllables(&word), trace_syllable_kinds(&word));
        let (nsi, _) = count_intersections(&word);
        prop_assert_eq!(nsi % 2 == 0, closure_components(&word).1.is_some());
    }

    #[test]
    fn moves_shift_plk_by_half_on_nsi_only(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shadow = random_two_component_shadow(&mut rng, 9, 0);
        let kinds = shadow.intersection_kinds();
        let mut state = new_game(&GameConfig::new(shadow, Role::Linker)).unwrap();
        let mut unresolved = state.diagram().unresolved_crossings().len();
        while !state.is_terminal() {
            prop_assert_eq!(state.legal_moves().len(), 2 * unresolved);
            let mv = *state.legal_moves().choose(&mut rng).unwrap();
            let next = state.apply_move(mv).unwrap();
            let delta = (next.pseudo_linking_number() + -state.pseudo_linking_number()).abs();
            let expected = if kinds[mv.crossing].is_self() { HalfInt::ZERO } else { HalfInt(1) };
            prop_assert_eq!(delta, expected);
            unresolved -= 1;
            state = next;
        }
        prop_assert!(state.outcome().unwrap().is_some());
    }

    #[test]
    fn pd_round_trip_keeps_the_diagram(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shadow = random_two_component_shadow(&mut rng, 10, 0);
        let d = random_resolution(&mut rng, &shadow);
        let back = parse_pd(&render_pd(&d)).unwrap();
        prop_assert_eq!(canonical_code(&back), canonical_code(&d));
        prop_assert_eq!(back.canonical_plk().unwrap().abs(), d.canonical_plk().unwrap().abs());
        prop_assert_eq!(back.nsi_crossings().len() % 2, 0);
    }

    #[test]
    fn search_options_do_not_change_winners(sizes in prop::collection::vec(0u32..=3, 1..4), linker_first in any::<bool>()) {
        let word = PseudoTangleWord::shadow(&sizes);
        let Some(closure) = closure_components(&word).1 else { return Ok(()) };
        let first = if linker_first { Role::Linker } else { Role::Unlinker };
        let base = solve_rational(&word, closure, first).unwrap();
        for (memo, ordering) in [(false, false), (false, true), (true, false)] {
            let opts = SolveOptions { memo, ordering, ..SolveOptions::default() };
            prop_assert_eq!(solve_rational_with(&word, closure, first, &opts).unwrap().winner, base.winner);
        }
        let shadow = build_rational_shadow(&word, closure).unwrap();
        let out = replay(&GameConfig::new(shadow, first), &base.principal_variation).unwrap();
        prop_assert_eq!(out.winner, base.winning_role);
    }

    #[test]
    fn strategy_choice_is_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shadow = random_two_component_shadow(&mut rng, 8, 2);
        let si_odd = shadow.si_crossings().len() % 2 == 1;
        let (id, first) = if si_odd { (StrategyId::LinkingFirst, Role::Linker) } else { (StrategyId::LinkingSecond, Role::Unlinker) };
        let config = GameConfig::new(shadow, first);
        let mut memory = StrategyMemory::new(id, &config).unwrap();
        let mut state = new_game(&config).unwrap();
        while !state.is_terminal() {
            let mv = if state.mover() == Role::Linker {
                let (a, m) = choose_move(&state, &memory).unwrap();
                let (b, _) = choose_move(&state, &memory).unwrap();
                prop_assert_eq!(&a, &b);
                memory = m;
                a.mv
            } else {
                *state.legal_moves().choose(&mut rng).unwrap()
            };
            state = state.apply_move(mv).unwrap();
            if memory.nsi_replies > 0 && state.mover() == Role::Unlinker {
                prop_assert_eq!(state.pseudo_linking_number().abs(), HalfInt(2));
            }
        }
        prop_assert_eq!(state.outcome().unwrap().unwrap().winner, Some(Role::Linker));
    }
}
