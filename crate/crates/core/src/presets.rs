//! Bundled diagrams and the sample Whitehead game.

use crate::diagram::ShadowDiagram;
use crate::game::{GameConfig, Move, Role};
use crate::movelog::parse_move_log;
use crate::pd::parse_pd;

pub const HOPF_PD: &str = include_str!("../fixtures/hopf.pd");
pub const WHITEHEAD_PD: &str = include_str!("../fixtures/whitehead.pd");
pub const WHITEHEAD_RESOLVED_PD: &str = include_str!("../fixtures/whitehead_resolved.pd");
pub const ORIENTED_EXAMPLE_PD: &str = include_str!("../fixtures/oriented_example.pd");
pub const TREFOIL_PD: &str = include_str!("../fixtures/trefoil.pd");
pub const WHITEHEAD_GAME_LOG: &str = include_str!("../fixtures/whitehead_game.log");

pub const PRESET_NAMES: [&str; 2] = ["hopf", "whitehead"];

fn load(text: &str) -> ShadowDiagram {
    parse_pd(text).expect("bundled diagrams parse")
}

pub fn hopf() -> ShadowDiagram {
    load(HOPF_PD)
}

pub fn whitehead() -> ShadowDiagram {
    load(WHITEHEAD_PD)
}

pub fn whitehead_resolved() -> ShadowDiagram {
    load(WHITEHEAD_RESOLVED_PD)
}

pub fn oriented_example() -> ShadowDiagram {
    load(ORIENTED_EXAMPLE_PD)
}

pub fn trefoil() -> ShadowDiagram {
    load(TREFOIL_PD)
}

/// Shadow presets offered to players.
pub fn preset(name: &str) -> Option<ShadowDiagram> {
    match name.to_ascii_lowercase().as_str() {
        "hopf" => Some(hopf()),
        "whitehead" => Some(whitehead()),
        _ => None,
    }
}

pub fn whitehead_game() -> (GameConfig, Vec<Move>) {
    let log = parse_move_log(WHITEHEAD_GAME_LOG).expect("bundled log parses");
    (GameConfig::new(whitehead(), log.first.unwrap_or(Role::Unlinker)), log.moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::replay;
    use crate::simplify::decide_splittability;
    use crate::tangle::IntersectionKind;
    use crate::verdict::HalfInt;

    #[test]
    fn presets_load() {
        let w = whitehead();
        assert_eq!(w.crossing_count(), 5);
        assert_eq!(w.si_crossings(), vec![0]);
        assert_eq!(hopf().nsi_crossings().len(), 2);
        assert_eq!(trefoil().component_count(), 1);
        assert!(preset("Hopf").is_some() && preset("borromean").is_none());
    }

    #[test]
    fn linking_numbers() {
        let d = oriented_example();
        let or = d.canonical_orientation();
        assert_eq!(d.canonical_plk().unwrap(), HalfInt::from_halves(-2));
        assert_eq!(d.classify_crossing(4).unwrap(), IntersectionKind::SelfIntersection);
        assert_eq!(d.crossing_sign(&or, 4).unwrap(), -1);
        let w = whitehead_resolved();
        assert_eq!(w.canonical_plk().unwrap(), HalfInt::ZERO);
        let or = w.canonical_orientation();
        let signs: Vec<i32> = (1..5).map(|c| w.crossing_sign(&or, c).unwrap()).collect();
        assert_eq!(signs[0], signs[1]);
        assert_eq!(signs[2], signs[3]);
        assert_ne!(signs[0], signs[2]);
        assert!(decide_splittability(&w, 10_000).unwrap().is_unknown());
    }

    #[test]
    fn sample_game() {
        let (config, moves) = whitehead_game();
        assert_eq!(moves.len(), 5);
        assert_eq!(replay(&config, &moves).unwrap().winner, Some(Role::Unlinker));
    }
}
