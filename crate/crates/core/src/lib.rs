//! Linking-Unlinking game on two-component link shadows.

pub mod build;
pub mod diagram;
pub mod fraction;
pub mod game;
pub mod generate;
pub mod movelog;
pub mod pd;
pub mod presets;
pub mod regions;
pub mod simplify;
pub mod solver;
pub mod strategy;
pub mod sweep;
pub mod tangle;
pub mod verdict;
pub mod verify;
pub mod word;

pub use build::{build_closure, build_rational_shadow, BuildError};
pub use diagram::{CrossingState, Dart, DiagramError, Orientation, Provenance, ShadowDiagram, Shape};
pub use fraction::{tangle_fraction, TangleFraction};
pub use game::{
    apply_move, game_outcome, legal_moves, new_game, replay, replay_state, GameConfig, GameError, GameOutcome, GameState, Move,
    Role,
};
pub use movelog::{
    parse_move_log, render_move_log, shadow_from_pd_file, shadow_from_word, MoveLog, MoveLogError, ShadowSource, SourceError,
};
pub use pd::{parse_pd, render_pd, PdError};
pub use simplify::{decide_splittability, simplify, SimplifyError, Step};
pub use solver::{
    solve_diagram, solve_diagram_with, solve_rational, solve_rational_with, SolveError, SolveOptions, SolveResult, Winner,
};
pub use strategy::{
    anti_r2_response, applicability, applicable_strategies, choose_move, r2_response, Decision, StrategyError, StrategyId,
    StrategyMemory,
};
pub use tangle::{
    classify_syllables, closure_components, count_intersections, decompose_word, rational_splittability, reduce_word,
    ClosureKind, Decomposition, EndpointPairing, IntersectionKind, StringTag, TangleError,
};
pub use verdict::{Certificate, HalfInt, SplitEvidence, Verdict};
pub use verify::{verify_strategy, verify_strategy_with, VerifyOptions, VerifyReport};
pub use word::{parse_word, PseudoTangleWord, Syllable, WordParseError};
