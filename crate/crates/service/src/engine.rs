//! Move choice for the engine and for hints: a strategy when one applies,
//! else a bounded solve, else the lowest-id legal move.

use linkgame::{
    applicable_strategies, choose_move, solve_diagram_with, GameConfig, GameState, Move, Role, SolveOptions, StrategyId,
    StrategyMemory,
};
use serde::{Deserialize, Serialize};

use crate::view::MoveView;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum EnginePolicy {
    /// Strategy, then bounded solver, then lowest-id legal move.
    #[default]
    Auto,
    /// Like `Auto` with a fixed strategy.
    Strategy { id: StrategyId },
    /// Bounded solver, then lowest-id legal move.
    Solver,
    /// Always the lowest-id legal move.
    Lowest,
    /// The listed moves in order; lowest-id legal move once they run out or
    /// become illegal.
    Scripted { moves: Vec<MoveView> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveSource {
    Strategy,
    Solver,
    Scripted,
    /// No strategy or solve was available.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub mv: Move,
    pub source: MoveSource,
    pub strategy: Option<StrategyId>,
    pub rationale: String,
}

/// First strategy that applies and plays for `role`.
pub fn strategy_for(config: &GameConfig, role: Role) -> Option<StrategyId> {
    applicable_strategies(config).into_iter().find(|id| id.role(config.first_mover) == role)
}

fn by_strategy(config: &GameConfig, state: &GameState, id: StrategyId) -> Option<Choice> {
    let memory = StrategyMemory::after(id, config, state.history()).ok()?;
    let (decision, _) = choose_move(state, &memory).ok()?;
    state.check_move(decision.mv).ok()?;
    Some(Choice { mv: decision.mv, source: MoveSource::Strategy, strategy: Some(id), rationale: decision.rationale })
}

fn by_solver(state: &GameState, bound: usize) -> Option<Choice> {
    let options = SolveOptions { bound, budget: state.budget(), ..SolveOptions::default() };
    let result = solve_diagram_with(state, &options).ok()?;
    let mv = *result.principal_variation.first()?;
    Some(Choice { mv, source: MoveSource::Solver, strategy: None, rationale: format!("solver: {}", result.summary()) })
}

fn lowest(state: &GameState) -> Option<Choice> {
    let mv = *state.legal_moves().first()?;
    Some(Choice { mv, source: MoveSource::Fallback, strategy: None, rationale: "lowest-id legal move".into() })
}

/// Move for the side to move. `scripted_index` counts the moves this side
/// already made, for scripted policies.
pub fn choose(
    policy: &EnginePolicy,
    strategy: Option<StrategyId>,
    config: &GameConfig,
    state: &GameState,
    bound: usize,
    scripted_index: usize,
) -> Option<Choice> {
    if state.is_terminal() {
        return None;
    }
    let solve = || by_solver(state, bound);
    let strat = || strategy.and_then(|id| by_strategy(config, state, id));
    match policy {
        EnginePolicy::Auto | EnginePolicy::Strategy { .. } => strat().or_else(solve).or_else(|| lowest(state)),
        EnginePolicy::Solver => solve().or_else(|| lowest(state)),
        EnginePolicy::Lowest => lowest(state),
        EnginePolicy::Scripted { moves } => moves
            .get(scripted_index)
            .and_then(|m| m.to_move())
            .filter(|&mv| state.check_move(mv).is_ok())
            .map(|mv| Choice { mv, source: MoveSource::Scripted, strategy: None, rationale: "scripted move".into() })
            .or_else(|| lowest(state)),
    }
}
