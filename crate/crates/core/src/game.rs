//! Rules of the game: turn order, legal moves, terminal evaluation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{CrossingState, DiagramError, ShadowDiagram};
use crate::simplify::{decide_splittability, SimplifyError};
use crate::tangle::{rational_splittability, TangleError};
use crate::verdict::{HalfInt, Verdict};

/// Node budget for the simplification search used on diagrams without a
/// rational word.
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Linker,
    Unlinker,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Linker => Role::Unlinker,
            Role::Unlinker => Role::Linker,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Linker => "Linker",
            Role::Unlinker => "Unlinker",
        })
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linker" | "l" => Ok(Role::Linker),
            "unlinker" | "u" => Ok(Role::Unlinker),
            other => Err(format!("unknown role '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub crossing: usize,
    pub resolution: CrossingState,
}

impl Move {
    pub fn new(crossing: usize, resolution: CrossingState) -> Self {
        Move { crossing, resolution }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m {} {}", self.crossing, self.resolution.marker())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("game shadows must have every crossing unresolved (crossing {0} is resolved)")]
    NotAShadow(usize),
    #[error("illegal move on crossing {crossing}: {reason}")]
    IllegalMove { crossing: usize, reason: &'static str },
    #[error("move {index} of the replay is illegal: {source}")]
    Replay { index: usize, source: Box<GameError> },
    #[error("replay ended before the game did ({remaining} crossings unresolved)")]
    NotTerminal { remaining: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
}

#[derive(Clone, Debug)]
pub struct GameConfig {
    pub shadow: ShadowDiagram,
    pub first_mover: Role,
    pub budget: usize,
}

impl GameConfig {
    pub fn new(shadow: ShadowDiagram, first_mover: Role) -> Self {
        GameConfig { shadow, first_mover, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug)]
pub struct GameState {
    diagram: ShadowDiagram,
    mover: Role,
    history: Vec<Move>,
    first_mover: Role,
    budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub winner: Option<Role>,
    pub verdict: Verdict,
}

impl GameOutcome {
    pub fn from_verdict(verdict: Verdict) -> Self {
        let winner = match verdict.definite() {
            Some(true) => Some(Role::Unlinker),
            Some(false) => Some(Role::Linker),
            None => None,
        };
        GameOutcome { winner, verdict }
    }
}

pub fn new_game(config: &GameConfig) -> Result<GameState, GameError> {
    config.shadow.require_components(2)?;
    if let Some(c) = config.shadow.states().iter().position(|s| s.is_resolved()) {
        return Err(GameError::NotAShadow(c));
    }
    Ok(GameState {
        diagram: config.shadow.clone(),
        mover: config.first_mover,
        history: Vec::new(),
        first_mover: config.first_mover,
        budget: config.budget,
    })
}

impl GameState {
    pub fn diagram(&self) -> &ShadowDiagram {
        &self.diagram
    }

    pub fn mover(&self) -> Role {
        self.mover
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn first_mover(&self) -> Role {
        self.first_mover
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn is_terminal(&self) -> bool {
        self.diagram.is_fully_resolved()
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        self.diagram
            .unresolved_crossings()
            .into_iter()
            .flat_map(|c| [Move::new(c, CrossingState::ResolvedA), Move::new(c, CrossingState::ResolvedB)])
            .collect()
    }

    pub fn check_move(&self, mv: Move) -> Result<(), GameError> {
        let illegal = |reason| GameError::IllegalMove { crossing: mv.crossing, reason };
        if mv.crossing >= self.diagram.crossing_count() {
            return Err(illegal("no such crossing"));
        }
        if !mv.resolution.is_resolved() {
            return Err(illegal("a move must pick an overstrand"));
        }
        if self.diagram.states()[mv.crossing].is_resolved() {
            return Err(illegal("crossing already resolved"));
        }
        Ok(())
    }

    pub fn apply_move(&self, mv: Move) -> Result<GameState, GameError> {
        self.check_move(mv)?;
        let mut history = self.history.clone();
        history.push(mv);
        Ok(GameState {
            diagram: self.diagram.with_state(mv.crossing, mv.resolution)?,
            mover: self.mover.other(),
            history,
            first_mover: self.first_mover,
            budget: self.budget,
        })
    }

    /// The position before the last move.
    pub fn undo_last(&self) -> Option<GameState> {
        let mut history = self.history.clone();
        let last = history.pop()?;
        let diagram = self.diagram.with_state(last.crossing, CrossingState::Unresolved).ok()?;
        Some(GameState { diagram, mover: self.mover.other(), history, first_mover: self.first_mover, budget: self.budget })
    }

    pub fn pseudo_linking_number(&self) -> HalfInt {
        self.diagram.canonical_plk().expect("game diagrams have two components")
    }

    /// Verdict of the finished game, or `None` while crossings remain.
    pub fn outcome(&self) -> Result<Option<GameOutcome>, GameError> {
        if !self.is_terminal() {
            return Ok(None);
        }
        Ok(Some(GameOutcome::from_verdict(terminal_verdict(&self.diagram, self.budget)?)))
    }
}

/// Exact rational decision when the diagram carries its word, budgeted
/// search otherwise.
pub fn terminal_verdict(d: &ShadowDiagram, budget: usize) -> Result<Verdict, GameError> {
    if let Some(word) = d.rational_word() {
        return Ok(rational_splittability(&word)?);
    }
    Ok(decide_splittability(d, budget)?)
}

pub fn legal_moves(state: &GameState) -> Vec<Move> {
    state.legal_moves()
}

pub fn apply_move(state: &GameState, mv: Move) -> Result<GameState, GameError> {
    state.apply_move(mv)
}

pub fn game_outcome(state: &GameState) -> Result<Option<GameOutcome>, GameError> {
    state.outcome()
}

/// Play `moves` from the start and evaluate the end position.
pub fn replay(config: &GameConfig, moves: &[Move]) -> Result<GameOutcome, GameError> {
    let end = replay_state(config, moves)?;
    end.outcome()?.ok_or(GameError::NotTerminal { remaining: end.diagram.unresolved_crossings().len() })
}

pub fn replay_state(config: &GameConfig, moves: &[Move]) -> Result<GameState, GameError> {
    let mut state = new_game(config)?;
    for (index, &mv) in moves.iter().enumerate() {
        state = state.apply_move(mv).map_err(|e| GameError::Replay { index, source: Box::new(e) })?;
    }
    Ok(state)
}
