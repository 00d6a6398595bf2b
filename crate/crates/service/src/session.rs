//! One live game and the requests that act on it.

use std::collections::HashMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use linkgame::{
    new_game, parse_pd, presets, replay_state, shadow_from_word, ClosureKind, GameConfig, GameState, Move, Role, ShadowSource,
    SourceError, StrategyId, StrategyMemory,
};
use serde::{Deserialize, Serialize};

use crate::engine::{self, Choice, EnginePolicy};
use crate::error::ApiError;
use crate::view::{state_view, EngineReply, HintView, MoveView, StateView, ViewMeta};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SessionSource {
    Word { word: String, closure: Option<ClosureKind> },
    Pd { text: String },
    Preset { name: String },
}

/// Everything needed to recreate a session besides its moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub id: String,
    pub source: SessionSource,
    pub human: Role,
    pub engine: EnginePolicy,
    pub engine_strategy: Option<StrategyId>,
    pub created: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub word: Option<String>,
    pub closure: Option<ClosureKind>,
    pub pd: Option<String>,
    pub preset: Option<String>,
    pub human: Role,
    pub first: Role,
    #[serde(default)]
    pub engine: EnginePolicy,
    pub budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub crossing: usize,
    pub resolution: char,
    pub version: u64,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn source_error(e: SourceError) -> ApiError {
    match e {
        SourceError::Build(linkgame::BuildError::WrongComponents { components, .. }) => {
            ApiError::UnsupportedComponents(components)
        }
        other => ApiError::InvalidPayload(other.to_string()),
    }
}

impl CreateRequest {
    /// Builds the shadow and checks the engine policy against it.
    pub fn config(&self) -> Result<(SessionSource, GameConfig), ApiError> {
        let given = [self.word.is_some(), self.pd.is_some(), self.preset.is_some()].iter().filter(|&&b| b).count();
        if given != 1 {
            return Err(ApiError::InvalidPayload("give exactly one of word, pd, preset".into()));
        }
        if self.closure.is_some() && self.word.is_none() {
            return Err(ApiError::InvalidPayload("closure applies to words only".into()));
        }
        let (source, shadow) = if let Some(word) = &self.word {
            let shadow = shadow_from_word(word, self.closure).map_err(source_error)?;
            (SessionSource::Word { word: word.clone(), closure: self.closure }, shadow)
        } else if let Some(text) = &self.pd {
            let shadow = parse_pd(text).map_err(|e| ApiError::InvalidPayload(e.to_string()))?.to_shadow();
            (SessionSource::Pd { text: text.clone() }, shadow)
        } else {
            let name = self.preset.clone().unwrap_or_default();
            let shadow = presets::preset(&name).ok_or_else(|| {
                ApiError::InvalidPayload(format!("unknown preset '{name}' (known: {})", presets::PRESET_NAMES.join(", ")))
            })?;
            (SessionSource::Preset { name }, shadow)
        };
        if shadow.component_count() != 2 {
            return Err(ApiError::UnsupportedComponents(shadow.component_count()));
        }
        let mut config = GameConfig::new(shadow, self.first);
        if let Some(b) = self.budget {
            config.budget = b;
        }
        Ok((source, config))
    }
}

#[derive(Clone)]
pub struct Session {
    pub meta: SessionMeta,
    pub config: GameConfig,
    pub state: GameState,
    pub updated: u64,
    pub last_seen: Instant,
    /// Engine replies by ply index, for responses; not persisted.
    pub engine_replies: HashMap<usize, EngineReply>,
}

/// Engine strategy for a new session, validating a requested one.
pub fn engine_strategy(policy: &EnginePolicy, config: &GameConfig, engine: Role) -> Result<Option<StrategyId>, ApiError> {
    match policy {
        EnginePolicy::Strategy { id } => {
            StrategyMemory::new(*id, config).map_err(|e| ApiError::InvalidPayload(e.to_string()))?;
            if id.role(config.first_mover) != engine {
                return Err(ApiError::InvalidPayload(format!("{id} plays the {}, not the engine", id.role(config.first_mover))));
            }
            Ok(Some(*id))
        }
        EnginePolicy::Auto => Ok(engine::strategy_for(config, engine)),
        _ => Ok(None),
    }
}

impl Session {
    pub fn new(meta: SessionMeta, config: GameConfig) -> Result<Self, ApiError> {
        let state = new_game(&config).map_err(|e| ApiError::InvalidPayload(e.to_string()))?;
        Ok(Session { updated: meta.created, meta, config, state, last_seen: Instant::now(), engine_replies: HashMap::new() })
    }

    pub fn restore(meta: SessionMeta, config: GameConfig, moves: &[Move]) -> Result<Self, String> {
        let state = replay_state(&config, moves).map_err(|e| e.to_string())?;
        Ok(Session { updated: now(), meta, config, state, last_seen: Instant::now(), engine_replies: HashMap::new() })
    }

    pub fn engine_role(&self) -> Role {
        self.meta.human.other()
    }

    pub fn version(&self) -> u64 {
        self.state.history().len() as u64
    }

    pub fn view_of(&self, state: &GameState) -> StateView {
        state_view(
            state,
            ViewMeta {
                id: &self.meta.id,
                human: self.meta.human,
                engine_policy: &self.meta.engine,
                engine_strategy: self.meta.engine_strategy,
                created: self.meta.created,
                updated: self.updated,
            },
        )
    }

    pub fn view(&self) -> StateView {
        self.view_of(&self.state)
    }

    /// Moves the given role has made so far.
    fn moves_by(&self, role: Role) -> usize {
        let n = self.state.history().len();
        let by_first = n.div_ceil(2);
        if role == self.config.first_mover {
            by_first
        } else {
            n - by_first
        }
    }

    /// Engine move for the current position, if it is the engine's turn.
    pub fn engine_choice(&self, bound: usize) -> Option<Choice> {
        if self.state.is_terminal() || self.state.mover() != self.engine_role() {
            return None;
        }
        let index = self.moves_by(self.engine_role());
        engine::choose(&self.meta.engine, self.meta.engine_strategy, &self.config, &self.state, bound, index)
    }

    /// Applies a choice made for the engine and records it.
    pub fn apply_engine(&mut self, choice: Choice) -> Result<EngineReply, ApiError> {
        let ply = self.state.history().len();
        self.state = self.state.apply_move(choice.mv).map_err(|e| ApiError::Internal(e.to_string()))?;
        let reply =
            EngineReply { mv: choice.mv.into(), source: choice.source, strategy: choice.strategy, rationale: choice.rationale };
        self.engine_replies.insert(ply, reply.clone());
        Ok(reply)
    }

    pub fn check_human_move(&self, request: MoveRequest) -> Result<Move, ApiError> {
        let mv = MoveView { crossing: request.crossing, resolution: request.resolution }
            .to_move()
            .ok_or_else(|| ApiError::IllegalMove(format!("resolution must be '/' or '\\', got '{}'", request.resolution)))?;
        if request.version != self.version() {
            return Err(ApiError::StaleVersion { got: request.version, current: self.version() });
        }
        if self.state.is_terminal() {
            return Err(ApiError::GameOver);
        }
        if self.state.mover() != self.meta.human {
            return Err(ApiError::OutOfTurn(self.meta.human.to_string()));
        }
        self.state.check_move(mv).map_err(|e| ApiError::IllegalMove(e.to_string()))?;
        Ok(mv)
    }

    /// For a resubmitted move: the state right after it and the engine reply
    /// that followed, when the move at `version` matches.
    pub fn replayed(&self, request: MoveRequest) -> Option<(StateView, Option<EngineReply>)> {
        let v = usize::try_from(request.version).ok()?;
        let history = self.state.history();
        let mv = MoveView { crossing: request.crossing, resolution: request.resolution }.to_move()?;
        if v >= history.len() || history[v] != mv {
            return None;
        }
        let human_first = self.config.first_mover == self.meta.human;
        if (v % 2 == 0) != human_first {
            return None;
        }
        let reply = self.engine_replies.get(&(v + 1)).cloned();
        let end = if v + 1 < history.len() { v + 2 } else { v + 1 };
        let state = replay_state(&self.config, &history[..end]).ok()?;
        Some((self.view_of(&state), reply))
    }

    /// Suggested move for the human.
    pub fn hint(&self, bound: usize) -> Result<HintView, ApiError> {
        if self.state.is_terminal() {
            return Err(ApiError::GameOver);
        }
        if self.state.mover() != self.meta.human {
            return Err(ApiError::OutOfTurn(self.meta.human.to_string()));
        }
        let strategy = engine::strategy_for(&self.config, self.meta.human);
        let choice = engine::choose(&EnginePolicy::Auto, strategy, &self.config, &self.state, bound, 0)
            .ok_or_else(|| ApiError::Internal("no legal move".into()))?;
        Ok(HintView { mv: choice.mv.into(), source: choice.source, strategy: choice.strategy, rationale: choice.rationale })
    }

    /// Source line for the move log, when the shadow came from a word.
    pub fn word_source(&self) -> Option<ShadowSource> {
        match &self.meta.source {
            SessionSource::Word { word, closure } => Some(ShadowSource::Word { word: word.clone(), closure: *closure }),
            _ => None,
        }
    }
}
