//! JSON payloads sent to clients.

use linkgame::{CrossingState, GameState, IntersectionKind, Move, Role, StrategyId};
use serde::{Deserialize, Serialize};

use crate::engine::{EnginePolicy, MoveSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveView {
    pub crossing: usize,
    pub resolution: char,
}

impl From<Move> for MoveView {
    fn from(mv: Move) -> Self {
        MoveView { crossing: mv.crossing, resolution: mv.resolution.marker() }
    }
}

impl MoveView {
    pub fn to_move(self) -> Option<Move> {
        match CrossingState::from_marker(self.resolution) {
            Some(s) if s.is_resolved() => Some(Move::new(self.crossing, s)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingView {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub state: char,
    /// "si" for a self-intersection, "nsi" otherwise.
    pub kind: String,
    /// Sign under the canonical orientation once resolved.
    pub sign: Option<i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DartView {
    pub crossing: usize,
    pub slot: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcView {
    pub id: usize,
    pub component: usize,
    pub label: String,
    pub from: DartView,
    pub to: DartView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeView {
    pub winner: Option<Role>,
    pub verdict: String,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineReply {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub source: MoveSource,
    pub strategy: Option<StrategyId>,
    pub rationale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateView {
    pub id: String,
    pub version: u64,
    pub human: Role,
    pub engine: Role,
    pub engine_policy: EnginePolicy,
    pub engine_strategy: Option<StrategyId>,
    pub first_mover: Role,
    /// None once the game is over.
    pub mover: Option<Role>,
    pub crossings: Vec<CrossingView>,
    pub arcs: Vec<ArcView>,
    pub components: Vec<String>,
    pub plk: f64,
    pub plk_halves: i32,
    pub history: Vec<MoveView>,
    pub outcome: Option<OutcomeView>,
    pub created: u64,
    pub updated: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveResponse {
    pub state: StateView,
    pub engine_reply: Option<EngineReply>,
    /// True when the move had already been applied at this version.
    pub replayed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreateResponse {
    pub state: StateView,
    pub engine_reply: Option<EngineReply>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HintView {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub source: MoveSource,
    pub strategy: Option<StrategyId>,
    pub rationale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisView {
    pub winner: linkgame::Winner,
    pub winning_role: Option<Role>,
    pub summary: String,
    pub principal_variation: Vec<MoveView>,
    pub nodes: u64,
    pub unknown_leaves: bool,
    /// True when undecided terminal diagrams affected the result.
    pub unknown_influence: bool,
}

/// Crossing positions, from the diagram when it has them, else on a circle.
fn layout(state: &GameState) -> Vec<(f64, f64)> {
    let coords = state.diagram().shape().coords();
    let n = state.diagram().crossing_count();
    if coords.len() == n && coords.iter().all(Option::is_some) {
        return coords.iter().map(|c| c.unwrap()).collect();
    }
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n.max(1) as f64;
            (t.cos() * n as f64, t.sin() * n as f64)
        })
        .collect()
}

pub struct ViewMeta<'a> {
    pub id: &'a str,
    pub human: Role,
    pub engine_policy: &'a EnginePolicy,
    pub engine_strategy: Option<StrategyId>,
    pub created: u64,
    pub updated: u64,
}

pub fn state_view(state: &GameState, meta: ViewMeta<'_>) -> StateView {
    let d = state.diagram();
    let shape = d.shape();
    let orientation = d.canonical_orientation();
    let kinds = d.intersection_kinds();
    let crossings = layout(state)
        .into_iter()
        .enumerate()
        .map(|(c, (x, y))| CrossingView {
            id: c,
            x,
            y,
            state: d.states()[c].marker(),
            kind: if kinds[c] == IntersectionKind::SelfIntersection { "si" } else { "nsi" }.to_string(),
            sign: d.states()[c].is_resolved().then(|| d.crossing_sign(&orientation, c).ok()).flatten(),
        })
        .collect();
    let ids = shape.arc_ids();
    let labels = shape.labels().to_vec();
    let mut arcs = Vec::new();
    for walk in shape.walks() {
        for &exit in walk {
            let to = shape.partner(exit);
            let component = shape.dart_component(exit);
            arcs.push(ArcView {
                id: ids[exit.index()],
                component,
                label: labels.get(component).cloned().unwrap_or_default(),
                from: DartView { crossing: exit.crossing, slot: exit.slot },
                to: DartView { crossing: to.crossing, slot: to.slot },
            });
        }
    }
    let plk = state.pseudo_linking_number();
    let outcome = state.outcome().ok().flatten().map(|o| OutcomeView {
        winner: o.winner,
        verdict: o.verdict.label().to_string(),
        summary: o.verdict.summary(),
    });
    StateView {
        id: meta.id.to_string(),
        version: state.history().len() as u64,
        human: meta.human,
        engine: meta.human.other(),
        engine_policy: meta.engine_policy.clone(),
        engine_strategy: meta.engine_strategy,
        first_mover: state.first_mover(),
        mover: (!state.is_terminal()).then(|| state.mover()),
        crossings,
        arcs,
        components: labels,
        plk: plk.as_f64(),
        plk_halves: plk.halves(),
        history: state.history().iter().map(|&m| m.into()).collect(),
        outcome,
        created: meta.created,
        updated: meta.updated,
    }
}
