//! Perfect-play search. Rational shadows are solved on per-syllable
//! (net, unresolved) counts; general diagrams crossing by crossing.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::build::{build_rational_shadow, BuildError};
use crate::diagram::CrossingState;
use crate::game::{terminal_verdict, GameError, GameState, Move, Role};
use crate::tangle::{closure_components, rational_splittability, ClosureKind, TangleError};
use crate::word::{PseudoTangleWord, Syllable};

pub const DEFAULT_CROSSING_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{word} has no two-component {closure} closure")]
    NoTwoComponentClosure { word: String, closure: ClosureKind },
    #[error("{crossings} unresolved crossings exceed the search bound of {bound}")]
    BoundExceeded { crossings: usize, bound: usize },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    FirstMover,
    SecondMover,
    Undetermined,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub memo: bool,
    pub ordering: bool,
    pub bound: usize,
    /// Node budget for terminal simplification searches.
    pub budget: usize,
    /// Ignore the rational word a built diagram carries and judge leaves by
    /// diagram search alone.
    pub diagram_leaves: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            memo: true,
            ordering: true,
            bound: DEFAULT_CROSSING_BOUND,
            budget: crate::game::DEFAULT_BUDGET,
            diagram_leaves: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub winner: Winner,
    pub winning_role: Option<Role>,
    pub first_mover: Role,
    pub principal_variation: Vec<Move>,
    pub nodes: u64,
    pub tt_hits: u64,
    /// Some leaf could not be decided.
    pub unknown_leaves: bool,
    /// The root value depends on undecided leaves.
    pub unknown_influence: bool,
}

impl SolveResult {
    fn new(value: i8, first_mover: Role, pv: Vec<Move>, stats: Stats) -> Self {
        let winning_role = match value {
            1 => Some(Role::Unlinker),
            -1 => Some(Role::Linker),
            _ => None,
        };
        let winner = match winning_role {
            Some(r) if r == first_mover => Winner::FirstMover,
            Some(_) => Winner::SecondMover,
            None => Winner::Undetermined,
        };
        SolveResult {
            winner,
            winning_role,
            first_mover,
            principal_variation: pv,
            nodes: stats.nodes,
            tt_hits: stats.tt_hits,
            unknown_leaves: stats.unknown_leaves,
            unknown_influence: value == 0,
        }
    }

    pub fn summary(&self) -> String {
        match (self.winner, self.winning_role) {
            (Winner::FirstMover, Some(r)) => format!("first mover ({r}) wins"),
            (Winner::SecondMover, Some(r)) => format!("second mover ({r}) wins"),
            _ => "undetermined (undecided terminal diagrams)".to_string(),
        }
    }
}

impl fmt::Display for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    nodes: u64,
    tt_hits: u64,
    unknown_leaves: bool,
}

fn role_value(mover: Role) -> i8 {
    match mover {
        Role::Unlinker => 1,
        Role::Linker => -1,
    }
}

/// Value with Unlinker wins = 1, Linker wins = -1, undecided = 0. Each
/// mover prefers a win, then an undecided result, then a loss.
trait Game {
    type Key: std::hash::Hash + Eq + Clone;
    type Action: Copy;

    fn key(&self) -> Self::Key;
    fn leaf(&self, stats: &mut Stats) -> Option<i8>;
    fn actions(&self, mover: Role, last: Option<Self::Action>, ordering: bool) -> Vec<Self::Action>;
    fn play(&mut self, a: Self::Action);
    fn undo(&mut self, a: Self::Action);
}

struct Search<G: Game> {
    memo: Option<HashMap<(G::Key, Role), i8>>,
    ordering: bool,
    stats: Stats,
}

impl<G: Game> Search<G> {
    fn new(options: &SolveOptions) -> Self {
        Search { memo: options.memo.then(HashMap::new), ordering: options.ordering, stats: Stats::default() }
    }

    fn value(&mut self, g: &mut G, mover: Role, last: Option<G::Action>) -> i8 {
        self.stats.nodes += 1;
        if let Some(v) = g.leaf(&mut self.stats) {
            return v;
        }
        let key = self.memo.as_ref().map(|_| (g.key(), mover));
        if let (Some(memo), Some(k)) = (&self.memo, &key) {
            if let Some(&v) = memo.get(k) {
                self.stats.tt_hits += 1;
                return v;
            }
        }
        let goal = role_value(mover);
        let mut best = -goal;
        for a in g.actions(mover, last, self.ordering) {
            g.play(a);
            let v = self.value(g, mover.other(), Some(a));
            g.undo(a);
            if v * goal > best * goal {
                best = v;
            }
            if best == goal {
                break;
            }
        }
        if let (Some(memo), Some(k)) = (&mut self.memo, key) {
            memo.insert(k, best);
        }
        best
    }

    /// First action reaching the node's value at every step.
    fn principal_variation(&mut self, g: &mut G, mut mover: Role) -> (i8, Vec<G::Action>) {
        let root = self.value(g, mover, None);
        let mut line = Vec::new();
        let mut last = None;
        let mut target = root;
        while g.leaf(&mut self.stats).is_none() {
            let mut chosen = None;
            for a in g.actions(mover, last, self.ordering) {
                g.play(a);
                let v = self.value(g, mover.other(), Some(a));
                g.undo(a);
                if v == target {
                    chosen = Some(a);
                    break;
                }
            }
            let a = chosen.expect("some child attains the node value");
            g.play(a);
            line.push(a);
            last = Some(a);
            mover = mover.other();
            target = self.value(g, mover, last);
        }
        for &a in line.iter().rev() {
            g.undo(a);
        }
        (root, line)
    }
}

fn order_signs(mover: Role, last: Option<i32>, ordering: bool) -> [i32; 2] {
    match (ordering, last) {
        (true, Some(s)) => {
            // The Linker tries to match the previous sign, the Unlinker to cancel it.
            let first = if mover == Role::Linker { s } else { -s };
            [first, -first]
        }
        _ => [1, -1],
    }
}

struct RationalGame {
    syllables: Vec<Syllable>,
}

impl Game for RationalGame {
    type Key = Vec<Syllable>;
    type Action = (usize, i32);

    fn key(&self) -> Vec<Syllable> {
        self.syllables.clone()
    }

    fn leaf(&self, _: &mut Stats) -> Option<i8> {
        if self.syllables.iter().any(|s| s.unresolved > 0) {
            return None;
        }
        let word = PseudoTangleWord::new(self.syllables.clone());
        let verdict = rational_splittability(&word).expect("resolved words always decide");
        Some(if verdict.is_splittable() { 1 } else { -1 })
    }

    fn actions(&self, mover: Role, last: Option<(usize, i32)>, ordering: bool) -> Vec<(usize, i32)> {
        let signs = order_signs(mover, last.map(|l| l.1), ordering);
        let mut out = Vec::new();
        let mut push = |i: usize| {
            if self.syllables[i].unresolved > 0 {
                out.extend(signs.iter().map(|&s| (i, s)));
            }
        };
        // The syllable just played comes first: that is where pairing replies live.
        let first = last.filter(|_| ordering).map(|l| l.0);
        if let Some(i) = first {
            push(i);
        }
        for i in 0..self.syllables.len() {
            if Some(i) != first {
                push(i);
            }
        }
        out
    }

    fn play(&mut self, (i, s): (usize, i32)) {
        self.syllables[i].net += s;
        self.syllables[i].unresolved -= 1;
    }

    fn undo(&mut self, (i, s): (usize, i32)) {
        self.syllables[i].net -= s;
        self.syllables[i].unresolved += 1;
    }
}

pub fn solve_rational(word: &PseudoTangleWord, closure: ClosureKind, first_mover: Role) -> Result<SolveResult, SolveError> {
    solve_rational_with(word, closure, first_mover, &SolveOptions::default())
}

pub fn solve_rational_with(
    word: &PseudoTangleWord,
    closure: ClosureKind,
    first_mover: Role,
    options: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if closure_components(word).1 != Some(closure) {
        return Err(SolveError::NoTwoComponentClosure { word: word.to_string(), closure });
    }
    let diagram = build_rational_shadow(word, closure)?;
    let mut game = RationalGame { syllables: word.normalized() };
    let mut search = Search::new(options);
    let (value, line) = search.principal_variation(&mut game, first_mover);

    // Abstract moves land on the lowest unresolved crossing of their syllable.
    let syllable_of = &diagram.provenance().expect("built diagrams carry provenance").syllable_of;
    let mut states = diagram.states().to_vec();
    let pv = line
        .into_iter()
        .map(|(i, s)| {
            let c = (0..states.len())
                .find(|&c| syllable_of[c] == i && !states[c].is_resolved())
                .expect("syllable has an unresolved crossing");
            states[c] = CrossingState::from_slope(s);
            Move::new(c, states[c])
        })
        .collect();
    Ok(SolveResult::new(value, first_mover, pv, search.stats))
}

struct DiagramGame {
    state: GameState,
    diagram_leaves: bool,
    budget: usize,
    leaves: HashMap<Vec<CrossingState>, i8>,
}

impl Game for DiagramGame {
    type Key = Vec<CrossingState>;
    type Action = Move;

    fn key(&self) -> Vec<CrossingState> {
        self.state.diagram().states().to_vec()
    }

    fn leaf(&self, stats: &mut Stats) -> Option<i8> {
        if !self.state.is_terminal() {
            return None;
        }
        let v = self.leaves[self.state.diagram().states()];
        if v == 0 {
            stats.unknown_leaves = true;
        }
        Some(v)
    }

    fn actions(&self, mover: Role, last: Option<Move>, ordering: bool) -> Vec<Move> {
        let d = self.state.diagram();
        let mut moves = d.unresolved_crossings();
        let mut signs = None;
        if let (true, Some(l)) = (ordering, last) {
            // Crossings sharing a twist region with the last move come first.
            let regions = crate::regions::twist_regions(d);
            if let Some(r) = regions.iter().find(|r| r.contains(l.crossing)) {
                moves.sort_by_key(|c| !r.contains(*c));
            }
            signs = d.crossing_sign(&d.canonical_orientation(), l.crossing).ok();
        }
        let orientation = d.canonical_orientation();
        moves
            .into_iter()
            .flat_map(|c| {
                let order = match signs {
                    Some(s) => order_signs(mover, Some(s), true).map(|sign| d.state_for_sign(&orientation, c, sign)),
                    None => [CrossingState::ResolvedA, CrossingState::ResolvedB],
                };
                order.map(|r| Move::new(c, r))
            })
            .collect()
    }

    fn play(&mut self, mv: Move) {
        self.state = self.state.apply_move(mv).expect("search plays legal moves");
        self.record_leaf();
    }

    fn undo(&mut self, _: Move) {
        self.state = self.state.undo_last().expect("undo follows a play");
    }
}

impl DiagramGame {
    fn record_leaf(&mut self) {
        if !self.state.is_terminal() || self.leaves.contains_key(self.state.diagram().states()) {
            return;
        }
        let d = if self.diagram_leaves { self.state.diagram().without_provenance() } else { self.state.diagram().clone() };
        let v = match terminal_verdict(&d, self.budget).expect("terminal diagrams are valid").definite() {
            Some(true) => 1,
            Some(false) => -1,
            None => 0,
        };
        self.leaves.insert(self.key(), v);
    }
}

pub fn solve_diagram(state: &GameState) -> Result<SolveResult, SolveError> {
    solve_diagram_with(state, &SolveOptions::default())
}

pub fn solve_diagram_with(state: &GameState, options: &SolveOptions) -> Result<SolveResult, SolveError> {
    let remaining = state.diagram().unresolved_crossings().len();
    if remaining > options.bound {
        return Err(SolveError::BoundExceeded { crossings: remaining, bound: options.bound });
    }
    let mut game = DiagramGame {
        state: state.clone(),
        diagram_leaves: options.diagram_leaves,
        budget: options.budget,
        leaves: HashMap::new(),
    };
    game.record_leaf();
    let mut search = Search::new(options);
    let (value, pv) = search.principal_variation(&mut game, state.mover());
    // The result speaks about the position, so report the role to move as
    // the first mover.
    Ok(SolveResult::new(value, state.mover(), pv, search.stats))
}
