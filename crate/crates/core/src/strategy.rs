//! Winning strategies as move-choice policies.
//!
//! Rational policies work on the syllables recorded by the builder: a
//! reply inside a syllable with the opposite slope cancels against the
//! opponent's crossing after a flype, the same slope leaves a clasp. The
//! linking-number policies work on any two-component shadow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{CrossingState, Orientation, ShadowDiagram};
use crate::game::{GameConfig, GameState, Move, Role};
use crate::regions::twist_regions;
use crate::tangle::{classify_syllables, decompose_word, Block, IntersectionKind, StringTag};
use crate::word::PseudoTangleWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyId {
    /// Rational words whose odd-position syllables are all empty, and
    /// shadows without NSI crossings: the Unlinker wins however it plays.
    UnlinkerAlways,
    /// All syllables even, some odd-position syllable nonempty.
    EvenSecond,
    /// Two odd syllables.
    OddPairSecond,
    /// Odd end syllables around even ones.
    OddEndsSecond,
    /// Even SI count: answer SI with SI, play each NSI string by its type.
    SiPairingSecond,
    /// Odd SI count: open on an SI, then play as second.
    SiPairingFirst,
    /// Linker moving second with an even SI count.
    LinkingSecond,
    /// Linker moving first with an odd SI count.
    LinkingFirst,
}

impl StrategyId {
    pub const ALL: [StrategyId; 8] = [
        StrategyId::UnlinkerAlways,
        StrategyId::EvenSecond,
        StrategyId::OddPairSecond,
        StrategyId::OddEndsSecond,
        StrategyId::SiPairingSecond,
        StrategyId::SiPairingFirst,
        StrategyId::LinkingSecond,
        StrategyId::LinkingFirst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyId::UnlinkerAlways => "unlinker-always",
            StrategyId::EvenSecond => "even-second",
            StrategyId::OddPairSecond => "odd-pair-second",
            StrategyId::OddEndsSecond => "odd-ends-second",
            StrategyId::SiPairingSecond => "si-pairing-second",
            StrategyId::SiPairingFirst => "si-pairing-first",
            StrategyId::LinkingSecond => "linking-second",
            StrategyId::LinkingFirst => "linking-first",
        }
    }

    /// Role the strategy plays for, given who moves first.
    pub fn role(self, first_mover: Role) -> Role {
        match self {
            StrategyId::UnlinkerAlways => Role::Unlinker,
            StrategyId::LinkingSecond | StrategyId::LinkingFirst => Role::Linker,
            StrategyId::SiPairingFirst => first_mover,
            _ => first_mover.other(),
        }
    }

    fn opens(self) -> bool {
        matches!(self, StrategyId::SiPairingFirst | StrategyId::LinkingFirst)
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown strategy '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("{id} does not apply: {reason}")]
    NotApplicable { id: StrategyId, reason: String },
    #[error("it is not the {0}'s turn")]
    NotMyTurn(Role),
    #[error("the game is over")]
    GameOver,
    #[error("no unresolved crossing left to answer in {0}")]
    Exhausted(String),
}

/// Hypothesis check for one strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub id: StrategyId,
    pub applies: bool,
    pub reason: String,
}

fn rational_word(d: &ShadowDiagram) -> Option<PseudoTangleWord> {
    d.provenance().map(|p| PseudoTangleWord::shadow(&p.sizes))
}

fn odd_positions_empty(sizes: &[u32]) -> bool {
    sizes.iter().step_by(2).all(|&s| s == 0)
}

fn check(id: StrategyId, config: &GameConfig) -> Result<(), String> {
    let d = &config.shadow;
    if d.component_count() != 2 {
        return Err(format!("{} components", d.component_count()));
    }
    let nsi = d.nsi_crossings().len();
    let si = d.si_crossings().len();
    let first = config.first_mover;
    let word = rational_word(d);
    let need_word = || word.clone().ok_or_else(|| "needs a rational word".to_string());
    let sizes = word.as_ref().map(|w| w.sizes());
    let require = |cond: bool, why: &str| if cond { Ok(()) } else { Err(why.to_string()) };
    match id {
        StrategyId::UnlinkerAlways => {
            let empty = sizes.as_deref().is_some_and(odd_positions_empty);
            require(empty || nsi == 0, "some odd-position syllable is nonempty and NSI crossings exist")
        }
        StrategyId::EvenSecond => {
            let s = need_word()?.sizes();
            require(!odd_positions_empty(&s), "every odd-position syllable is empty")?;
            require(s.iter().all(|x| x % 2 == 0), "some syllable is odd")
        }
        StrategyId::OddPairSecond => {
            let s = need_word()?.sizes();
            require(s.len() == 2 && s.iter().all(|x| x % 2 == 1), "word is not two odd syllables")
        }
        StrategyId::OddEndsSecond => {
            let s = need_word()?.sizes();
            require(s.len() >= 3, "fewer than three syllables")?;
            require(s[0] % 2 == 1 && s[s.len() - 1] % 2 == 1, "an end syllable is even")?;
            require(s[1..s.len() - 1].iter().all(|x| x % 2 == 0), "a middle syllable is odd")
        }
        StrategyId::SiPairingSecond | StrategyId::SiPairingFirst => {
            let w = need_word()?;
            require(nsi > 0, "no NSI crossings")?;
            require(!odd_positions_empty(&w.sizes()), "every odd-position syllable is empty")?;
            decompose_word(&w).map_err(|e| e.to_string())?;
            let want_odd = id == StrategyId::SiPairingFirst;
            require((si % 2 == 1) == want_odd, if want_odd { "SI count is even" } else { "SI count is odd" })
        }
        StrategyId::LinkingSecond | StrategyId::LinkingFirst => {
            require(nsi > 0, "no NSI crossings")?;
            let want_odd = id == StrategyId::LinkingFirst;
            require((si % 2 == 1) == want_odd, if want_odd { "SI count is even" } else { "SI count is odd" })?;
            let linker_first = first == Role::Linker;
            require(linker_first == want_odd, if want_odd { "Linker does not move first" } else { "Linker does not move second" })
        }
    }
}

pub fn applicability(config: &GameConfig) -> Vec<Applicability> {
    StrategyId::ALL
        .into_iter()
        .map(|id| match check(id, config) {
            Ok(()) => Applicability { id, applies: true, reason: "hypotheses hold".into() },
            Err(reason) => Applicability { id, applies: false, reason },
        })
        .collect()
}

pub fn applicable_strategies(config: &GameConfig) -> Vec<StrategyId> {
    applicability(config).into_iter().filter(|a| a.applies).map(|a| a.id).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum SyllablePlan {
    /// Part of the SI pool: answer with any other SI.
    Si,
    /// Cancel inside the syllable; a designated one ends in a clasp.
    Pair { designated: bool },
    /// Odd end of a string, matched with `partner` once exhausted.
    End { partner: usize, copy: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum Plan {
    Any,
    Rational { syllable_of: Vec<usize>, syllables: Vec<SyllablePlan> },
    Linking { orientation: Orientation, kinds: Vec<IntersectionKind>, copy_first: bool },
}

/// Per-game bookkeeping of a strategy; updated only from observed moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyMemory {
    pub id: StrategyId,
    pub role: Role,
    pub nsi_replies: usize,
    pub last_opponent: Option<Move>,
    plan: Plan,
}

/// A chosen move and a short tag naming the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub mv: Move,
    pub rationale: String,
}

fn string_plans(plans: &mut [SyllablePlan], range: std::ops::Range<usize>, tag: StringTag, linker_final: bool, sizes: &[u32]) {
    match tag {
        StringTag::SingleEven => plans[range.start] = SyllablePlan::Pair { designated: linker_final && sizes[range.start] > 0 },
        _ => {
            let (a, b) = (range.start, range.end - 1);
            for p in &mut plans[range] {
                *p = SyllablePlan::Pair { designated: false };
            }
            plans[a] = SyllablePlan::End { partner: b, copy: linker_final };
            plans[b] = SyllablePlan::End { partner: a, copy: linker_final };
        }
    }
}

impl StrategyMemory {
    pub fn new(id: StrategyId, config: &GameConfig) -> Result<Self, StrategyError> {
        check(id, config).map_err(|reason| StrategyError::NotApplicable { id, reason })?;
        let role = id.role(config.first_mover);
        let d = &config.shadow;
        let plan = match id {
            StrategyId::UnlinkerAlways => Plan::Any,
            StrategyId::LinkingSecond | StrategyId::LinkingFirst => {
                Plan::Linking { orientation: d.canonical_orientation(), kinds: d.intersection_kinds(), copy_first: true }
            }
            _ => {
                let p = d.provenance().expect("checked above");
                let word = PseudoTangleWord::shadow(&p.sizes);
                let sizes = &p.sizes;
                let n = sizes.len();
                let linker = role == Role::Linker;
                let mut syllables = vec![SyllablePlan::Pair { designated: false }; n];
                match id {
                    StrategyId::EvenSecond => {
                        let j = (0..n).step_by(2).find(|&i| sizes[i] > 0).expect("checked above");
                        syllables[j] = SyllablePlan::Pair { designated: linker };
                    }
                    StrategyId::OddPairSecond | StrategyId::OddEndsSecond => {
                        string_plans(&mut syllables, 0..n, StringTag::TwoOdd, linker, sizes);
                    }
                    _ => {
                        let dec = decompose_word(&word).expect("checked above");
                        let crossings_in = |r: &std::ops::Range<usize>| sizes[r.clone()].iter().sum::<u32>();
                        let final_string = dec
                            .blocks
                            .iter()
                            .rposition(|b| matches!(b, Block::NsiString { syllables, .. } if crossings_in(syllables) > 0));
                        for (bi, b) in dec.blocks.iter().enumerate() {
                            match b {
                                Block::IsolatedSi(i) => syllables[*i] = SyllablePlan::Si,
                                Block::NsiString { syllables: r, tag } => {
                                    string_plans(&mut syllables, r.clone(), *tag, linker && Some(bi) == final_string, sizes)
                                }
                            }
                        }
                        debug_assert_eq!(
                            classify_syllables(&word).iter().filter(|k| k.is_self()).count(),
                            syllables.iter().filter(|s| **s == SyllablePlan::Si).count()
                        );
                    }
                }
                Plan::Rational { syllable_of: p.syllable_of.clone(), syllables }
            }
        };
        Ok(StrategyMemory { id, role, nsi_replies: 0, last_opponent: None, plan })
    }

    /// Variant for mutation testing: the first NSI reply opposes the sign
    /// instead of copying it.
    pub fn without_sign_copy(mut self) -> Self {
        if let Plan::Linking { copy_first, .. } = &mut self.plan {
            *copy_first = false;
        }
        self
    }

    pub fn tracks_linking_number(&self) -> bool {
        matches!(self.plan, Plan::Linking { .. })
    }

    /// Memory of this strategy after the moves in `history`, counting the
    /// moves of its own role as if it had played them.
    pub fn after(id: StrategyId, config: &GameConfig, history: &[Move]) -> Result<Self, StrategyError> {
        let mut memory = StrategyMemory::new(id, config)?;
        let mut mover = config.first_mover;
        for &mv in history {
            if mover == memory.role {
                if let Plan::Linking { kinds, .. } = &memory.plan {
                    if kinds.get(mv.crossing).is_some_and(|k| !k.is_self()) {
                        memory.nsi_replies += 1;
                    }
                }
            } else {
                memory.last_opponent = Some(mv);
            }
            mover = mover.other();
        }
        Ok(memory)
    }
}

fn lowest_unresolved(d: &ShadowDiagram, mut pick: impl FnMut(usize) -> bool) -> Option<usize> {
    (0..d.crossing_count()).find(|&c| !d.states()[c].is_resolved() && pick(c))
}

fn decide(c: usize, state: CrossingState, rationale: impl Into<String>) -> Decision {
    Decision { mv: Move::new(c, state), rationale: rationale.into() }
}

fn respond_rational(
    d: &ShadowDiagram,
    syllable_of: &[usize],
    plans: &[SyllablePlan],
    last: Move,
) -> Result<Decision, StrategyError> {
    let i = syllable_of[last.crossing];
    let slope = last.resolution.slope();
    let in_syllable = |s: usize| lowest_unresolved(d, |c| syllable_of[c] == s);
    let remaining = |s: usize| (0..d.crossing_count()).filter(|&c| syllable_of[c] == s && !d.states()[c].is_resolved()).count();
    let exhausted = |s: usize| StrategyError::Exhausted(format!("syllable {}", s + 1));
    match plans[i] {
        SyllablePlan::Si => {
            let c = lowest_unresolved(d, |c| plans[syllable_of[c]] == SyllablePlan::Si)
                .ok_or(StrategyError::Exhausted("the SI pool".into()))?;
            Ok(decide(c, CrossingState::ResolvedA, "answer an SI with an SI"))
        }
        SyllablePlan::Pair { designated } => {
            let c = in_syllable(i).ok_or_else(|| exhausted(i))?;
            if designated && remaining(i) == 1 {
                Ok(decide(c, CrossingState::from_slope(slope), format!("anti-R2 clasp in syllable {}", i + 1)))
            } else {
                Ok(decide(c, CrossingState::from_slope(-slope), format!("R2 response in syllable {}", i + 1)))
            }
        }
        SyllablePlan::End { partner, copy } => {
            if let Some(c) = in_syllable(i) {
                return Ok(decide(c, CrossingState::from_slope(-slope), format!("R2 response in syllable {}", i + 1)));
            }
            let c = in_syllable(partner).ok_or_else(|| exhausted(partner))?;
            let (s, what) = if copy { (slope, "copy") } else { (-slope, "oppose") };
            Ok(decide(c, CrossingState::from_slope(s), format!("{what} the slope on syllable {}", partner + 1)))
        }
    }
}

/// Strategy move for the current position.
pub fn choose_move(state: &GameState, memory: &StrategyMemory) -> Result<(Decision, StrategyMemory), StrategyError> {
    if state.is_terminal() {
        return Err(StrategyError::GameOver);
    }
    if state.mover() != memory.role {
        return Err(StrategyError::NotMyTurn(memory.role));
    }
    let d = state.diagram();
    let mut next = memory.clone();
    let last = state.history().last().copied();
    next.last_opponent = last;
    let opening = last.is_none();
    let decision = match &memory.plan {
        Plan::Any => {
            let c = lowest_unresolved(d, |_| true).expect("game not over");
            decide(c, CrossingState::ResolvedA, "any move wins")
        }
        Plan::Rational { syllable_of, syllables } => {
            if opening && memory.id.opens() {
                let c = lowest_unresolved(d, |c| syllables[syllable_of[c]] == SyllablePlan::Si)
                    .ok_or(StrategyError::Exhausted("the SI pool".into()))?;
                decide(c, CrossingState::ResolvedA, "open on an SI")
            } else {
                let last = last.ok_or(StrategyError::NotMyTurn(memory.role))?;
                respond_rational(d, syllable_of, syllables, last)?
            }
        }
        Plan::Linking { orientation, kinds, copy_first } => {
            let is_si = |c: usize| kinds[c].is_self();
            if opening {
                if !memory.id.opens() {
                    return Err(StrategyError::NotMyTurn(memory.role));
                }
                let c = lowest_unresolved(d, is_si).ok_or(StrategyError::Exhausted("the SI pool".into()))?;
                decide(c, CrossingState::ResolvedA, "open on an SI")
            } else {
                let last = last.expect("not opening");
                if is_si(last.crossing) {
                    let c = lowest_unresolved(d, is_si).ok_or(StrategyError::Exhausted("the SI pool".into()))?;
                    decide(c, CrossingState::ResolvedA, "answer an SI with an SI")
                } else {
                    let sign = d.crossing_sign(orientation, last.crossing).expect("last move resolved it");
                    let c = lowest_unresolved(d, |c| !is_si(c)).ok_or(StrategyError::Exhausted("the NSI pool".into()))?;
                    let copy = memory.nsi_replies == 0 && *copy_first;
                    next.nsi_replies += 1;
                    let target = if copy { sign } else { -sign };
                    let tag = if copy { "copy the sign: |plk| becomes 1" } else { "oppose the sign: |plk| stays 1" };
                    decide(c, d.state_for_sign(orientation, c, target), tag)
                }
            }
        }
    };
    Ok((decision, next))
}

fn region_reply(state: &GameState, last: Move, same_sign: bool) -> Result<Move, StrategyError> {
    let d = state.diagram();
    let regions = twist_regions(d);
    let region = regions
        .iter()
        .position(|r| r.contains(last.crossing))
        .ok_or_else(|| StrategyError::Exhausted(format!("crossing {}", last.crossing)))?;
    let c = regions[region]
        .crossings
        .iter()
        .copied()
        .filter(|&c| !d.states()[c].is_resolved())
        .min()
        .ok_or_else(|| StrategyError::Exhausted(format!("twist region {}", region + 1)))?;
    let orientation = d.canonical_orientation();
    let sign = d.sign_with_over(&orientation, last.crossing, last.resolution.over_strand().expect("resolved move"));
    Ok(Move::new(c, d.state_for_sign(&orientation, c, if same_sign { sign } else { -sign })))
}

/// Reply in the twist region of `last` with the opposite crossing sign.
pub fn r2_response(state: &GameState, last: Move) -> Result<Move, StrategyError> {
    region_reply(state, last, false)
}

/// Reply in the twist region of `last` with the same crossing sign.
pub fn anti_r2_response(state: &GameState, last: Move) -> Result<Move, StrategyError> {
    region_reply(state, last, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_rational_shadow;
    use crate::game::{new_game, replay};
    use crate::presets;
    use crate::tangle::ClosureKind;
    use crate::verdict::HalfInt;
    use crate::word::parse_word;

    fn config(word: &str, closure: ClosureKind, first: Role) -> GameConfig {
        GameConfig::new(build_rational_shadow(&parse_word(word).unwrap(), closure).unwrap(), first)
    }

    #[test]
    fn applicability_examples() {
        let c = config("((2),(3),(2),(1))", ClosureKind::Denominator, Role::Linker);
        assert!(applicable_strategies(&c).contains(&StrategyId::SiPairingSecond));
        let c = GameConfig::new(presets::whitehead(), Role::Linker);
        assert_eq!(applicable_strategies(&c), vec![StrategyId::LinkingFirst]);
        let c = GameConfig::new(presets::whitehead(), Role::Unlinker);
        assert!(applicable_strategies(&c).is_empty());
        let c = config("((0),(4))", ClosureKind::Denominator, Role::Linker);
        assert!(applicable_strategies(&c).contains(&StrategyId::UnlinkerAlways));
        assert!(!applicable_strategies(&c).contains(&StrategyId::SiPairingFirst));
        let c = config("((3),(1))", ClosureKind::Numerator, Role::Linker);
        assert!(applicable_strategies(&c).contains(&StrategyId::OddPairSecond));
        assert_eq!(
            StrategyMemory::new(StrategyId::EvenSecond, &c).unwrap_err().to_string(),
            "even-second does not apply: some syllable is odd"
        );
    }

    #[test]
    fn r2_and_anti_r2_replies() {
        let c = config("((4))", ClosureKind::Denominator, Role::Linker);
        let s = new_game(&c).unwrap();
        let first = Move::new(2, CrossingState::ResolvedA);
        let s = s.apply_move(first).unwrap();
        let reply = r2_response(&s, first).unwrap();
        assert_eq!(reply, Move::new(0, CrossingState::ResolvedB));
        assert_eq!(s.apply_move(reply).unwrap().pseudo_linking_number(), HalfInt::ZERO);
        let clasp = anti_r2_response(&s, first).unwrap();
        assert_eq!(s.apply_move(clasp).unwrap().pseudo_linking_number().abs(), HalfInt(2));

        let hopf = GameConfig::new(presets::hopf(), Role::Unlinker);
        let s = new_game(&hopf).unwrap();
        let first = Move::new(0, CrossingState::ResolvedB);
        let s = s.apply_move(first).unwrap();
        let clasp = anti_r2_response(&s, first).unwrap();
        assert_eq!(replay(&hopf, &[first, clasp]).unwrap().winner, Some(Role::Linker));
        let s = s.apply_move(clasp).unwrap();
        assert!(matches!(r2_response(&s, first), Err(StrategyError::Exhausted(_))));
    }

    #[test]
    fn odd_pair_unlinker_opposes() {
        let c = config("((1),(1))", ClosureKind::Numerator, Role::Linker);
        let mem = StrategyMemory::new(StrategyId::OddPairSecond, &c).unwrap();
        assert_eq!(mem.role, Role::Unlinker);
        let s = new_game(&c).unwrap().apply_move(Move::new(0, CrossingState::ResolvedA)).unwrap();
        let (d, _) = choose_move(&s, &mem).unwrap();
        assert_eq!(d.mv, Move::new(1, CrossingState::ResolvedB));
        let end = s.apply_move(d.mv).unwrap();
        assert_eq!(end.diagram().rational_word().unwrap().nets(), vec![1, -1]);
        assert_eq!(end.outcome().unwrap().unwrap().winner, Some(Role::Unlinker));
    }

    #[test]
    fn contract_errors() {
        let c = GameConfig::new(presets::hopf(), Role::Unlinker);
        let mem = StrategyMemory::new(StrategyId::LinkingSecond, &c).unwrap();
        let s = new_game(&c).unwrap();
        assert_eq!(choose_move(&s, &mem).unwrap_err(), StrategyError::NotMyTurn(Role::Linker));
        let s = s.apply_move(Move::new(1, CrossingState::ResolvedA)).unwrap();
        let (d, mem2) = choose_move(&s, &mem).unwrap();
        assert_eq!(mem2.nsi_replies, 1);
        let s = s.apply_move(d.mv).unwrap();
        assert_eq!(s.pseudo_linking_number().abs(), HalfInt(2));
        assert_eq!(choose_move(&s, &mem2).unwrap_err(), StrategyError::GameOver);
        assert_eq!("linking-first".parse::<StrategyId>().unwrap(), StrategyId::LinkingFirst);
    }

    #[test]
    fn memory_rebuilt_from_history() {
        let c = GameConfig::new(presets::whitehead(), Role::Linker);
        let mut mem = StrategyMemory::new(StrategyId::LinkingFirst, &c).unwrap();
        let mut s = new_game(&c).unwrap();
        while !s.is_terminal() {
            let mv = if s.mover() == mem.role {
                let (d, next) = choose_move(&s, &mem).unwrap();
                mem = next;
                d.mv
            } else {
                s.legal_moves()[0]
            };
            s = s.apply_move(mv).unwrap();
            assert_eq!(StrategyMemory::after(StrategyId::LinkingFirst, &c, s.history()).unwrap().nsi_replies, mem.nsi_replies);
        }
        assert!(mem.nsi_replies > 0);
    }
}
