//! Exhaustive check of a strategy against every opponent line.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::game::{GameConfig, GameState, Move, Role};
use crate::strategy::{choose_move, StrategyError, StrategyId, StrategyMemory};
use crate::verdict::HalfInt;

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Replace the first sign copy of the linking policies by a sign
    /// opposition.
    pub skip_sign_copy: bool,
    /// Keep every line with its terminal verdict in the report.
    pub keep_lines: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineResult {
    pub moves: Vec<Move>,
    pub verdict: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub strategy: Option<StrategyId>,
    pub role: Option<Role>,
    pub first_mover: Option<Role>,
    pub lines: usize,
    pub wins: usize,
    pub loss_lines: Vec<Vec<Move>>,
    pub undecided_lines: Vec<Vec<Move>>,
    /// Lines where the policy had no answer.
    pub errors: Vec<(Vec<Move>, String)>,
    /// Linking policies: positions after a Linker NSI reply with |plk| != 1.
    pub plk_violations: Vec<Vec<Move>>,
    pub verdicts: BTreeMap<String, usize>,
    pub line_results: Vec<LineResult>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.loss_lines.is_empty() && self.undecided_lines.is_empty() && self.errors.is_empty() && self.plk_violations.is_empty()
    }

    fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.lines += other.lines;
        self.wins += other.wins;
        self.loss_lines.extend(other.loss_lines);
        self.undecided_lines.extend(other.undecided_lines);
        self.errors.extend(other.errors);
        self.plk_violations.extend(other.plk_violations);
        for (k, v) in other.verdicts {
            *self.verdicts.entry(k).or_default() += v;
        }
        self.line_results.extend(other.line_results);
        self
    }

    pub fn summary(&self) -> String {
        format!(
            "{} lines, {} wins, {} losses, {} undecided, {} errors, {} plk violations",
            self.lines,
            self.wins,
            self.loss_lines.len(),
            self.undecided_lines.len(),
            self.errors.len(),
            self.plk_violations.len()
        )
    }
}

fn explore(state: GameState, memory: StrategyMemory, options: VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport::default();
    let history = || state.history().to_vec();
    if state.is_terminal() {
        report.lines = 1;
        let outcome = match state.outcome() {
            Ok(o) => o.expect("terminal"),
            Err(e) => {
                report.errors.push((history(), e.to_string()));
                return report;
            }
        };
        let label = outcome.verdict.label().to_string();
        *report.verdicts.entry(label.clone()).or_default() += 1;
        match outcome.winner {
            Some(w) if w == memory.role => report.wins = 1,
            Some(_) => report.loss_lines.push(history()),
            None => report.undecided_lines.push(history()),
        }
        if options.keep_lines {
            report.line_results.push(LineResult { moves: history(), verdict: label });
        }
        return report;
    }
    if state.mover() == memory.role {
        let (decision, next_memory) = match choose_move(&state, &memory) {
            Ok(x) => x,
            Err(e) => {
                report.lines = 1;
                report.errors.push((history(), e.to_string()));
                return report;
            }
        };
        let next = match state.apply_move(decision.mv) {
            Ok(s) => s,
            Err(e) => {
                report.lines = 1;
                report.errors.push((history(), e.to_string()));
                return report;
            }
        };
        let mut sub = explore(next.clone(), next_memory.clone(), options);
        let nsi_reply = next_memory.nsi_replies > memory.nsi_replies;
        if memory.tracks_linking_number() && nsi_reply && next.pseudo_linking_number().abs() != HalfInt(2) {
            sub.plk_violations.push(next.history().to_vec());
        }
        return sub;
    }
    let branches: Vec<GameState> = state.legal_moves().into_iter().map(|mv| state.apply_move(mv).expect("legal move")).collect();
    let go = |s: GameState| explore(s, memory.clone(), options);
    // Fan out near the root only; deeper levels are cheap.
    if state.history().len() < 2 {
        branches.into_par_iter().map(go).reduce(VerifyReport::default, VerifyReport::merge)
    } else {
        branches.into_iter().map(go).fold(VerifyReport::default(), VerifyReport::merge)
    }
}

pub fn verify_strategy(id: StrategyId, config: &GameConfig) -> Result<VerifyReport, StrategyError> {
    verify_strategy_with(id, config, VerifyOptions::default())
}

pub fn verify_strategy_with(id: StrategyId, config: &GameConfig, options: VerifyOptions) -> Result<VerifyReport, StrategyError> {
    let mut memory = StrategyMemory::new(id, config)?;
    if options.skip_sign_copy {
        memory = memory.without_sign_copy();
    }
    let state = crate::game::new_game(config).map_err(|e| StrategyError::NotApplicable { id, reason: e.to_string() })?;
    let mut report = explore(state, memory.clone(), options);
    report.strategy = Some(id);
    report.role = Some(memory.role);
    report.first_mover = Some(config.first_mover);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_rational_shadow;
    use crate::presets;
    use crate::tangle::ClosureKind;
    use crate::word::parse_word;

    #[test]
    fn odd_pair_linker_on_three_one() {
        let shadow = build_rational_shadow(&parse_word("((3),(1))").unwrap(), ClosureKind::Numerator).unwrap();
        let config = GameConfig::new(shadow, Role::Unlinker);
        let r = verify_strategy(StrategyId::OddPairSecond, &config).unwrap();
        assert!(r.is_clean(), "{}", r.summary());
        // Unlinker moves twice with 8 then 4 choices.
        assert_eq!(r.lines, 32);
        assert_eq!(r.wins, 32);
    }

    #[test]
    fn linking_first_on_whitehead() {
        let config = GameConfig::new(presets::whitehead(), Role::Linker);
        let r = verify_strategy_with(StrategyId::LinkingFirst, &config, VerifyOptions { keep_lines: true, ..Default::default() })
            .unwrap();
        assert!(r.is_clean(), "{}", r.summary());
        assert_eq!(r.line_results.len(), r.lines);
        let (config, _) = presets::whitehead_game();
        assert!(verify_strategy(StrategyId::LinkingFirst, &config).is_err());
    }

    #[test]
    fn skipping_the_sign_copy_loses() {
        let config = GameConfig::new(presets::hopf(), Role::Unlinker);
        assert!(verify_strategy(StrategyId::LinkingSecond, &config).unwrap().is_clean());
        let r = verify_strategy_with(
            StrategyId::LinkingSecond,
            &config,
            VerifyOptions { skip_sign_copy: true, ..Default::default() },
        )
        .unwrap();
        assert!(!r.loss_lines.is_empty());
        assert!(!r.plk_violations.is_empty());
    }
}
