//! Plain-text move logs.
//!
//! ```text
//! # Whitehead game
//! word ((2),(1),(2)) denominator    or: pd whitehead.pd
//! first unlinker
//! m 2 /
//! m 0 \
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::build::{build_rational_shadow, build_two_component, BuildError};
use crate::diagram::{CrossingState, ShadowDiagram};
use crate::game::{Move, Role};
use crate::pd::{parse_pd, PdError};
use crate::tangle::ClosureKind;
use crate::word::{parse_word, WordParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveLogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: '{key}' given twice")]
    Duplicate { line: usize, key: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShadowSource {
    Word { word: String, closure: Option<ClosureKind> },
    Pd(String),
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error(transparent)]
    Word(#[from] WordParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("{0} has no two-component closure")]
    NoTwoComponentClosure(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Pd { path: PathBuf, source: PdError },
}

/// Two-component unresolved closure of a word; without a closure kind, the
/// closure is chosen.
pub fn shadow_from_word(text: &str, closure: Option<ClosureKind>) -> Result<ShadowDiagram, SourceError> {
    let word = parse_word(text)?.to_shadow();
    match closure {
        Some(c) => Ok(build_rational_shadow(&word, c)?),
        None => build_two_component(&word).ok_or_else(|| SourceError::NoTwoComponentClosure(word.to_string())),
    }
}

/// Reads and parses a PD file.
pub fn shadow_from_pd_file(path: &Path) -> Result<ShadowDiagram, SourceError> {
    let text = std::fs::read_to_string(path).map_err(|source| SourceError::Io { path: path.to_path_buf(), source })?;
    parse_pd(&text).map_err(|source| SourceError::Pd { path: path.to_path_buf(), source })
}

impl ShadowSource {
    /// The diagram named by the source; PD paths are relative to `base`.
    pub fn load(&self, base: &Path) -> Result<ShadowDiagram, SourceError> {
        match self {
            ShadowSource::Word { word, closure } => shadow_from_word(word, *closure),
            ShadowSource::Pd(path) => shadow_from_pd_file(&base.join(path)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveLog {
    pub source: Option<ShadowSource>,
    pub first: Option<Role>,
    pub moves: Vec<Move>,
}

fn syntax(line: usize, message: impl Into<String>) -> MoveLogError {
    MoveLogError::Syntax { line, message: message.into() }
}

pub fn parse_move_log(text: &str) -> Result<MoveLog, MoveLogError> {
    let mut log = MoveLog::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "word" | "pd" if log.source.is_some() => return Err(MoveLogError::Duplicate { line: line_no, key: "shadow" }),
            "word" => {
                // The closure is the last token unless the word runs to the end.
                let (word, closure) = match rest.rsplit_once(char::is_whitespace) {
                    Some((w, c)) if !c.ends_with(')') => {
                        let closure = c.parse::<ClosureKind>().map_err(|e| syntax(line_no, e))?;
                        (w.trim().to_string(), Some(closure))
                    }
                    _ => (rest.to_string(), None),
                };
                if word.is_empty() {
                    return Err(syntax(line_no, "missing word"));
                }
                log.source = Some(ShadowSource::Word { word, closure });
            }
            "pd" => {
                if rest.is_empty() {
                    return Err(syntax(line_no, "missing path"));
                }
                log.source = Some(ShadowSource::Pd(rest.to_string()));
            }
            "first" => {
                if log.first.is_some() {
                    return Err(MoveLogError::Duplicate { line: line_no, key: "first" });
                }
                log.first = Some(rest.parse().map_err(|e: String| syntax(line_no, e))?);
            }
            "m" => {
                let mut parts = rest.split_whitespace();
                let (Some(c), Some(mark), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(syntax(line_no, "expected 'm <crossing> </|\\>'"));
                };
                let crossing = c.parse().map_err(|_| syntax(line_no, format!("bad crossing id '{c}'")))?;
                let resolution = match mark {
                    "/" => CrossingState::ResolvedA,
                    "\\" => CrossingState::ResolvedB,
                    _ => return Err(syntax(line_no, format!("bad resolution '{mark}'"))),
                };
                log.moves.push(Move::new(crossing, resolution));
            }
            _ => return Err(syntax(line_no, format!("unknown line '{key}'"))),
        }
    }
    Ok(log)
}

pub fn render_move_log(log: &MoveLog) -> String {
    let mut out = String::new();
    match &log.source {
        Some(ShadowSource::Word { word, closure: Some(c) }) => writeln!(out, "word {word} {c}").unwrap(),
        Some(ShadowSource::Word { word, closure: None }) => writeln!(out, "word {word}").unwrap(),
        Some(ShadowSource::Pd(path)) => writeln!(out, "pd {path}").unwrap(),
        None => {}
    }
    if let Some(first) = log.first {
        writeln!(out, "first {}", first.to_string().to_lowercase()).unwrap();
    }
    for mv in &log.moves {
        writeln!(out, "{mv}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# demo\nword ((2),(1),(2)) denominator\nfirst unlinker\nm 2 /\nm 0 \\\n";
        let log = parse_move_log(text).unwrap();
        assert_eq!(
            log.source,
            Some(ShadowSource::Word { word: "((2),(1),(2))".into(), closure: Some(ClosureKind::Denominator) })
        );
        assert_eq!(log.first, Some(Role::Unlinker));
        assert_eq!(log.moves, vec![Move::new(2, CrossingState::ResolvedA), Move::new(0, CrossingState::ResolvedB)]);
        assert_eq!(parse_move_log(&render_move_log(&log)).unwrap(), log);
    }

    #[test]
    fn word_without_closure_and_pd() {
        let log = parse_move_log("word (2, 1, 2)\n").unwrap();
        assert_eq!(log.source, Some(ShadowSource::Word { word: "(2, 1, 2)".into(), closure: None }));
        let log = parse_move_log("pd fixtures/hopf.pd\nm 1 /").unwrap();
        assert_eq!(log.source, Some(ShadowSource::Pd("fixtures/hopf.pd".into())));
        let hopf = log.source.unwrap().load(Path::new(env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert_eq!(hopf.crossing_count(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_move_log("m 1\n"), Err(MoveLogError::Syntax { line: 1, .. })));
        assert!(matches!(parse_move_log("m x /\n"), Err(MoveLogError::Syntax { .. })));
        assert!(matches!(parse_move_log("m 1 |\n"), Err(MoveLogError::Syntax { .. })));
        assert!(matches!(parse_move_log("first nobody\n"), Err(MoveLogError::Syntax { .. })));
        assert!(matches!(parse_move_log("first linker\nfirst linker\n"), Err(MoveLogError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_move_log("pd a\nword (1)\n"), Err(MoveLogError::Duplicate { .. })));
        assert!(matches!(parse_move_log("jump\n"), Err(MoveLogError::Syntax { .. })));
    }
}
