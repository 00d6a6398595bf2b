//! Rational pseudotangle words: `(a_1(b_1), ..., a_n(b_n))`.
//!
//! Each syllable carries the signed net twist of its resolved crossings and
//! the number of crossings that are still unresolved. Odd positions (1-based)
//! are bottom twists, even positions are right twists.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    /// Sum of the slope signs of the resolved crossings.
    pub net: i32,
    /// Number of unresolved crossings.
    pub unresolved: u32,
}

impl Syllable {
    pub const ZERO: Syllable = Syllable { net: 0, unresolved: 0 };

    pub fn resolved(net: i32) -> Self {
        Syllable { net, unresolved: 0 }
    }

    pub fn unresolved(count: u32) -> Self {
        Syllable { net: 0, unresolved: count }
    }

    /// Number of crossings the syllable stands for after mixed-sign
    /// cancellation.
    pub fn size(&self) -> u32 {
        self.net.unsigned_abs() + self.unresolved
    }

    pub fn is_zero(&self) -> bool {
        self.net == 0 && self.unresolved == 0
    }

    pub fn is_even(&self) -> bool {
        self.size().is_multiple_of(2)
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.net, self.unresolved) {
            (0, 0) => write!(f, "0"),
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "({b})"),
            (a, b) => write!(f, "{a}({b})"),
        }
    }
}

/// Ordered syllables of a rational (pseudo)tangle word. The empty word is the
/// canonical spelling of `(0)` and renders as such.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PseudoTangleWord {
    syllables: Vec<Syllable>,
}

impl PseudoTangleWord {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        PseudoTangleWord { syllables }
    }

    /// Fully resolved word from its nets.
    pub fn from_nets(nets: &[i32]) -> Self {
        Self::new(nets.iter().map(|&n| Syllable::resolved(n)).collect())
    }

    /// All-unresolved word (a shadow) from syllable sizes.
    pub fn shadow(sizes: &[u32]) -> Self {
        Self::new(sizes.iter().map(|&b| Syllable::unresolved(b)).collect())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Syllables with `(0)` substituted for the empty word.
    pub fn normalized(&self) -> Vec<Syllable> {
        if self.syllables.is_empty() {
            vec![Syllable::ZERO]
        } else {
            self.syllables.clone()
        }
    }

    pub fn nets(&self) -> Vec<i32> {
        self.normalized().iter().map(|s| s.net).collect()
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.normalized().iter().map(|s| s.size()).collect()
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.syllables.iter().all(|s| s.unresolved == 0)
    }

    pub fn is_fully_unresolved(&self) -> bool {
        self.syllables.iter().all(|s| s.net == 0)
    }

    /// Total crossing count after cancellation inside syllables.
    pub fn crossing_count(&self) -> u32 {
        self.syllables.iter().map(Syllable::size).sum()
    }

    /// The shadow this word is drawn on: every crossing unresolved.
    pub fn to_shadow(&self) -> Self {
        Self::shadow(&self.sizes())
    }

    /// Reflect every crossing.
    pub fn mirror(&self) -> Self {
        Self::new(self.syllables.iter().map(|s| Syllable { net: -s.net, unresolved: s.unresolved }).collect())
    }

    /// Rendering with a `*` after every syllable index in `starred` (0-based).
    pub fn render_starred(&self, starred: &[usize]) -> String {
        let items: Vec<String> = self
            .normalized()
            .iter()
            .enumerate()
            .map(|(i, s)| if starred.contains(&i) { format!("{s}*") } else { s.to_string() })
            .collect();
        format!("({})", items.join(","))
    }
}

impl fmt::Display for PseudoTangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_starred(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("syntax error at position {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("negative unresolved count at position {pos}")]
    NegativeUnresolved { pos: usize },
    #[error("integer out of range at position {pos}")]
    Overflow { pos: usize },
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, expected: &'static str) -> Result<(), WordParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(WordParseError::Syntax { pos: self.pos, expected })
        }
    }

    fn int(&mut self) -> Result<i64, WordParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(WordParseError::Syntax { pos: start, expected: "integer" });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        text.parse::<i64>().ok().filter(|v| v.unsigned_abs() <= i32::MAX as u64).ok_or(WordParseError::Overflow { pos: start })
    }

    fn unresolved_count(&mut self) -> Result<u32, WordParseError> {
        self.expect(b'(', "'('")?;
        self.skip_ws();
        let pos = self.pos;
        let v = self.int()?;
        if v < 0 {
            return Err(WordParseError::NegativeUnresolved { pos });
        }
        self.expect(b')', "')'")?;
        Ok(v as u32)
    }
}

/// Parse a word in the grammar
/// `'(' item (',' item)* ')'`, `item := int | int '(' uint ')' | '(' uint ')'`.
pub fn parse_word(text: &str) -> Result<PseudoTangleWord, WordParseError> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    cur.expect(b'(', "'('")?;
    let mut syllables = Vec::new();
    loop {
        let syllable = match cur.peek() {
            Some(b'(') => Syllable::unresolved(cur.unresolved_count()?),
            _ => {
                let net = cur.int()? as i32;
                let unresolved = if cur.peek() == Some(b'(') { cur.unresolved_count()? } else { 0 };
                Syllable { net, unresolved }
            }
        };
        syllables.push(syllable);
        match cur.peek() {
            Some(b',') => cur.pos += 1,
            Some(b')') => {
                cur.pos += 1;
                break;
            }
            _ => return Err(WordParseError::Syntax { pos: cur.pos, expected: "',' or ')'" }),
        }
    }
    if cur.peek().is_some() {
        return Err(WordParseError::Syntax { pos: cur.pos, expected: "end of input" });
    }
    Ok(PseudoTangleWord::new(syllables))
}

impl FromStr for PseudoTangleWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_word() {
        let w = parse_word("(2,-3,-2,1)").unwrap();
        assert_eq!(w.nets(), vec![2, -3, -2, 1]);
        assert!(w.is_fully_resolved());
    }

    #[test]
    fn parses_identity_word() {
        let w = parse_word("(0)").unwrap();
        assert_eq!(w.syllables(), &[Syllable::ZERO]);
    }

    #[test]
    fn parses_pseudo_syllable() {
        let w = parse_word("(1(2),-3)").unwrap();
        assert_eq!(w.syllables()[0], Syllable { net: 1, unresolved: 2 });
        assert_eq!(w.syllables()[1], Syllable::resolved(-3));
    }

    #[test]
    fn parses_bare_unresolved_and_whitespace() {
        let w = parse_word(" ( (3) , 0 (2), +4 ) ").unwrap();
        assert_eq!(w.syllables()[0], Syllable::unresolved(3));
        assert_eq!(w.syllables()[1], Syllable::unresolved(2));
        assert_eq!(w.syllables()[2], Syllable::resolved(4));
        assert_eq!(w.to_string(), "((3),(2),4)");
    }

    #[test]
    fn rejects_negative_unresolved() {
        assert_eq!(parse_word("(1(-2))"), Err(WordParseError::NegativeUnresolved { pos: 3 }));
    }

    #[test]
    fn reports_syntax_position() {
        match parse_word("(1,,2)") {
            Err(WordParseError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_word("1,2").is_err());
        assert!(parse_word("(1,2) x").is_err());
        assert!(parse_word("(1").is_err());
    }

    #[test]
    fn renders_omission_conventions() {
        let w = PseudoTangleWord::new(vec![
            Syllable { net: 0, unresolved: 0 },
            Syllable { net: 2, unresolved: 0 },
            Syllable { net: 0, unresolved: 3 },
            Syllable { net: -1, unresolved: 1 },
        ]);
        assert_eq!(w.to_string(), "(0,2,(3),-1(1))");
        assert_eq!(PseudoTangleWord::default().to_string(), "(0)");
    }

    #[test]
    fn starred_rendering() {
        let w = parse_word("(2,-3,-2,1)").unwrap();
        assert_eq!(w.render_starred(&[1, 3]), "(2,-3*,-2,1*)");
    }
}
