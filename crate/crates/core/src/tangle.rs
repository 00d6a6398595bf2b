//! Classification, decomposition, rewriting and splittability of rational
//! tangle words.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fraction::{tangle_fraction, TangleFraction};
use crate::verdict::{Certificate, SplitEvidence, Verdict};
use crate::word::{PseudoTangleWord, Syllable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("operation needs a nonempty word")]
    EmptyWord,
    #[error("word {0} still has unresolved crossings")]
    NotResolved(String),
    #[error("word {0} has no two-component closure")]
    NoTwoComponentClosure(String),
    #[error("decomposition taxonomy violated: {0}")]
    Taxonomy(String),
}

/// Whether a crossing (or a whole syllable) joins a strand to itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntersectionKind {
    #[serde(rename = "SI")]
    SelfIntersection,
    #[serde(rename = "NSI")]
    NonSelf,
}

impl IntersectionKind {
    pub fn is_self(self) -> bool {
        self == IntersectionKind::SelfIntersection
    }
}

impl fmt::Display for IntersectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntersectionKind::SelfIntersection => "SI",
            IntersectionKind::NonSelf => "NSI",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    Numerator,
    Denominator,
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureKind::Numerator => "numerator",
            ClosureKind::Denominator => "denominator",
        })
    }
}

impl std::str::FromStr for ClosureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "numerator" | "n" => Ok(ClosureKind::Numerator),
            "denominator" | "d" => Ok(ClosureKind::Denominator),
            other => Err(format!("unknown closure '{other}'")),
        }
    }
}

/// How the four tangle endpoints are joined by the two strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndpointPairing {
    /// NW-NE and SW-SE.
    TopBottom,
    /// NW-SW and NE-SE.
    LeftRight,
    /// NW-SE and NE-SW.
    Diagonal,
}

impl EndpointPairing {
    /// The closure that joins each strand to itself, if any.
    pub fn two_component_closure(self) -> Option<ClosureKind> {
        match self {
            EndpointPairing::TopBottom => Some(ClosureKind::Numerator),
            EndpointPairing::LeftRight => Some(ClosureKind::Denominator),
            EndpointPairing::Diagonal => None,
        }
    }

    /// Kind of the crossings produced by twisting the next syllable at
    /// 0-based position `index`.
    fn twist_kind(self, index: usize) -> IntersectionKind {
        let same_strand =
            if index.is_multiple_of(2) { self == EndpointPairing::TopBottom } else { self == EndpointPairing::LeftRight };
        if same_strand {
            IntersectionKind::SelfIntersection
        } else {
            IntersectionKind::NonSelf
        }
    }

    fn after_twist(self, index: usize, size: u32) -> Self {
        use EndpointPairing::*;
        if size.is_multiple_of(2) || self.twist_kind(index).is_self() {
            return self;
        }
        match (index % 2, self) {
            (0, LeftRight) => Diagonal,
            (0, Diagonal) => LeftRight,
            (1, TopBottom) => Diagonal,
            (1, Diagonal) => TopBottom,
            _ => self,
        }
    }
}

/// Syllable kinds by forward application of the SI/NSI propagation rules:
/// the first syllable is NSI; the second is SI iff the first is even; after
/// an SI syllable comes an NSI one; the syllable two after an SI is SI iff
/// the one between is even; after two NSI syllables comes an SI one iff the
/// latter of them is odd.
pub fn classify_syllables(word: &PseudoTangleWord) -> Vec<IntersectionKind> {
    use IntersectionKind::*;
    let syl = word.normalized();
    let mut kinds: Vec<IntersectionKind> = Vec::with_capacity(syl.len());
    for i in 0..syl.len() {
        let kind = match i {
            0 => NonSelf,
            1 => {
                if syl[0].is_even() {
                    SelfIntersection
                } else {
                    NonSelf
                }
            }
            _ => {
                if kinds[i - 1].is_self() {
                    NonSelf
                } else if kinds[i - 2].is_self() {
                    if syl[i - 1].is_even() {
                        SelfIntersection
                    } else {
                        NonSelf
                    }
                } else if syl[i - 1].is_even() {
                    NonSelf
                } else {
                    SelfIntersection
                }
            }
        };
        kinds.push(kind);
    }
    kinds
}

/// Syllable kinds from the endpoint-pairing walk through the construction.
/// Independent of [`classify_syllables`]; the two must agree.
pub fn trace_syllable_kinds(word: &PseudoTangleWord) -> Vec<IntersectionKind> {
    let mut pairing = EndpointPairing::LeftRight;
    word.normalized()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let kind = pairing.twist_kind(i);
            pairing = pairing.after_twist(i, s.size());
            kind
        })
        .collect()
}

/// `(nsi_count, si_count)` summed over syllable sizes.
pub fn count_intersections(word: &PseudoTangleWord) -> (u32, u32) {
    let kinds = classify_syllables(word);
    word.normalized().iter().zip(kinds).fold(
        (0, 0),
        |(nsi, si), (s, k)| {
            if k.is_self() {
                (nsi, si + s.size())
            } else {
                (nsi + s.size(), si)
            }
        },
    )
}

/// Endpoint pairing after the whole construction, and the closure (if any)
/// that yields two components.
pub fn closure_components(word: &PseudoTangleWord) -> (EndpointPairing, Option<ClosureKind>) {
    let pairing = word.normalized().iter().enumerate().fold(EndpointPairing::LeftRight, |p, (i, s)| p.after_twist(i, s.size()));
    (pairing, pairing.two_component_closure())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StringTag {
    SingleEven,
    TwoOdd,
    OddEvensOdd,
    FinalSingleOdd,
    FinalOddEvens,
}

impl StringTag {
    /// Tags whose NSI count is even.
    pub fn is_even_type(self) -> bool {
        matches!(self, StringTag::SingleEven | StringTag::TwoOdd | StringTag::OddEvensOdd)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    NsiString { syllables: Range<usize>, tag: StringTag },
    IsolatedSi(usize),
}

impl Block {
    pub fn range(&self) -> Range<usize> {
        match self {
            Block::NsiString { syllables, .. } => syllables.clone(),
            Block::IsolatedSi(i) => *i..*i + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
}

impl Decomposition {
    pub fn si_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::IsolatedSi(i) => Some(*i),
                _ => None,
            })
            .collect()
    }

    /// Block index of every syllable.
    pub fn block_of_syllable(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (bi, b) in self.blocks.iter().enumerate() {
            for _ in b.range() {
                out.push(bi);
            }
        }
        out
    }

    /// Human-readable block listing, 1-based like the starred notation.
    pub fn describe(&self) -> String {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::NsiString { syllables, tag } => {
                    let r = if syllables.len() == 1 {
                        format!("{}", syllables.start + 1)
                    } else {
                        format!("{}..{}", syllables.start + 1, syllables.end)
                    };
                    format!("[NSI {r} {}]", serde_json::to_value(tag).unwrap().as_str().unwrap())
                }
                Block::IsolatedSi(i) => format!("[SI {}]", i + 1),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn tag_string(syl: &[Syllable], range: Range<usize>, is_final: bool, nsi_even: bool) -> Result<StringTag, TangleError> {
    let s = &syl[range.clone()];
    let odd = |x: &Syllable| !x.is_even();
    let all_even = |xs: &[Syllable]| xs.iter().all(Syllable::is_even);
    let tag = if s.len() == 1 && s[0].is_even() {
        Some(StringTag::SingleEven)
    } else if s.len() == 2 && odd(&s[0]) && odd(&s[1]) {
        Some(StringTag::TwoOdd)
    } else if s.len() >= 3 && odd(&s[0]) && odd(&s[s.len() - 1]) && all_even(&s[1..s.len() - 1]) {
        Some(StringTag::OddEvensOdd)
    } else if s.len() == 1 {
        Some(StringTag::FinalSingleOdd)
    } else if odd(&s[0]) && all_even(&s[1..]) {
        Some(StringTag::FinalOddEvens)
    } else {
        None
    };
    let ok = match tag {
        Some(t) if !is_final => t.is_even_type(),
        Some(t) => t.is_even_type() == nsi_even,
        None => false,
    };
    match tag {
        Some(t) if ok => Ok(t),
        _ => Err(TangleError::Taxonomy(format!(
            "{}NSI string at syllables {}..{} does not fit",
            if is_final { "final " } else { "" },
            range.start + 1,
            range.end
        ))),
    }
}

/// Split the word into maximal NSI strings alternating with isolated SI
/// syllables and tag each string.
pub fn decompose_word(word: &PseudoTangleWord) -> Result<Decomposition, TangleError> {
    let syl = word.normalized();
    let kinds = classify_syllables(word);
    let (nsi, _) = count_intersections(word);
    let mut raw: Vec<Result<Range<usize>, usize>> = Vec::new();
    let mut i = 0;
    while i < syl.len() {
        if kinds[i].is_self() {
            if matches!(raw.last(), Some(Err(_))) {
                return Err(TangleError::Taxonomy(format!("adjacent SI syllables at {}", i + 1)));
            }
            raw.push(Err(i));
            i += 1;
        } else {
            let start = i;
            while i < syl.len() && !kinds[i].is_self() {
                i += 1;
            }
            raw.push(Ok(start..i));
        }
    }
    let last_string = raw.iter().rposition(|b| b.is_ok());
    let blocks = raw
        .into_iter()
        .enumerate()
        .map(|(bi, b)| match b {
            Ok(range) => {
                let tag = tag_string(&syl, range.clone(), Some(bi) == last_string, nsi % 2 == 0)?;
                Ok(Block::NsiString { syllables: range, tag })
            }
            Err(i) => Ok(Block::IsolatedSi(i)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Decomposition { blocks })
}

/// Rendering with `*` after every isolated SI syllable.
pub fn render_decomposed(word: &PseudoTangleWord) -> Result<String, TangleError> {
    let d = decompose_word(word)?;
    Ok(word.render_starred(&d.si_indices()))
}

/// The six tangle equivalences used for rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statement {
    /// Drop a trailing `0`.
    DropTrailingZero,
    /// `(.., a, 0, b, ..) = (.., a + b, ..)`.
    MergeAcrossZero,
    /// `(.., a, 0, 0, b, ..) = (.., a, b, ..)`.
    DropZeroPair,
    /// `(0, a + 1, ..) = (0, a, ..)`; applied towards zero.
    AbsorbAfterLeadingZero,
    /// `(1, a, ..) = (a + 1, ..)`.
    LeadingOne,
    /// `(-1, a, ..) = (a - 1, ..)`.
    LeadingMinusOne,
}

impl Statement {
    pub const ALL: [Statement; 6] = [
        Statement::DropTrailingZero,
        Statement::MergeAcrossZero,
        Statement::DropZeroPair,
        Statement::AbsorbAfterLeadingZero,
        Statement::LeadingOne,
        Statement::LeadingMinusOne,
    ];

    pub fn number(self) -> u8 {
        Statement::ALL.iter().position(|&s| s == self).unwrap() as u8
    }

    /// Whether the statement swaps the twist direction of the syllables it
    /// shifts (and thus maps the fraction to its reciprocal).
    pub fn inverts_fraction(self) -> bool {
        matches!(self, Statement::LeadingOne | Statement::LeadingMinusOne)
    }
}

fn add(a: Syllable, b: Syllable) -> Syllable {
    Syllable { net: a.net + b.net, unresolved: a.unresolved + b.unresolved }
}

/// Apply `statement` anchored at syllable `pos` if it matches there.
///
/// Anchors: the syllable before the zero(s) for merges, 0 for the leading
/// statements, the last index for trailing-zero removal.
pub fn apply_statement(syl: &[Syllable], statement: Statement, pos: usize) -> Option<Vec<Syllable>> {
    let n = syl.len();
    let resolved = |s: &Syllable| s.unresolved == 0;
    match statement {
        Statement::DropTrailingZero => (n >= 2 && pos == n - 1 && syl[pos].is_zero()).then(|| syl[..n - 1].to_vec()),
        Statement::MergeAcrossZero => {
            if pos + 2 < n && syl[pos + 1].is_zero() {
                let mut out = syl[..pos].to_vec();
                out.push(add(syl[pos], syl[pos + 2]));
                out.extend_from_slice(&syl[pos + 3..]);
                Some(out)
            } else {
                None
            }
        }
        Statement::DropZeroPair => {
            if pos + 3 < n && syl[pos + 1].is_zero() && syl[pos + 2].is_zero() {
                let mut out = syl[..=pos].to_vec();
                out.extend_from_slice(&syl[pos + 3..]);
                Some(out)
            } else {
                None
            }
        }
        Statement::AbsorbAfterLeadingZero => {
            if pos == 0 && n >= 2 && syl[0].is_zero() && syl[1].net != 0 && syl.iter().all(resolved) {
                let mut out = syl.to_vec();
                out[1].net -= syl[1].net.signum();
                Some(out)
            } else {
                None
            }
        }
        Statement::LeadingOne | Statement::LeadingMinusOne => {
            let lead = if statement == Statement::LeadingOne { 1 } else { -1 };
            if pos == 0 && n >= 2 && syl[0] == Syllable::resolved(lead) && syl.iter().all(resolved) {
                let mut out = vec![Syllable { net: syl[1].net + lead, unresolved: syl[1].unresolved }];
                out.extend_from_slice(&syl[2..]);
                Some(out)
            } else {
                None
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub statement: Statement,
    pub position: usize,
    pub result: PseudoTangleWord,
}

/// Rewrite to a fixed point: trailing zeros first, then the leftmost
/// applicable statement (ties broken by statement number). Words with
/// unresolved crossings only use the zero-handling statements.
pub fn reduce_word_traced(word: &PseudoTangleWord) -> (PseudoTangleWord, Vec<RewriteStep>) {
    let mut syl = word.normalized();
    let partial = !word.is_fully_resolved();
    let mut trace = Vec::new();
    'outer: loop {
        if let Some(next) = apply_statement(&syl, Statement::DropTrailingZero, syl.len().saturating_sub(1)) {
            syl = next;
            trace.push(RewriteStep {
                statement: Statement::DropTrailingZero,
                position: syl.len(),
                result: PseudoTangleWord::new(syl.clone()),
            });
            continue;
        }
        for pos in 0..syl.len() {
            for st in &Statement::ALL[1..] {
                if partial && st.number() > 2 {
                    continue;
                }
                if let Some(next) = apply_statement(&syl, *st, pos) {
                    syl = next;
                    trace.push(RewriteStep { statement: *st, position: pos, result: PseudoTangleWord::new(syl.clone()) });
                    continue 'outer;
                }
            }
        }
        break;
    }
    (PseudoTangleWord::new(syl), trace)
}

pub fn reduce_word(word: &PseudoTangleWord) -> PseudoTangleWord {
    reduce_word_traced(word).0
}

/// Splittability of the two-component closure of a fully resolved word:
/// split exactly when the fraction is `0` or `∞`.
pub fn rational_splittability(word: &PseudoTangleWord) -> Result<Verdict, TangleError> {
    if !word.is_fully_resolved() {
        return Err(TangleError::NotResolved(word.to_string()));
    }
    if closure_components(word).1.is_none() {
        return Err(TangleError::NoTwoComponentClosure(word.to_string()));
    }
    let f: TangleFraction = tangle_fraction(word);
    Ok(if f.is_trivial() {
        Verdict::Splittable(SplitEvidence::TrivialFraction(f))
    } else {
        Verdict::Unsplittable(Certificate::Fraction(f))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;
    use IntersectionKind::*;

    fn w(s: &str) -> PseudoTangleWord {
        parse_word(s).unwrap()
    }

    const EXAMPLE: &str = "(1,4,2,1,3,5,3,2,1,2,0,5,2,6,4)";

    #[test]
    fn example_si_positions() {
        let kinds = classify_syllables(&w(EXAMPLE));
        let si: Vec<usize> = kinds.iter().enumerate().filter(|(_, k)| k.is_self()).map(|(i, _)| i + 1).collect();
        assert_eq!(si, vec![5, 8, 13, 15]);
    }

    #[test]
    fn small_classifications() {
        assert_eq!(classify_syllables(&w("(0)")), vec![NonSelf]);
        assert_eq!(classify_syllables(&w("(2,-3,-2,1)")), vec![NonSelf, SelfIntersection, NonSelf, SelfIntersection]);
        assert_eq!(trace_syllable_kinds(&w("(2,-3,-2,1)")), classify_syllables(&w("(2,-3,-2,1)")));
    }

    #[test]
    fn counts() {
        assert_eq!(count_intersections(&w("(2,-3,-2,1)")), (4, 4));
        assert_eq!(count_intersections(&w("(0)")), (0, 0));
        assert_eq!(count_intersections(&w("(1,1)")), (2, 0));
        assert_eq!(count_intersections(&w("((2),1(1))")), (2, 2));
    }

    #[test]
    fn example_decomposition() {
        let d = decompose_word(&w(EXAMPLE)).unwrap();
        use Block::*;
        use StringTag::*;
        assert_eq!(
            d.blocks,
            vec![
                NsiString { syllables: 0..4, tag: OddEvensOdd },
                IsolatedSi(4),
                NsiString { syllables: 5..7, tag: TwoOdd },
                IsolatedSi(7),
                NsiString { syllables: 8..12, tag: OddEvensOdd },
                IsolatedSi(12),
                NsiString { syllables: 13..14, tag: SingleEven },
                IsolatedSi(14),
            ]
        );
        assert_eq!(render_decomposed(&w(EXAMPLE)).unwrap(), "(1,4,2,1,3*,5,3,2*,1,2,0,5,2*,6,4*)");
    }

    #[test]
    fn small_decompositions() {
        let d = decompose_word(&w("(2)")).unwrap();
        assert_eq!(d.blocks, vec![Block::NsiString { syllables: 0..1, tag: StringTag::SingleEven }]);
        let d = decompose_word(&w("(1,1)")).unwrap();
        assert_eq!(d.blocks, vec![Block::NsiString { syllables: 0..2, tag: StringTag::TwoOdd }]);
        let d = decompose_word(&w("(1,2)")).unwrap();
        assert_eq!(d.blocks, vec![Block::NsiString { syllables: 0..2, tag: StringTag::FinalOddEvens }]);
        let d = decompose_word(&w("(3)")).unwrap();
        assert_eq!(d.blocks, vec![Block::NsiString { syllables: 0..1, tag: StringTag::FinalSingleOdd }]);
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_word(&w("(1,0,-1)")), w("(0)"));
        assert_eq!(reduce_word(&w("(1,1)")), w("(2)"));
        assert_eq!(reduce_word(&w("(0,4,0,6)")), w("(0)"));
        assert_eq!(reduce_word(&w("(2,1,2)")), w("(2,1,2)"));
        assert_eq!(reduce_word(&w("(1,-1)")), w("(0)"));
        assert_eq!(reduce_word(&w("(-1,0,-1)")), w("(-2)"));
    }

    #[test]
    fn partial_words_only_use_zero_statements() {
        let (r, trace) = reduce_word_traced(&w("(1,(2),0)"));
        assert_eq!(r, w("(1,(2))"));
        assert!(trace.iter().all(|s| s.statement.number() <= 2));
        assert_eq!(reduce_word(&w("((2),0,(1))")), w("((3))"));
    }

    #[test]
    fn closures() {
        assert_eq!(closure_components(&w("(2)")), (EndpointPairing::LeftRight, Some(ClosureKind::Denominator)));
        assert_eq!(closure_components(&w("(2,-3,-2,1)")).1, Some(ClosureKind::Denominator));
        assert_eq!(closure_components(&w("(1,1)")).1, Some(ClosureKind::Numerator));
        assert_eq!(closure_components(&w("(1)")), (EndpointPairing::Diagonal, None));
    }

    #[test]
    fn reduction_anchors() {
        assert!(rational_splittability(&w("(0)")).unwrap().is_splittable());
        assert!(rational_splittability(&w("(2)")).unwrap().is_unsplittable());
        assert!(rational_splittability(&w("(-2)")).unwrap().is_unsplittable());
        assert!(rational_splittability(&w("(1,-1)")).unwrap().is_splittable());
    }

    #[test]
    fn splittability_errors() {
        assert!(matches!(rational_splittability(&w("(1)")), Err(TangleError::NoTwoComponentClosure(_))));
        assert!(matches!(rational_splittability(&w("(1(1))")), Err(TangleError::NotResolved(_))));
    }
}
