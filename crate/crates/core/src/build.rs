//! Construction of rational tangle diagrams and their closures.
//!
//! The tangle starts as two vertical strands (NW-SW and NE-SE). A bottom
//! twist hangs a crossing under the box, a right twist sets one beside it.
//! Every crossing is drawn with slot 0 to the northeast, so a resolved
//! crossing's state records the slope of its overstrand.

use thiserror::Error;

use crate::diagram::{CrossingState, Dart, DiagramError, Provenance, ShadowDiagram, Shape};
use crate::tangle::{closure_components, ClosureKind};
use crate::word::PseudoTangleWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("the {closure} closure of {word} has {components} component(s)")]
    WrongComponents { word: String, closure: ClosureKind, components: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

const NW: usize = 0;
const NE: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

#[derive(Clone, Copy, Debug)]
enum End {
    Dart(Dart),
    Terminal(usize),
}

struct Builder {
    partner: Vec<Option<Dart>>,
    ends: [End; 4],
    coords: Vec<Option<(f64, f64)>>,
    states: Vec<CrossingState>,
    syllable_of: Vec<usize>,
    loops: usize,
    // Bounding box of the tangle drawn so far: left, right, bottom, top.
    bbox: (f64, f64, f64, f64),
}

impl Builder {
    fn new() -> Self {
        Builder {
            partner: Vec::new(),
            ends: [End::Terminal(SW), End::Terminal(SE), End::Terminal(NW), End::Terminal(NE)],
            coords: Vec::new(),
            states: Vec::new(),
            syllable_of: Vec::new(),
            loops: 0,
            bbox: (0.0, 1.0, 0.0, 1.0),
        }
    }

    fn link(&mut self, a: Dart, b: Dart) {
        self.partner[a.index()] = Some(b);
        self.partner[b.index()] = Some(a);
    }

    fn add_crossing(&mut self, state: CrossingState, syllable: usize, at: (f64, f64)) -> usize {
        let c = self.states.len();
        self.partner.extend([None; 4]);
        self.states.push(state);
        self.syllable_of.push(syllable);
        self.coords.push(Some(at));
        c
    }

    /// Attach new darts to two box terminals at once.
    fn attach(&mut self, pairs: [(usize, Dart); 2]) {
        let old = self.ends;
        let mut joined = false;
        for (k, &(t, x)) in pairs.iter().enumerate() {
            let (other_t, other_x) = pairs[1 - k];
            match old[t] {
                End::Dart(d) => self.link(d, x),
                End::Terminal(t2) if t2 == other_t => {
                    if !joined {
                        self.link(x, other_x);
                        joined = true;
                    }
                }
                End::Terminal(t2) => self.ends[t2] = End::Dart(x),
            }
        }
    }

    fn bottom_twist(&mut self, state: CrossingState, syllable: usize) {
        let (l, r, b, _) = self.bbox;
        let c = self.add_crossing(state, syllable, ((l + r) / 2.0, b - 0.5));
        self.attach([(SW, Dart::new(c, 1)), (SE, Dart::new(c, 0))]);
        self.ends[SW] = End::Dart(Dart::new(c, 2));
        self.ends[SE] = End::Dart(Dart::new(c, 3));
        self.bbox.2 = b - 1.0;
    }

    fn right_twist(&mut self, state: CrossingState, syllable: usize) {
        let (_, r, b, t) = self.bbox;
        let c = self.add_crossing(state, syllable, (r + 0.5, (b + t) / 2.0));
        self.attach([(NE, Dart::new(c, 1)), (SE, Dart::new(c, 2))]);
        self.ends[NE] = End::Dart(Dart::new(c, 0));
        self.ends[SE] = End::Dart(Dart::new(c, 3));
        self.bbox.1 = r + 1.0;
    }

    fn join_terminals(&mut self, a: usize, b: usize) {
        match (self.ends[a], self.ends[b]) {
            (End::Dart(x), End::Dart(y)) => self.link(x, y),
            (End::Terminal(t), _) if t == b => self.loops += 1,
            (End::Terminal(t), End::Terminal(u)) => {
                self.ends[t] = End::Terminal(u);
                self.ends[u] = End::Terminal(t);
            }
            (End::Terminal(t), End::Dart(y)) | (End::Dart(y), End::Terminal(t)) => self.ends[t] = End::Dart(y),
        }
    }
}

/// Diagram of the closure of `word`. Syllables with a nonzero net get that
/// many crossings of the matching slope first; the rest stay unresolved.
pub fn build_closure(word: &PseudoTangleWord, closure: ClosureKind) -> Result<ShadowDiagram, DiagramError> {
    let mut b = Builder::new();
    let syllables = word.normalized();
    for (i, s) in syllables.iter().enumerate() {
        let resolved = CrossingState::from_slope(s.net);
        let states = std::iter::repeat_n(resolved, s.net.unsigned_abs() as usize)
            .chain(std::iter::repeat_n(CrossingState::Unresolved, s.unresolved as usize));
        for state in states {
            if i % 2 == 0 {
                b.bottom_twist(state, i);
            } else {
                b.right_twist(state, i);
            }
        }
    }
    match closure {
        ClosureKind::Denominator => {
            b.join_terminals(NW, SW);
            b.join_terminals(NE, SE);
        }
        ClosureKind::Numerator => {
            b.join_terminals(NW, NE);
            b.join_terminals(SW, SE);
        }
    }
    let partner = b.partner.into_iter().map(|p| p.expect("every slot joined")).collect();
    let provenance = Provenance { sizes: syllables.iter().map(|s| s.size()).collect(), closure, syllable_of: b.syllable_of };
    let shape = Shape::new(partner, b.loops)?.with_coords(b.coords).with_provenance(provenance);
    Ok(ShadowDiagram::new(shape, b.states))
}

/// The two-component closure of a rational word, for play.
pub fn build_rational_shadow(word: &PseudoTangleWord, closure: ClosureKind) -> Result<ShadowDiagram, BuildError> {
    let d = build_closure(word, closure)?;
    if d.component_count() != 2 {
        return Err(BuildError::WrongComponents { word: word.to_string(), closure, components: d.component_count() });
    }
    Ok(d)
}

/// The closure that gives two components, if any.
pub fn build_two_component(word: &PseudoTangleWord) -> Option<ShadowDiagram> {
    let closure = closure_components(word).1?;
    build_rational_shadow(word, closure).ok()
}
