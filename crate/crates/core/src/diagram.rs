//! Planar 4-valent diagrams with per-crossing resolution state.
//!
//! A crossing has four slots numbered counterclockwise; slots 0 and 2 carry
//! one strand, slots 1 and 3 the other. An arc joins two darts
//! `(crossing, slot)`. Faces are the orbits of "follow the arc, then turn to
//! the next slot counterclockwise", which walks every face with the face on
//! the right.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tangle::{ClosureKind, IntersectionKind};
use crate::verdict::HalfInt;
use crate::word::{PseudoTangleWord, Syllable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arc-end pairing is not an involution at crossing {crossing} slot {slot}")]
    BrokenPairing { crossing: usize, slot: u8 },
    #[error("rotation system is not planar ({faces} faces for {crossings} crossings in one piece)")]
    NonPlanar { crossings: usize, faces: usize },
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("no crossing with id {0}")]
    UnknownCrossing(usize),
    #[error("crossing {0} is unresolved")]
    Unresolved(usize),
    #[error("crossing {0} is already resolved")]
    AlreadyResolved(usize),
    #[error("component count {0} is not supported here")]
    UnsupportedComponents(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub crossing: usize,
    pub slot: u8,
}

impl Dart {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Dart { crossing, slot: slot % 4 }
    }

    pub fn rotate(self, k: u8) -> Self {
        Dart::new(self.crossing, self.slot + k)
    }

    /// The dart on the same strand across the crossing.
    pub fn opposite(self) -> Self {
        self.rotate(2)
    }

    pub fn strand(self) -> u8 {
        self.slot % 2
    }

    pub fn index(self) -> usize {
        self.crossing * 4 + self.slot as usize
    }

    pub fn from_index(i: usize) -> Self {
        Dart::new(i / 4, (i % 4) as u8)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.crossing, self.slot)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingState {
    #[default]
    Unresolved,
    /// The strand through slots 0 and 2 is over.
    ResolvedA,
    /// The strand through slots 1 and 3 is over.
    ResolvedB,
}

impl CrossingState {
    pub fn is_resolved(self) -> bool {
        self != CrossingState::Unresolved
    }

    pub fn over_strand(self) -> Option<u8> {
        match self {
            CrossingState::Unresolved => None,
            CrossingState::ResolvedA => Some(0),
            CrossingState::ResolvedB => Some(1),
        }
    }

    /// `+1` for `ResolvedA`, `-1` for `ResolvedB`. With slot 0 drawn to the
    /// northeast this is the slope of the overstrand.
    pub fn slope(self) -> i32 {
        match self {
            CrossingState::Unresolved => 0,
            CrossingState::ResolvedA => 1,
            CrossingState::ResolvedB => -1,
        }
    }

    pub fn from_slope(slope: i32) -> Self {
        match slope.signum() {
            1 => CrossingState::ResolvedA,
            -1 => CrossingState::ResolvedB,
            _ => CrossingState::Unresolved,
        }
    }

    pub fn flipped(self) -> Self {
        CrossingState::from_slope(-self.slope())
    }

    pub fn marker(self) -> char {
        match self {
            CrossingState::Unresolved => '?',
            CrossingState::ResolvedA => '/',
            CrossingState::ResolvedB => '\\',
        }
    }

    pub fn from_marker(c: char) -> Option<Self> {
        match c {
            '?' => Some(CrossingState::Unresolved),
            '/' => Some(CrossingState::ResolvedA),
            '\\' => Some(CrossingState::ResolvedB),
            _ => None,
        }
    }
}

/// Back-references into the word a diagram was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sizes: Vec<u32>,
    pub closure: ClosureKind,
    pub syllable_of: Vec<usize>,
}

/// Per-component travel direction relative to the canonical one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub reversed: Vec<bool>,
}

impl Orientation {
    pub fn canonical(components: usize) -> Self {
        Orientation { reversed: vec![false; components] }
    }

    pub fn reverse(&self, component: usize) -> Self {
        let mut o = self.clone();
        o.reversed[component] = !o.reversed[component];
        o
    }
}

/// Immutable combinatorics shared by every state of one board.
#[derive(Debug)]
pub struct Shape {
    partner: Vec<Dart>,
    free_loops: usize,
    strand_component: Vec<[usize; 2]>,
    strand_out: Vec<[u8; 2]>,
    walks: Vec<Vec<Dart>>,
    component_count: usize,
    coords: Vec<Option<(f64, f64)>>,
    labels: Vec<String>,
    provenance: Option<Provenance>,
    faces: OnceLock<Vec<Vec<Dart>>>,
}

impl Shape {
    /// Validate a pairing of darts and trace its components.
    pub fn new(partner: Vec<Dart>, free_loops: usize) -> Result<Self, DiagramError> {
        let n = partner.len() / 4;
        for (i, &p) in partner.iter().enumerate() {
            let d = Dart::from_index(i);
            if p.crossing >= n || p == d || partner[p.index()] != d {
                return Err(DiagramError::BrokenPairing { crossing: d.crossing, slot: d.slot });
            }
        }
        let mut shape = Shape {
            partner,
            free_loops,
            strand_component: vec![[0; 2]; n],
            strand_out: vec![[0; 2]; n],
            walks: Vec::new(),
            component_count: 0,
            coords: vec![None; n],
            labels: Vec::new(),
            provenance: None,
            faces: OnceLock::new(),
        };
        shape.check_planar()?;
        shape.trace_components();
        shape.labels = (0..shape.component_count).map(|i| (i + 1).to_string()).collect();
        Ok(shape)
    }

    pub fn with_coords(mut self, coords: Vec<Option<(f64, f64)>>) -> Self {
        assert_eq!(coords.len(), self.crossing_count());
        self.coords = coords;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.component_count);
        self.labels = labels;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        assert_eq!(provenance.syllable_of.len(), self.crossing_count());
        self.provenance = Some(provenance);
        self
    }

    pub fn crossing_count(&self) -> usize {
        self.partner.len() / 4
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.partner[d.index()]
    }

    pub fn partners(&self) -> &[Dart] {
        &self.partner
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    fn pieces(&self) -> Vec<usize> {
        let n = self.crossing_count();
        let mut piece = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if piece[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            piece[start] = next;
            while let Some(c) = stack.pop() {
                for s in 0..4 {
                    let o = self.partner(Dart::new(c, s)).crossing;
                    if piece[o] == usize::MAX {
                        piece[o] = next;
                        stack.push(o);
                    }
                }
            }
            next += 1;
        }
        piece
    }

    fn compute_faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; self.partner.len()];
        let mut faces = Vec::new();
        for i in 0..self.partner.len() {
            if seen[i] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = Dart::from_index(i);
            while !seen[d.index()] {
                seen[d.index()] = true;
                face.push(d);
                d = self.partner(d).rotate(1);
            }
            faces.push(face);
        }
        faces
    }

    fn check_planar(&self) -> Result<(), DiagramError> {
        let piece = self.pieces();
        let count = piece.iter().copied().max().map_or(0, |m| m + 1);
        let mut crossings = vec![0usize; count];
        let mut faces = vec![0usize; count];
        for &p in &piece {
            crossings[p] += 1;
        }
        for f in self.compute_faces() {
            faces[piece[f[0].crossing]] += 1;
        }
        for p in 0..count {
            if faces[p] != crossings[p] + 2 {
                return Err(DiagramError::NonPlanar { crossings: crossings[p], faces: faces[p] });
            }
        }
        Ok(())
    }

    fn trace_components(&mut self) {
        let n = self.crossing_count();
        let mut visited = vec![[false; 2]; n];
        let mut comp = 0;
        for c in 0..n {
            for s in 0..2u8 {
                if visited[c][s as usize] {
                    continue;
                }
                let mut walk = Vec::new();
                let mut exit = Dart::new(c, s);
                while !visited[exit.crossing][exit.strand() as usize] {
                    visited[exit.crossing][exit.strand() as usize] = true;
                    self.strand_component[exit.crossing][exit.strand() as usize] = comp;
                    self.strand_out[exit.crossing][exit.strand() as usize] = exit.slot;
                    walk.push(exit);
                    exit = self.partner(exit).opposite();
                }
                self.walks.push(walk);
                comp += 1;
            }
        }
        self.component_count = comp + self.free_loops;
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        self.faces.get_or_init(|| self.compute_faces())
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Components that meet at least one crossing.
    pub fn crossing_components(&self) -> usize {
        self.walks.len()
    }

    pub fn strand_component(&self, c: usize, strand: u8) -> usize {
        self.strand_component[c][strand as usize]
    }

    /// Exit darts in canonical travel order, one list per crossing component.
    pub fn walks(&self) -> &[Vec<Dart>] {
        &self.walks
    }

    pub fn coords(&self) -> &[Option<(f64, f64)>] {
        &self.coords
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Arc numbering along the canonical walks, starting at 1; indexed by
    /// flat dart index. Free loops take the numbers after the last arc.
    pub fn arc_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.partner.len()];
        let mut next = 1;
        for walk in &self.walks {
            for &exit in walk {
                ids[exit.index()] = next;
                ids[self.partner(exit).index()] = next;
                next += 1;
            }
        }
        ids
    }

    pub fn arc_count(&self) -> usize {
        self.partner.len() / 2
    }

    /// Component of the arc leaving dart `d`.
    pub fn dart_component(&self, d: Dart) -> usize {
        self.strand_component(d.crossing, d.strand())
    }
}

/// A shape together with the current state of each crossing.
#[derive(Clone, Debug)]
pub struct ShadowDiagram {
    shape: Arc<Shape>,
    states: Vec<CrossingState>,
}

impl PartialEq for ShadowDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.shape.partner == other.shape.partner
            && self.shape.free_loops == other.shape.free_loops
    }
}

impl Eq for ShadowDiagram {}

impl ShadowDiagram {
    pub fn new(shape: Shape, states: Vec<CrossingState>) -> Self {
        assert_eq!(shape.crossing_count(), states.len());
        ShadowDiagram { shape: Arc::new(shape), states }
    }

    pub fn unresolved(shape: Shape) -> Self {
        let n = shape.crossing_count();
        Self::new(shape, vec![CrossingState::Unresolved; n])
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn shared_shape(&self) -> Arc<Shape> {
        self.shape.clone()
    }

    pub fn from_shared(shape: Arc<Shape>, states: Vec<CrossingState>) -> Self {
        assert_eq!(shape.crossing_count(), states.len());
        ShadowDiagram { shape, states }
    }

    pub fn crossing_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[CrossingState] {
        &self.states
    }

    pub fn state(&self, c: usize) -> Result<CrossingState, DiagramError> {
        self.states.get(c).copied().ok_or(DiagramError::UnknownCrossing(c))
    }

    pub fn with_state(&self, c: usize, state: CrossingState) -> Result<Self, DiagramError> {
        self.state(c)?;
        let mut states = self.states.clone();
        states[c] = state;
        Ok(ShadowDiagram { shape: self.shape.clone(), states })
    }

    pub fn with_states(&self, states: Vec<CrossingState>) -> Self {
        Self::from_shared(self.shape.clone(), states)
    }

    /// Same shape with every crossing unresolved.
    pub fn to_shadow(&self) -> Self {
        self.with_states(vec![CrossingState::Unresolved; self.crossing_count()])
    }

    /// Same diagram without builder back-references.
    pub fn without_provenance(&self) -> Self {
        let s = &self.shape;
        let shape = Shape {
            partner: s.partner.clone(),
            free_loops: s.free_loops,
            strand_component: s.strand_component.clone(),
            strand_out: s.strand_out.clone(),
            walks: s.walks.clone(),
            component_count: s.component_count,
            coords: s.coords.clone(),
            labels: s.labels.clone(),
            provenance: None,
            faces: OnceLock::new(),
        };
        Self::new(shape, self.states.clone())
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.states.iter().all(|s| s.is_resolved())
    }

    pub fn is_fully_unresolved(&self) -> bool {
        self.states.iter().all(|s| !s.is_resolved())
    }

    pub fn unresolved_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count()).filter(|&c| !self.states[c].is_resolved()).collect()
    }

    pub fn component_count(&self) -> usize {
        self.shape.component_count()
    }

    pub fn require_components(&self, expected: usize) -> Result<(), DiagramError> {
        let found = self.component_count();
        if found == expected {
            Ok(())
        } else {
            Err(DiagramError::ComponentCount { expected, found })
        }
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.shape.provenance()
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.shape.partner(d)
    }

    pub fn classify_crossing(&self, c: usize) -> Result<IntersectionKind, DiagramError> {
        self.state(c)?;
        Ok(self.kind(c))
    }

    fn kind(&self, c: usize) -> IntersectionKind {
        if self.shape.strand_component(c, 0) == self.shape.strand_component(c, 1) {
            IntersectionKind::SelfIntersection
        } else {
            IntersectionKind::NonSelf
        }
    }

    pub fn intersection_kinds(&self) -> Vec<IntersectionKind> {
        (0..self.crossing_count()).map(|c| self.kind(c)).collect()
    }

    pub fn nsi_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count()).filter(|&c| !self.kind(c).is_self()).collect()
    }

    pub fn si_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count()).filter(|&c| self.kind(c).is_self()).collect()
    }

    pub fn canonical_orientation(&self) -> Orientation {
        Orientation::canonical(self.component_count())
    }

    /// Exit slot of strand `strand` at crossing `c` under `orientation`.
    pub fn strand_exit(&self, orientation: &Orientation, c: usize, strand: u8) -> u8 {
        let out = self.shape.strand_out[c][strand as usize];
        if orientation.reversed[self.shape.strand_component(c, strand)] {
            (out + 2) % 4
        } else {
            out
        }
    }

    /// Right-hand rule sign: positive when the understrand leaves one slot
    /// counterclockwise of where the overstrand leaves.
    pub fn crossing_sign(&self, orientation: &Orientation, c: usize) -> Result<i32, DiagramError> {
        let over = self.state(c)?.over_strand().ok_or(DiagramError::Unresolved(c))?;
        Ok(self.sign_with_over(orientation, c, over))
    }

    /// Sign the crossing would have if `over` were the overstrand.
    pub fn sign_with_over(&self, orientation: &Orientation, c: usize, over: u8) -> i32 {
        let o = self.strand_exit(orientation, c, over);
        let u = self.strand_exit(orientation, c, 1 - over);
        if u == (o + 1) % 4 {
            1
        } else {
            -1
        }
    }

    /// Resolution giving crossing `c` the sign `sign`.
    pub fn state_for_sign(&self, orientation: &Orientation, c: usize, sign: i32) -> CrossingState {
        if self.sign_with_over(orientation, c, 0) == sign {
            CrossingState::ResolvedA
        } else {
            CrossingState::ResolvedB
        }
    }

    /// Half the signed sum over resolved NSI crossings.
    pub fn pseudo_linking_number(&self, orientation: &Orientation) -> Result<HalfInt, DiagramError> {
        if self.component_count() != 2 {
            return Err(DiagramError::ComponentCount { expected: 2, found: self.component_count() });
        }
        let halves = self
            .nsi_crossings()
            .into_iter()
            .filter(|&c| self.states[c].is_resolved())
            .map(|c| self.sign_with_over(orientation, c, self.states[c].over_strand().unwrap()))
            .sum();
        Ok(HalfInt(halves))
    }

    pub fn canonical_plk(&self) -> Result<HalfInt, DiagramError> {
        self.pseudo_linking_number(&self.canonical_orientation())
    }

    /// Current pseudotangle word for diagrams built from a word.
    pub fn rational_word(&self) -> Option<PseudoTangleWord> {
        let p = self.provenance()?;
        let mut syl = vec![Syllable::ZERO; p.sizes.len()];
        for (c, &i) in p.syllable_of.iter().enumerate() {
            match self.states[c] {
                CrossingState::Unresolved => syl[i].unresolved += 1,
                s => syl[i].net += s.slope(),
            }
        }
        Some(PseudoTangleWord::new(syl))
    }

    /// Erase crossings, keeping both strands through each. Components that
    /// lose every crossing become crossing-free loops.
    pub fn erase_crossings(&self, removed: &BTreeSet<usize>) -> Result<ShadowDiagram, DiagramError> {
        let n = self.crossing_count();
        let keep: Vec<usize> = (0..n).filter(|c| !removed.contains(c)).collect();
        let mut new_id = vec![usize::MAX; n];
        for (i, &c) in keep.iter().enumerate() {
            new_id[c] = i;
        }
        let mut partner = vec![Dart::new(0, 0); keep.len() * 4];
        for &c in &keep {
            for s in 0..4 {
                let mut p = self.partner(Dart::new(c, s));
                while removed.contains(&p.crossing) {
                    p = self.partner(p.opposite());
                }
                partner[Dart::new(new_id[c], s).index()] = Dart::new(new_id[p.crossing], p.slot);
            }
        }
        let surviving: BTreeSet<usize> =
            keep.iter().flat_map(|&c| [self.shape.strand_component(c, 0), self.shape.strand_component(c, 1)]).collect();
        let free = self.component_count() - surviving.len();
        let shape = Shape::new(partner, free)?;
        let coords = keep.iter().map(|&c| self.shape.coords[c]).collect();
        let states = keep.iter().map(|&c| self.states[c]).collect();
        Ok(ShadowDiagram::new(shape.with_coords(coords), states))
    }

    /// Replace the pairing while keeping states and coordinates.
    pub fn rewired(&self, partner: Vec<Dart>) -> Result<ShadowDiagram, DiagramError> {
        let shape = Shape::new(partner, 0)?;
        let free = self.component_count() - shape.crossing_components();
        let shape = Shape::new(shape.partner, free)?.with_coords(self.shape.coords.clone());
        Ok(ShadowDiagram::new(shape, self.states.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two circles crossing twice.
    pub(crate) fn hopf_shape() -> Shape {
        // Crossing 0: slots 0,2 on circle P; 1,3 on circle Q. Crossing 1 likewise.
        let d = Dart::new;
        let mut partner = vec![d(0, 0); 8];
        let mut link = |a: Dart, b: Dart| {
            partner[a.index()] = b;
            partner[b.index()] = a;
        };
        link(d(0, 0), d(1, 1));
        link(d(0, 1), d(1, 0));
        link(d(0, 2), d(1, 3));
        link(d(0, 3), d(1, 2));
        Shape::new(partner, 0).unwrap()
    }

    #[test]
    fn hopf_structure() {
        let s = hopf_shape();
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.faces().len(), 4);
        let dia = ShadowDiagram::unresolved(s);
        assert_eq!(dia.nsi_crossings(), vec![0, 1]);
        assert_eq!(dia.canonical_plk().unwrap(), HalfInt::ZERO);
    }

    #[test]
    fn hopf_signs_over_resolutions() {
        let dia = ShadowDiagram::unresolved(hopf_shape());
        let o = dia.canonical_orientation();
        let mut same_sign = 0;
        for a in [CrossingState::ResolvedA, CrossingState::ResolvedB] {
            for b in [CrossingState::ResolvedA, CrossingState::ResolvedB] {
                let r = dia.with_state(0, a).unwrap().with_state(1, b).unwrap();
                let s0 = r.crossing_sign(&o, 0).unwrap();
                let s1 = r.crossing_sign(&o, 1).unwrap();
                if s0 == s1 {
                    same_sign += 1;
                    assert_eq!(r.canonical_plk().unwrap().abs(), HalfInt(2));
                }
                let flipped = o.reverse(1);
                assert_eq!(r.crossing_sign(&flipped, 0).unwrap(), -s0);
            }
        }
        assert_eq!(same_sign, 2);
    }

    #[test]
    fn rejects_broken_pairing() {
        let partner = vec![Dart::new(0, 1), Dart::new(0, 0), Dart::new(0, 3), Dart::new(0, 0)];
        assert!(matches!(Shape::new(partner, 0), Err(DiagramError::BrokenPairing { .. })));
    }

    #[test]
    fn rejects_nonplanar_rotation() {
        // Single crossing joining opposite slots: a figure with one vertex
        // and two loops that cross, which has too few faces.
        let partner = vec![Dart::new(0, 2), Dart::new(0, 3), Dart::new(0, 0), Dart::new(0, 1)];
        assert!(matches!(Shape::new(partner, 0), Err(DiagramError::NonPlanar { .. })));
    }

    #[test]
    fn erasing_keeps_components() {
        let dia = ShadowDiagram::unresolved(hopf_shape());
        let erased = dia.erase_crossings(&[0, 1].into_iter().collect()).unwrap();
        assert_eq!(erased.crossing_count(), 0);
        assert_eq!(erased.component_count(), 2);
    }
}
