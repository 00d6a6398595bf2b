//! Reidemeister simplification and the budgeted splittability decision.
//!
//! Crossing-removing moves (R1, R2) are applied greedily. R3 moves do not
//! change the crossing count; a breadth-first search over them, with
//! isomorphic diagrams merged, looks for states where more R1/R2 moves open
//! up. Two strands sliding across a bigon is already an R2 move, so no
//! separate bigon slide is needed.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{CrossingState, Dart, DiagramError, ShadowDiagram};
use crate::verdict::{BudgetReport, Certificate, SplitEvidence, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("crossing {0} is unresolved")]
    Unresolved(usize),
    #[error("move {step} does not apply: {reason}")]
    InvalidStep { step: Step, reason: &'static str },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    /// Remove a kink whose loop joins `slot` and the next slot.
    R1 { crossing: usize, slot: u8 },
    /// Remove the two crossings of a bigon; `exit` is a dart on its boundary.
    R2 { exit: Dart },
    /// Push a strand across the crossing of the other two; `exit` is a dart
    /// on the triangle's boundary.
    R3 { exit: Dart },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::R1 { crossing, .. } => write!(f, "R1 at {crossing}"),
            Step::R2 { exit } => write!(f, "R2 at bigon {exit}"),
            Step::R3 { exit } => write!(f, "R3 at triangle {exit}"),
        }
    }
}

fn over_on(d: &ShadowDiagram, c: usize, strand: u8) -> Option<bool> {
    d.states()[c].over_strand().map(|o| o == strand)
}

/// Exit darts of the face containing `exit`.
fn face_of(d: &ShadowDiagram, exit: Dart) -> Vec<Dart> {
    let mut face = vec![exit];
    let mut cur = d.partner(exit).rotate(1);
    while cur != exit {
        face.push(cur);
        cur = d.partner(cur).rotate(1);
    }
    face
}

fn check_r1(d: &ShadowDiagram, crossing: usize, slot: u8) -> Result<(), &'static str> {
    if crossing >= d.crossing_count() {
        return Err("no such crossing");
    }
    if d.partner(Dart::new(crossing, slot)) != Dart::new(crossing, slot + 1) {
        return Err("not a kink");
    }
    Ok(())
}

fn bigon(d: &ShadowDiagram, exit: Dart) -> Result<(usize, usize), &'static str> {
    if exit.crossing >= d.crossing_count() {
        return Err("no such crossing");
    }
    let face = face_of(d, exit);
    if face.len() != 2 || face[0].crossing == face[1].crossing {
        return Err("not a bigon between two crossings");
    }
    let a = face[0];
    let b_in = d.partner(a);
    match (over_on(d, a.crossing, a.strand()), over_on(d, b_in.crossing, b_in.strand())) {
        (Some(x), Some(y)) if x == y => Ok((a.crossing, b_in.crossing)),
        (Some(_), Some(_)) => Err("bigon is a clasp"),
        _ => Err("unresolved crossing"),
    }
}

/// External darts of a valid R3 triangle, clockwise.
fn triangle(d: &ShadowDiagram, exit: Dart) -> Result<[Dart; 6], &'static str> {
    if exit.crossing >= d.crossing_count() {
        return Err("no such crossing");
    }
    let face = face_of(d, exit);
    if face.len() != 3 {
        return Err("not a triangle");
    }
    let cs: BTreeSet<usize> = face.iter().map(|x| x.crossing).collect();
    if cs.len() != 3 {
        return Err("triangle repeats a crossing");
    }
    let (o1, o2, o3) = (face[0], face[1], face[2]);
    let (i1, i2, i3) = (o1.rotate(3), o2.rotate(3), o3.rotate(3));
    // Each triangle edge lies on a strand meeting two of the crossings.
    let edges = [(o1, i2), (o2, i3), (o3, i1)];
    let mut slidable = false;
    for (x, y) in edges {
        match (over_on(d, x.crossing, x.strand()), over_on(d, y.crossing, y.strand())) {
            (Some(true), Some(true)) => slidable = true,
            (None, _) | (_, None) => return Err("unresolved crossing"),
            _ => {}
        }
    }
    if !slidable {
        return Err("no strand passes over both of its crossings");
    }
    Ok([i1.rotate(3), i1.rotate(2), i2.rotate(3), i2.rotate(2), i3.rotate(3), i3.rotate(2)])
}

/// Apply one move, checking that it is legal.
pub fn apply_step(d: &ShadowDiagram, step: Step) -> Result<ShadowDiagram, SimplifyError> {
    let invalid = |reason| SimplifyError::InvalidStep { step, reason };
    match step {
        Step::R1 { crossing, slot } => {
            check_r1(d, crossing, slot).map_err(invalid)?;
            Ok(d.erase_crossings(&[crossing].into_iter().collect())?)
        }
        Step::R2 { exit } => {
            let (a, b) = bigon(d, exit).map_err(invalid)?;
            Ok(d.erase_crossings(&[a, b].into_iter().collect())?)
        }
        Step::R3 { exit } => {
            let q = triangle(d, exit).map_err(invalid)?;
            let ext: Vec<Dart> = q.iter().map(|&x| d.partner(x)).collect();
            let mut partner = d.shape().partners().to_vec();
            for k in 0..6 {
                let target = ext[(k + 3) % 6];
                let target = match q.iter().position(|&x| x == target) {
                    Some(m) => q[(m + 3) % 6],
                    None => target,
                };
                partner[q[k].index()] = target;
                partner[target.index()] = q[k];
            }
            Ok(d.rewired(partner)?)
        }
    }
}

pub fn replay_steps(d: &ShadowDiagram, steps: &[Step]) -> Result<ShadowDiagram, SimplifyError> {
    steps.iter().try_fold(d.clone(), |acc, &s| apply_step(&acc, s))
}

fn first_reducing_step(d: &ShadowDiagram) -> Option<Step> {
    for c in 0..d.crossing_count() {
        for slot in 0..4 {
            if check_r1(d, c, slot).is_ok() {
                return Some(Step::R1 { crossing: c, slot });
            }
        }
    }
    for face in d.shape().faces() {
        if face.len() == 2 && bigon(d, face[0]).is_ok() {
            return Some(Step::R2 { exit: face[0] });
        }
    }
    None
}

fn r3_steps(d: &ShadowDiagram) -> Vec<Step> {
    d.shape().faces().iter().filter(|f| f.len() == 3 && triangle(d, f[0]).is_ok()).map(|f| Step::R3 { exit: f[0] }).collect()
}

fn greedy(mut d: ShadowDiagram, trace: &mut Vec<Step>) -> ShadowDiagram {
    while let Some(step) = first_reducing_step(&d) {
        d = apply_step(&d, step).expect("step was checked");
        trace.push(step);
    }
    d
}

/// Code identifying a diagram up to planar isotopy preserving orientation
/// of the plane. Component labels are ignored.
pub fn canonical_code(d: &ShadowDiagram) -> Vec<u32> {
    let n = d.crossing_count();
    let mut piece_codes: Vec<Vec<u32>> = Vec::new();
    let mut done = vec![false; n];
    for root in 0..n {
        if done[root] {
            continue;
        }
        let mut best: Option<Vec<u32>> = None;
        let mut members = Vec::new();
        for start_slot in 0..4u8 {
            let (code, order) = code_from(d, Dart::new(root, start_slot));
            members = order;
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        // Every start dart in the piece gives a candidate.
        for &c in &members {
            done[c] = true;
            if c == root {
                continue;
            }
            for s in 0..4u8 {
                let (code, _) = code_from(d, Dart::new(c, s));
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        piece_codes.push(best.unwrap());
    }
    piece_codes.sort();
    let mut out = vec![d.shape().free_loops() as u32, piece_codes.len() as u32];
    for c in piece_codes {
        out.push(c.len() as u32);
        out.extend(c);
    }
    out
}

fn code_from(d: &ShadowDiagram, start: Dart) -> (Vec<u32>, Vec<usize>) {
    let n = d.crossing_count();
    let mut label = vec![u32::MAX; n];
    let mut offset = vec![0u8; n];
    let mut order = vec![start.crossing];
    label[start.crossing] = 0;
    offset[start.crossing] = start.slot;
    let mut code = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        let off = offset[c];
        code.push(match d.states()[c].over_strand() {
            None => 2,
            Some(s) => ((s + off) % 2) as u32,
        });
        for r in 0..4u8 {
            let p = d.partner(Dart::new(c, off + r));
            if label[p.crossing] == u32::MAX {
                label[p.crossing] = order.len() as u32;
                offset[p.crossing] = p.slot;
                order.push(p.crossing);
            }
            code.push(label[p.crossing]);
            code.push(((p.slot + 4 - offset[p.crossing]) % 4) as u32);
        }
        i += 1;
    }
    (code, order)
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: ShadowDiagram,
    pub trace: Vec<Step>,
    pub explored: usize,
    pub exhausted: bool,
    pub reached_goal: bool,
}

fn search(
    d: &ShadowDiagram,
    budget: usize,
    key: impl Fn(&ShadowDiagram) -> (usize, usize),
    goal: impl Fn(&ShadowDiagram) -> bool,
) -> Result<SearchOutcome, SimplifyError> {
    if budget == 0 {
        return Err(SimplifyError::ZeroBudget);
    }
    if let Some(c) = d.states().iter().position(|s| *s == CrossingState::Unresolved) {
        return Err(SimplifyError::Unresolved(c));
    }
    let mut trace = Vec::new();
    let start = greedy(d.clone(), &mut trace);
    let mut best = (start.clone(), trace.clone());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(canonical_code(&start));
    let mut queue = VecDeque::from([(start, trace)]);
    let mut explored = 0;
    while let Some((cur, trace)) = queue.pop_front() {
        if key(&cur) < key(&best.0) {
            best = (cur.clone(), trace.clone());
        }
        if goal(&cur) {
            return Ok(SearchOutcome { best: cur, trace, explored, exhausted: false, reached_goal: true });
        }
        if explored >= budget {
            return Ok(SearchOutcome { best: best.0, trace: best.1, explored, exhausted: false, reached_goal: false });
        }
        explored += 1;
        for step in r3_steps(&cur) {
            let mut t = trace.clone();
            t.push(step);
            let next = greedy(apply_step(&cur, step)?, &mut t);
            if seen.insert(canonical_code(&next)) {
                queue.push_back((next, t));
            }
        }
    }
    Ok(SearchOutcome { best: best.0, trace: best.1, explored, exhausted: true, reached_goal: false })
}

/// Reduce the crossing count as far as the budget allows (nodes expanded
/// in the R3 search).
pub fn simplify(d: &ShadowDiagram, budget: usize) -> Result<(ShadowDiagram, Vec<Step>), SimplifyError> {
    let out = search(d, budget, |x| (x.crossing_count(), x.nsi_crossings().len()), |x| x.crossing_count() == 0)?;
    Ok((out.best, out.trace))
}

/// Nonzero linking number proves non-split; a simplification reaching a
/// diagram whose components do not cross proves split; otherwise abstain.
pub fn decide_splittability(d: &ShadowDiagram, budget: usize) -> Result<Verdict, SimplifyError> {
    if let Some(c) = d.states().iter().position(|s| *s == CrossingState::Unresolved) {
        return Err(SimplifyError::Unresolved(c));
    }
    d.require_components(2)?;
    let lk = d.canonical_plk()?;
    if lk.halves() != 0 {
        return Ok(Verdict::Unsplittable(Certificate::LinkingNumber(lk)));
    }
    let out = search(d, budget, |x| (x.nsi_crossings().len(), x.crossing_count()), |x| x.nsi_crossings().is_empty())?;
    if out.reached_goal {
        return Ok(Verdict::Splittable(SplitEvidence::Simplification(out.trace)));
    }
    Ok(Verdict::Unknown(BudgetReport {
        budget,
        explored: out.explored,
        exhausted: out.exhausted,
        min_nsi: out.best.nsi_crossings().len(),
        min_crossings: out.best.crossing_count(),
        linking_number: lk,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Shape;

    fn link(partner: &mut [Dart], a: Dart, b: Dart) {
        partner[a.index()] = b;
        partner[b.index()] = a;
    }

    /// Two circles whose bigon is made by crossings 0 (top) and 1 (bottom).
    fn two_crossing_circles() -> Shape {
        let d = Dart::new;
        let mut p = vec![d(0, 0); 8];
        link(&mut p, d(0, 0), d(1, 1));
        link(&mut p, d(0, 1), d(1, 0));
        link(&mut p, d(0, 2), d(1, 3));
        link(&mut p, d(0, 3), d(1, 2));
        Shape::new(p, 0).unwrap()
    }

    #[test]
    fn hopf_resolution_classes() {
        use CrossingState::*;
        let shape = ShadowDiagram::unresolved(two_crossing_circles());
        let mut split = 0;
        for a in [ResolvedA, ResolvedB] {
            for b in [ResolvedA, ResolvedB] {
                let dia = shape.with_state(0, a).unwrap().with_state(1, b).unwrap();
                let v = decide_splittability(&dia, 10).unwrap();
                match v {
                    Verdict::Splittable(SplitEvidence::Simplification(ref t)) => {
                        split += 1;
                        let end = replay_steps(&dia, t).unwrap();
                        assert!(end.nsi_crossings().is_empty());
                        assert_eq!(end.component_count(), 2);
                    }
                    Verdict::Unsplittable(Certificate::LinkingNumber(lk)) => assert_eq!(lk.abs().halves(), 2),
                    other => panic!("unexpected {other:?}"),
                }
            }
        }
        assert_eq!(split, 2);
    }

    #[test]
    fn kink_removal() {
        // One crossing with two kinks: a figure eight curve.
        let d = Dart::new;
        let mut p = vec![d(0, 0); 4];
        link(&mut p, d(0, 0), d(0, 1));
        link(&mut p, d(0, 2), d(0, 3));
        let dia = ShadowDiagram::new(Shape::new(p, 0).unwrap(), vec![CrossingState::ResolvedA]);
        let (out, trace) = simplify(&dia, 5).unwrap();
        assert_eq!(out.crossing_count(), 0);
        assert_eq!(out.component_count(), 1);
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn zero_budget_rejected() {
        let dia = ShadowDiagram::unresolved(two_crossing_circles());
        let dia = dia.with_states(vec![CrossingState::ResolvedA; 2]);
        assert_eq!(simplify(&dia, 0).unwrap_err(), SimplifyError::ZeroBudget);
    }

    #[test]
    fn canonical_code_ignores_numbering() {
        let a = ShadowDiagram::unresolved(two_crossing_circles());
        // Same diagram with crossings swapped.
        let d = Dart::new;
        let mut p = vec![d(0, 0); 8];
        link(&mut p, d(1, 0), d(0, 1));
        link(&mut p, d(1, 1), d(0, 0));
        link(&mut p, d(1, 2), d(0, 3));
        link(&mut p, d(1, 3), d(0, 2));
        let b = ShadowDiagram::unresolved(Shape::new(p, 0).unwrap());
        assert_eq!(canonical_code(&a), canonical_code(&b));
    }
}
