//! Random shadows: rational closures grown by kinks, finger moves and R3
//! moves.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::build::build_closure;
use crate::diagram::{CrossingState, Dart, DiagramError, ShadowDiagram, Shape};
use crate::simplify::{apply_step, Step};
use crate::tangle::ClosureKind;
use crate::word::PseudoTangleWord;

type Parts = (Vec<Dart>, Vec<Option<(f64, f64)>>, Vec<CrossingState>);

fn extend(d: &ShadowDiagram, extra: usize) -> Parts {
    let mut partner = d.shape().partners().to_vec();
    partner.extend(std::iter::repeat_n(Dart::new(0, 0), extra * 4));
    let mut coords = d.shape().coords().to_vec();
    coords.extend(std::iter::repeat_n(None, extra));
    let mut states = d.states().to_vec();
    states.extend(std::iter::repeat_n(CrossingState::Unresolved, extra));
    (partner, coords, states)
}

fn link(p: &mut [Dart], a: Dart, b: Dart) {
    p[a.index()] = b;
    p[b.index()] = a;
}

fn finish(
    d: &ShadowDiagram,
    partner: Vec<Dart>,
    coords: Vec<Option<(f64, f64)>>,
    states: Vec<CrossingState>,
) -> Result<ShadowDiagram, DiagramError> {
    let shape = Shape::new(partner, d.shape().free_loops())?.with_coords(coords);
    Ok(ShadowDiagram::new(shape, states))
}

/// Add an unresolved kink on the arc leaving `exit`; `rotation` picks
/// which pair of slots carries the loop.
pub fn insert_kink(d: &ShadowDiagram, exit: Dart, rotation: u8) -> Result<ShadowDiagram, DiagramError> {
    let (mut p, coords, states) = extend(d, 1);
    let k = d.crossing_count();
    let other = d.partner(exit);
    let r = rotation % 4;
    link(&mut p, exit, Dart::new(k, r + 2));
    link(&mut p, Dart::new(k, r), Dart::new(k, r + 1));
    link(&mut p, Dart::new(k, r + 3), other);
    finish(d, p, coords, states)
}

/// Push the arc leaving `first` across the arc leaving `second`, through
/// the face both border on their right. Adds two unresolved crossings.
pub fn insert_bigon(d: &ShadowDiagram, first: Dart, second: Dart) -> Result<ShadowDiagram, DiagramError> {
    let (mut p, coords, states) = extend(d, 2);
    let (x, y) = (d.crossing_count(), d.crossing_count() + 1);
    let (x1, y1) = (first, d.partner(first));
    let (x2, y2) = (second, d.partner(second));
    // Both new crossings: slot 0 east, 1 north, 2 west, 3 south, with the
    // pushed arc running north-south.
    link(&mut p, x1, Dart::new(x, 1));
    link(&mut p, Dart::new(x, 3), Dart::new(y, 3));
    link(&mut p, Dart::new(y, 1), y1);
    link(&mut p, x2, Dart::new(y, 0));
    link(&mut p, Dart::new(y, 2), Dart::new(x, 0));
    link(&mut p, Dart::new(x, 2), y2);
    finish(d, p, coords, states)
}

fn random_word(rng: &mut impl Rng) -> PseudoTangleWord {
    let len = rng.gen_range(1..=3);
    let sizes: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
    PseudoTangleWord::shadow(&sizes)
}

/// Shadow with at most `max_crossings` crossings and any number of
/// components; never empty of crossings unless the seed word was.
pub fn random_shadow(rng: &mut impl Rng, max_crossings: usize) -> ShadowDiagram {
    loop {
        let word = random_word(rng);
        if word.crossing_count() as usize > max_crossings {
            continue;
        }
        let closure = if rng.gen_bool(0.5) { ClosureKind::Numerator } else { ClosureKind::Denominator };
        let mut d = build_closure(&word, closure).expect("builder output is planar").without_provenance();
        if d.crossing_count() == 0 {
            continue;
        }
        let growth = rng.gen_range(0..=4);
        for _ in 0..growth {
            let room = max_crossings - d.crossing_count();
            let pick = rng.gen_range(0..3);
            if pick == 0 && room >= 1 {
                let exit = Dart::from_index(rng.gen_range(0..d.crossing_count() * 4));
                d = insert_kink(&d, exit, rng.gen_range(0..4)).expect("kinks keep planarity");
            } else if pick == 1 && room >= 2 {
                let faces = d.shape().faces();
                let face = faces.choose(rng).unwrap().clone();
                if face.len() >= 2 {
                    let mut pair: Vec<Dart> = face.choose_multiple(rng, 2).copied().collect();
                    pair.shuffle(rng);
                    if d.partner(pair[0]) != pair[1] {
                        d = insert_bigon(&d, pair[0], pair[1]).expect("finger moves keep planarity");
                    }
                }
            } else {
                let triangles: Vec<Vec<Dart>> = d.shape().faces().iter().filter(|f| f.len() == 3).cloned().collect();
                if let Some(t) = triangles.choose(rng) {
                    // R3 needs a resolution of the triangle with one strand on
                    // top; the shadow keeps none of it.
                    for pattern in 0..8u32 {
                        let mut states = vec![CrossingState::ResolvedA; d.crossing_count()];
                        for (i, x) in t.iter().enumerate() {
                            if (pattern >> i) & 1 == 1 {
                                states[x.crossing] = CrossingState::ResolvedB;
                            }
                        }
                        if let Ok(next) = apply_step(&d.with_states(states), Step::R3 { exit: t[0] }) {
                            d = next.to_shadow();
                            break;
                        }
                    }
                }
            }
        }
        return d;
    }
}

/// Random two-component shadow with at least `min_nsi` NSI crossings.
pub fn random_two_component_shadow(rng: &mut impl Rng, max_crossings: usize, min_nsi: usize) -> ShadowDiagram {
    loop {
        let d = random_shadow(rng, max_crossings);
        if d.component_count() == 2 && d.nsi_crossings().len() >= min_nsi {
            return d;
        }
    }
}

/// Uniformly random resolution of every unresolved crossing.
pub fn random_resolution(rng: &mut impl Rng, d: &ShadowDiagram) -> ShadowDiagram {
    let states = d
        .states()
        .iter()
        .map(|&s| {
            if s.is_resolved() {
                s
            } else if rng.gen_bool(0.5) {
                CrossingState::ResolvedA
            } else {
                CrossingState::ResolvedB
            }
        })
        .collect();
    d.with_states(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::{parse_pd, render_pd};
    use crate::simplify::canonical_code;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_shadows_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let d = random_shadow(&mut rng, 10);
            assert!(d.crossing_count() <= 10);
            let back = parse_pd(&render_pd(&d)).unwrap();
            assert_eq!(canonical_code(&back), canonical_code(&d));
            if d.component_count() == 2 {
                assert_eq!(d.nsi_crossings().len() % 2, 0);
            }
        }
    }

    #[test]
    fn r3_is_an_involution_and_keeps_linking_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut moves = 0;
        for _ in 0..400 {
            let shadow = random_shadow(&mut rng, 9);
            let d = random_resolution(&mut rng, &shadow);
            for face in d.shape().faces() {
                if face.len() != 3 {
                    continue;
                }
                let Ok(next) = apply_step(&d, Step::R3 { exit: face[0] }) else { continue };
                moves += 1;
                assert_eq!(next.component_count(), d.component_count());
                assert_eq!(next.nsi_crossings().len(), d.nsi_crossings().len());
                if d.component_count() == 2 {
                    assert_eq!(next.canonical_plk().unwrap().abs(), d.canonical_plk().unwrap().abs());
                }
                let back = next
                    .shape()
                    .faces()
                    .iter()
                    .filter(|f| f.len() == 3)
                    .filter_map(|f| apply_step(&next, Step::R3 { exit: f[0] }).ok())
                    .any(|b| canonical_code(&b) == canonical_code(&d));
                assert!(back, "R3 not undone");
            }
        }
        assert!(moves > 20, "only {moves} R3 moves exercised");
    }

    #[test]
    fn finger_moves_are_removable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let d = random_two_component_shadow(&mut rng, 6, 0);
            let face = d.shape().faces().iter().find(|f| f.len() >= 2).cloned();
            let Some(face) = face else { continue };
            if d.partner(face[0]) == face[1] {
                continue;
            }
            let grown = insert_bigon(&d, face[0], face[1]).unwrap();
            let n = d.crossing_count();
            let base = d.with_states(vec![CrossingState::ResolvedA; n]);
            // Both new crossings have the pushed-across arc over: an R2 removes them.
            let resolved = grown.with_states(vec![CrossingState::ResolvedA; n + 2]);
            assert_eq!(base.canonical_plk().unwrap(), resolved.canonical_plk().unwrap());
            let undone = resolved
                .shape()
                .faces()
                .iter()
                .filter(|f| f.len() == 2 && f.iter().all(|x| x.crossing >= n))
                .filter_map(|f| apply_step(&resolved, Step::R2 { exit: f[0] }).ok())
                .any(|b| canonical_code(&b) == canonical_code(&base));
            assert!(undone);
        }
    }
}
