//! Word-level calculations checked against the built diagrams.

use linkgame::build::build_closure;
use linkgame::fraction::tangle_fraction;
use linkgame::simplify::decide_splittability;
use linkgame::tangle::{classify_syllables, closure_components, count_intersections, trace_syllable_kinds};
use linkgame::{ClosureKind, PseudoTangleWord};

fn size_words(max_len: usize, max_size: u32) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let mut cur: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for w in &cur {
            for s in 0..=max_size {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        cur = next;
    }
    out
}

/// All nonzero-length resolved net vectors with total |net| <= budget.
fn resolved_words(max_crossings: i32, max_len: usize) -> Vec<Vec<i32>> {
    fn go(prefix: &mut Vec<i32>, left: i32, max_len: usize, out: &mut Vec<Vec<i32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for n in -left..=left {
            prefix.push(n);
            go(prefix, left - n.abs(), max_len, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    go(&mut vec![], max_crossings, max_len, &mut out);
    out
}

#[test]
fn classification_matches_built_diagrams() {
    for sizes in size_words(4, 3) {
        let word = PseudoTangleWord::shadow(&sizes);
        let kinds = classify_syllables(&word);
        assert_eq!(kinds, trace_syllable_kinds(&word), "{word}");
        let (pairing, closure) = closure_components(&word);
        let (nsi, _) = count_intersections(&word);
        assert_eq!(nsi % 2 == 0, closure.is_some(), "{word} {pairing:?}");
        for kind in [ClosureKind::Numerator, ClosureKind::Denominator] {
            let d = build_closure(&word, kind).unwrap();
            assert_eq!(d.component_count() == 2, closure == Some(kind), "{word} {kind}");
            if closure == Some(kind) {
                let p = d.provenance().unwrap();
                for c in 0..d.crossing_count() {
                    assert_eq!(d.classify_crossing(c).unwrap(), kinds[p.syllable_of[c]], "{word} crossing {c}");
                }
                assert_eq!(d.nsi_crossings().len() as u32, nsi);
            }
        }
    }
}

#[test]
fn fraction_agrees_with_diagram_search() {
    let mut definite = 0;
    for nets in resolved_words(6, 4) {
        let word = PseudoTangleWord::from_nets(&nets);
        let Some(closure) = closure_components(&word).1 else { continue };
        let d = build_closure(&word, closure).unwrap();
        let f = tangle_fraction(&word);
        let v = decide_splittability(&d.without_provenance(), 2000).unwrap();
        if let Some(split) = v.definite() {
            definite += 1;
            assert_eq!(split, f.is_trivial(), "{word} fraction {f} verdict {}", v.summary());
        }
    }
    assert!(definite > 0);
}
