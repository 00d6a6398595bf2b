//! Twist regions and checkerboard colorings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Dart, ShadowDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("checkerboard coloring needs one component, found {0}")]
    NotSingleComponent(usize),
    #[error("faces do not admit a proper two-coloring")]
    NotBipartite,
}

/// Crossings joined by a chain of bigons, in chain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRegion {
    pub crossings: Vec<usize>,
}

impl TwistRegion {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.crossings.contains(&c)
    }
}

fn bigon_neighbors(d: &ShadowDiagram) -> Vec<BTreeSet<usize>> {
    let mut nb = vec![BTreeSet::new(); d.crossing_count()];
    for face in d.shape().faces() {
        if let [a, b] = face.as_slice() {
            if a.crossing != b.crossing {
                nb[a.crossing].insert(b.crossing);
                nb[b.crossing].insert(a.crossing);
            }
        }
    }
    nb
}

/// Maximal bigon chains, singletons included, ordered by lowest crossing.
pub fn twist_regions(d: &ShadowDiagram) -> Vec<TwistRegion> {
    let nb = bigon_neighbors(d);
    let mut seen = vec![false; d.crossing_count()];
    let mut regions = Vec::new();
    for root in 0..d.crossing_count() {
        if seen[root] {
            continue;
        }
        let mut members = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            for &o in &nb[c] {
                if members.insert(o) {
                    stack.push(o);
                }
            }
        }
        // Walk the chain from an end, or from the lowest id on a cycle.
        let start = members.iter().copied().find(|&c| nb[c].len() <= 1).unwrap_or(root);
        let mut order = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(&next) = nb[cur].iter().find(|&&o| !seen[o]) {
            seen[next] = true;
            order.push(next);
            cur = next;
        }
        // Branching cannot happen on a 4-valent diagram; keep any leftovers.
        for &c in &members {
            if !seen[c] {
                seen[c] = true;
                order.push(c);
            }
        }
        regions.push(TwistRegion { crossings: order });
    }
    regions
}

/// Region index of every crossing.
pub fn region_of_crossing(regions: &[TwistRegion], crossings: usize) -> Vec<usize> {
    let mut out = vec![usize::MAX; crossings];
    for (i, r) in regions.iter().enumerate() {
        for &c in &r.crossings {
            out[c] = i;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceColor {
    Black,
    White,
}

impl FaceColor {
    fn other(self) -> Self {
        match self {
            FaceColor::Black => FaceColor::White,
            FaceColor::White => FaceColor::Black,
        }
    }
}

/// Colors indexed like `Shape::faces`; a crossing-free circle has the
/// inside as face 0 and the outside as face 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceColoring {
    pub colors: Vec<FaceColor>,
    pub unbounded: usize,
}

/// The face taken as unbounded: the one with the most sides, lowest index
/// on ties.
pub fn unbounded_face(d: &ShadowDiagram) -> usize {
    let faces = d.shape().faces();
    let mut best = 0;
    for (i, f) in faces.iter().enumerate() {
        if f.len() > faces[best].len() {
            best = i;
        }
    }
    best
}

/// Two-coloring seeded with `color` on face `seed`.
pub fn color_faces_from(d: &ShadowDiagram, seed: usize, color: FaceColor) -> Result<Vec<FaceColor>, RegionError> {
    let faces = d.shape().faces();
    let mut face_of = vec![0; d.crossing_count() * 4];
    for (i, f) in faces.iter().enumerate() {
        for x in f {
            face_of[x.index()] = i;
        }
    }
    let mut colors: Vec<Option<FaceColor>> = vec![None; faces.len()];
    colors[seed] = Some(color);
    let mut stack = vec![seed];
    while let Some(f) = stack.pop() {
        let here = colors[f].unwrap();
        for &x in &faces[f] {
            let across = face_of[d.partner(x).index()];
            match colors[across] {
                None => {
                    colors[across] = Some(here.other());
                    stack.push(across);
                }
                Some(c) if c == here => return Err(RegionError::NotBipartite),
                Some(_) => {}
            }
        }
    }
    colors.into_iter().map(|c| c.ok_or(RegionError::NotBipartite)).collect()
}

pub fn checkerboard(d: &ShadowDiagram) -> Result<FaceColoring, RegionError> {
    if d.component_count() != 1 {
        return Err(RegionError::NotSingleComponent(d.component_count()));
    }
    if d.crossing_count() == 0 {
        return Ok(FaceColoring { colors: vec![FaceColor::Black, FaceColor::White], unbounded: 1 });
    }
    let unbounded = unbounded_face(d);
    let colors = color_faces_from(d, unbounded, FaceColor::White)?;
    Ok(FaceColoring { colors, unbounded })
}

/// Exit darts bounding each face, for callers that want to draw faces.
pub fn face_boundaries(d: &ShadowDiagram) -> Vec<Vec<Dart>> {
    d.shape().faces().to_vec()
}
