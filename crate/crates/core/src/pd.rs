//! Annotated planar-diagram text format.
//!
//! ```text
//! # comment
//! X 1,2,3,4 ? @0,0     crossing: arcs counterclockwise, state, optional position
//! C 1:red              pin the label of the component containing arc 1
//! O 9                  arc 9 is a closed loop without crossings
//! ```
//! `/` puts the strand through the first and third arc over, `\` the strand
//! through the second and fourth.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{CrossingState, Dart, DiagramError, ShadowDiagram, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("arc {0} has a dangling end")]
    DanglingArc(i64),
    #[error("arc {0} is used more than twice")]
    OverusedArc(i64),
    #[error("label line refers to unknown arc {0}")]
    UnknownArc(i64),
    #[error("component containing arc {arc} has conflicting labels")]
    LabelConflict { arc: i64 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn syntax(line: usize, message: impl Into<String>) -> PdError {
    PdError::Syntax { line, message: message.into() }
}

fn parse_arc(line: usize, s: &str) -> Result<i64, PdError> {
    s.trim().parse().map_err(|_| syntax(line, format!("bad arc id '{}'", s.trim())))
}

/// Arcs, state and position of one `X` line.
type CrossingLine = ([i64; 4], CrossingState, Option<(f64, f64)>);

pub fn parse_pd(text: &str) -> Result<ShadowDiagram, PdError> {
    let mut crossings: Vec<CrossingLine> = Vec::new();
    let mut loops: Vec<i64> = Vec::new();
    let mut pins: Vec<(i64, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (tag, rest) = line.split_at(1);
        let rest = rest.trim();
        match tag {
            "X" => {
                let mut parts = rest.split_whitespace();
                let arcs_text = parts.next().ok_or_else(|| syntax(line_no, "missing arcs"))?;
                let arcs: Vec<i64> = arcs_text.split(',').map(|a| parse_arc(line_no, a)).collect::<Result<_, _>>()?;
                let arcs: [i64; 4] = arcs.try_into().map_err(|_| syntax(line_no, "a crossing needs four arcs"))?;
                let marker = parts.next().ok_or_else(|| syntax(line_no, "missing state marker"))?;
                let state = match marker.chars().collect::<Vec<_>>().as_slice() {
                    [c] => CrossingState::from_marker(*c),
                    _ => None,
                }
                .ok_or_else(|| syntax(line_no, format!("bad state marker '{marker}'")))?;
                let coords = match parts.next() {
                    None => None,
                    Some(p) => {
                        let p = p.strip_prefix('@').ok_or_else(|| syntax(line_no, "expected '@x,y'"))?;
                        let (x, y) = p.split_once(',').ok_or_else(|| syntax(line_no, "expected '@x,y'"))?;
                        let x: f64 = x.parse().map_err(|_| syntax(line_no, "bad x coordinate"))?;
                        let y: f64 = y.parse().map_err(|_| syntax(line_no, "bad y coordinate"))?;
                        Some((x, y))
                    }
                };
                if parts.next().is_some() {
                    return Err(syntax(line_no, "trailing text"));
                }
                crossings.push((arcs, state, coords));
            }
            "C" => {
                let (arc, label) = rest.split_once(':').ok_or_else(|| syntax(line_no, "expected 'C arc:label'"))?;
                let label = label.trim();
                if label.is_empty() {
                    return Err(syntax(line_no, "empty label"));
                }
                pins.push((parse_arc(line_no, arc)?, label.to_string()));
            }
            "O" => loops.push(parse_arc(line_no, rest)?),
            _ => return Err(syntax(line_no, format!("unknown line type '{tag}'"))),
        }
    }

    let mut ends: BTreeMap<i64, Vec<Dart>> = BTreeMap::new();
    for (c, (arcs, _, _)) in crossings.iter().enumerate() {
        for (s, &a) in arcs.iter().enumerate() {
            ends.entry(a).or_default().push(Dart::new(c, s as u8));
        }
    }
    let mut partner = vec![Dart::new(0, 0); crossings.len() * 4];
    for (&arc, darts) in &ends {
        if loops.contains(&arc) {
            return Err(PdError::OverusedArc(arc));
        }
        match darts.as_slice() {
            [a, b] => {
                partner[a.index()] = *b;
                partner[b.index()] = *a;
            }
            [_] => return Err(PdError::DanglingArc(arc)),
            _ => return Err(PdError::OverusedArc(arc)),
        }
    }
    let mut shape = Shape::new(partner, loops.len())?;
    let coords: Vec<_> = crossings.iter().map(|x| x.2).collect();
    shape = shape.with_coords(coords);

    let mut labels: HashMap<usize, String> = HashMap::new();
    for (arc, label) in pins {
        let comp = if let Some(darts) = ends.get(&arc) {
            shape.dart_component(darts[0])
        } else if let Some(i) = loops.iter().position(|&l| l == arc) {
            shape.crossing_components() + i
        } else {
            return Err(PdError::UnknownArc(arc));
        };
        if let Some(old) = labels.insert(comp, label.clone()) {
            if old != label {
                return Err(PdError::LabelConflict { arc });
            }
        }
    }
    let defaults = shape.labels().to_vec();
    let labels = defaults.into_iter().enumerate().map(|(i, d)| labels.remove(&i).unwrap_or(d)).collect();
    shape = shape.with_labels(labels);
    let states = crossings.iter().map(|x| x.1).collect();
    Ok(ShadowDiagram::new(shape, states))
}

/// Render with arcs numbered along the canonical walks.
pub fn render_pd(d: &ShadowDiagram) -> String {
    let shape = d.shape();
    let ids = shape.arc_ids();
    let mut out = String::new();
    for c in 0..d.crossing_count() {
        let arcs: Vec<String> = (0..4).map(|s| ids[Dart::new(c, s).index()].to_string()).collect();
        write!(out, "X {} {}", arcs.join(","), d.states()[c].marker()).unwrap();
        if let Some((x, y)) = shape.coords()[c] {
            write!(out, " @{x},{y}").unwrap();
        }
        out.push('\n');
    }
    let first_loop = shape.arc_count() + 1;
    for i in 0..shape.free_loops() {
        writeln!(out, "O {}", first_loop + i).unwrap();
    }
    for (comp, label) in shape.labels().iter().enumerate() {
        let arc = if comp < shape.crossing_components() {
            ids[shape.walks()[comp][0].index()]
        } else {
            first_loop + comp - shape.crossing_components()
        };
        writeln!(out, "C {arc}:{label}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::IntersectionKind;

    const HOPF: &str = "# hopf shadow\nX 1,2,3,4 ?\nX 2,1,4,3 ?\nC 1:red\nC 2:blue\n";

    #[test]
    fn parses_hopf() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.nsi_crossings().len(), 2);
        assert_eq!(d.classify_crossing(1).unwrap(), IntersectionKind::NonSelf);
        let mut labels = d.shape().labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec!["blue".to_string(), "red".to_string()]);
    }

    #[test]
    fn round_trip() {
        let d = parse_pd(HOPF).unwrap();
        let again = parse_pd(&render_pd(&d)).unwrap();
        assert_eq!(again.crossing_count(), 2);
        assert_eq!(again.shape().labels(), d.shape().labels());
        let code = crate::simplify::canonical_code;
        assert_eq!(code(&again), code(&d));
    }

    #[test]
    fn loops_and_coords() {
        let d = parse_pd("O 1\nO 2\nC 2:b\n").unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.shape().labels()[1], "b");
        let d = parse_pd("X 1,1,2,2 / @1.5,-2\n").unwrap();
        assert_eq!(d.shape().coords()[0], Some((1.5, -2.0)));
        assert!(render_pd(&d).contains("@1.5,-2"));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_pd("X 1,2,3,4 ?\n").unwrap_err(), PdError::DanglingArc(1));
        assert!(matches!(parse_pd("X 1,2,3 ?\n"), Err(PdError::Syntax { line: 1, .. })));
        assert!(matches!(parse_pd("X 1,2,3,4 x\n"), Err(PdError::Syntax { .. })));
        assert!(matches!(parse_pd("Q\n"), Err(PdError::Syntax { .. })));
        assert_eq!(parse_pd("X 1,1,1,2 ?\n").unwrap_err(), PdError::OverusedArc(1));
        assert!(matches!(parse_pd("X 1,2,1,2 ?\n"), Err(PdError::Diagram(DiagramError::NonPlanar { .. }))));
        assert_eq!(parse_pd(&format!("{HOPF}C 9:x\n")).unwrap_err(), PdError::UnknownArc(9));
    }
}
