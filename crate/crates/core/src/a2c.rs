//! The A2C text format.
//!
//! ```text
//! # flat torus
//! vertex v
//! edge a v v
//! edge b v v
//! face f : a+ b+ a- b- angles: 1/2 1/2 1/2 1/2
//! meta disk_diagram false
//! ```
//!
//! One declaration per line; `#` starts a comment. An angle `p/q` (or `p`)
//! means `(p/q)·π` with `p > 0`, `q > 0`. Decimal angles are rejected.
//! `meta source <text>` records free-form provenance.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::angle::AngleParseError;
use crate::complex::{equal_angles, Complex2, DirectedEdge, Edge, EdgeId, Face, FaceId, Metadata, Sign, VertexId};
use crate::error::{Error, ParseErrorKind};
use crate::Angle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// When false, a face may omit its `angles:` list and receives the equal
    /// placeholder angles `(n - 2)π / n`.
    pub require_angles: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            require_angles: true,
        }
    }
}

/// Parses an A2C document with angles required on every face.
pub fn parse_a2c(text: &str) -> Result<Complex2, Error> {
    parse_a2c_with(text, ParseOptions::default())
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn fail(pos: Pos, kind: ParseErrorKind) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        kind,
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> Error {
    fail(pos, ParseErrorKind::Syntax(msg.into()))
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn check_ident(tok: &str, pos: Pos) -> Result<(), Error> {
    let ok = !tok.is_empty()
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if ok {
        Ok(())
    } else {
        Err(syntax(pos, format!("invalid identifier `{tok}`")))
    }
}

struct FaceDecl {
    pos: Pos,
    id: FaceId,
    refs: Vec<(Pos, DirectedEdge)>,
    angles: Option<Vec<(Pos, Angle)>>,
}

pub fn parse_a2c_with(text: &str, options: ParseOptions) -> Result<Complex2, Error> {
    let mut vertices: Vec<(Pos, VertexId)> = Vec::new();
    let mut edges: Vec<(Pos, Edge, Pos, Pos)> = Vec::new();
    let mut faces: Vec<FaceDecl> = Vec::new();
    let mut meta = Metadata::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks = tokens(content);
        let Some(&(col0, keyword)) = toks.first() else {
            continue;
        };
        let at = |col: usize| Pos {
            line: line_no,
            column: col,
        };
        match keyword {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(syntax(at(col0), "expected `vertex <id>`"));
                }
                let (c, id) = toks[1];
                check_ident(id, at(c))?;
                vertices.push((at(c), id.into()));
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(syntax(at(col0), "expected `edge <id> <tail> <head>`"));
                }
                for &(c, t) in &toks[1..] {
                    check_ident(t, at(c))?;
                }
                edges.push((
                    at(toks[1].0),
                    Edge {
                        id: toks[1].1.into(),
                        tail: toks[2].1.into(),
                        head: toks[3].1.into(),
                    },
                    at(toks[2].0),
                    at(toks[3].0),
                ));
            }
            "face" => {
                if toks.len() < 3 {
                    return Err(syntax(at(col0), "expected `face <id> : <edge-ref>+ angles: <angle>+`"));
                }
                let (c, id) = toks[1];
                check_ident(id, at(c))?;
                if toks[2].1 != ":" {
                    return Err(syntax(at(toks[2].0), "expected `:` after face id"));
                }
                let mut refs = Vec::new();
                let mut i = 3;
                while i < toks.len() && toks[i].1 != "angles:" {
                    let (c, t) = toks[i];
                    let (name, sign) = if let Some(n) = t.strip_suffix('+') {
                        (n, Sign::Plus)
                    } else if let Some(n) = t.strip_suffix('-') {
                        (n, Sign::Minus)
                    } else {
                        return Err(syntax(at(c), format!("edge reference `{t}` needs a + or - suffix")));
                    };
                    check_ident(name, at(c))?;
                    refs.push((at(c), DirectedEdge::new(name, sign)));
                    i += 1;
                }
                if refs.is_empty() {
                    return Err(syntax(at(col0), format!("face `{id}` has no boundary")));
                }
                let angles = if i < toks.len() {
                    let mut list = Vec::new();
                    for &(c, t) in &toks[i + 1..] {
                        let a: Angle = t.parse().map_err(|e: AngleParseError| {
                            fail(at(c), ParseErrorKind::Angle(e.to_string()))
                        })?;
                        if !a.is_positive() {
                            return Err(fail(
                                at(c),
                                ParseErrorKind::NonPositiveAngle {
                                    face: id.to_string(),
                                    angle: t.to_string(),
                                },
                            ));
                        }
                        list.push((at(c), a));
                    }
                    if list.len() != refs.len() {
                        return Err(fail(
                            at(toks[i].0),
                            ParseErrorKind::AngleCount {
                                face: id.to_string(),
                                expected: refs.len(),
                                found: list.len(),
                            },
                        ));
                    }
                    Some(list)
                } else if options.require_angles {
                    return Err(syntax(at(col0), format!("face `{id}` is missing `angles:`")));
                } else {
                    None
                };
                faces.push(FaceDecl {
                    pos: at(c),
                    id: id.into(),
                    refs,
                    angles,
                });
            }
            "meta" => {
                let Some(&(c, key)) = toks.get(1) else {
                    return Err(syntax(at(col0), "expected `meta <key> <value>`"));
                };
                match key {
                    "disk_diagram" => match toks.get(2).map(|t| t.1) {
                        Some("true") if toks.len() == 3 => meta.is_disk_diagram = true,
                        Some("false") if toks.len() == 3 => meta.is_disk_diagram = false,
                        _ => return Err(syntax(at(c), "expected `meta disk_diagram true|false`")),
                    },
                    "source" => {
                        let rest = match toks.get(2) {
                            Some(&(c2, _)) => {
                                let skip: usize = content.char_indices().nth(c2 - 1).map(|(b, _)| b).unwrap_or(content.len());
                                content[skip..].trim_end().to_string()
                            }
                            None => String::new(),
                        };
                        meta.source = Some(rest);
                    }
                    other => return Err(syntax(at(c), format!("unknown meta key `{other}`"))),
                }
            }
            other => return Err(syntax(at(col0), format!("unknown declaration `{other}`"))),
        }
    }

    // Resolve identifiers, reporting the first problem in document order.
    let mut vseen: HashMap<&VertexId, ()> = HashMap::new();
    for (pos, v) in &vertices {
        if vseen.insert(v, ()).is_some() {
            return Err(fail(*pos, ParseErrorKind::Duplicate(v.to_string())));
        }
    }
    let mut eseen: HashMap<&EdgeId, ()> = HashMap::new();
    for (pos, e, tpos, hpos) in &edges {
        if eseen.insert(&e.id, ()).is_some() {
            return Err(fail(*pos, ParseErrorKind::Duplicate(e.id.to_string())));
        }
        if !vseen.contains_key(&e.tail) {
            return Err(fail(*tpos, ParseErrorKind::UnknownVertex(e.tail.to_string())));
        }
        if !vseen.contains_key(&e.head) {
            return Err(fail(*hpos, ParseErrorKind::UnknownVertex(e.head.to_string())));
        }
    }
    let mut fseen: HashMap<&FaceId, ()> = HashMap::new();
    for f in &faces {
        if fseen.insert(&f.id, ()).is_some() {
            return Err(fail(f.pos, ParseErrorKind::Duplicate(f.id.to_string())));
        }
        for (pos, d) in &f.refs {
            if !eseen.contains_key(&d.edge) {
                return Err(fail(*pos, ParseErrorKind::UnknownEdge(d.edge.to_string())));
            }
        }
    }

    let mut built_faces = Vec::with_capacity(faces.len());
    for f in faces {
        let n = f.refs.len();
        let angles: Vec<Angle> = match f.angles {
            Some(list) => list.into_iter().map(|(_, a)| a).collect(),
            None => {
                let eq = equal_angles(n);
                if eq.iter().any(|a| !a.is_positive()) {
                    return Err(fail(
                        f.pos,
                        ParseErrorKind::NonPositiveAngle {
                            face: f.id.to_string(),
                            angle: eq[0].to_ratio_string(),
                        },
                    ));
                }
                eq
            }
        };
        let actual: Angle = angles.iter().sum();
        let expected = Angle::polygon_sum(n);
        if actual != expected {
            return Err(fail(
                f.pos,
                ParseErrorKind::AngleSum {
                    face: f.id.to_string(),
                    expected: expected.to_string(),
                    actual: actual.to_string(),
                },
            ));
        }
        built_faces.push(Face {
            id: f.id,
            boundary: f.refs.into_iter().map(|(_, d)| d).collect(),
            angles,
        });
    }

    Complex2::new(
        vertices.into_iter().map(|(_, v)| v).collect(),
        edges.into_iter().map(|(_, e, _, _)| e).collect(),
        built_faces,
        meta,
    )
}

/// Writes the complex in A2C form, cells in stored order.
pub fn serialize_a2c(x: &Complex2) -> String {
    let mut out = String::new();
    for v in x.vertices() {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in x.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.id, e.tail, e.head);
    }
    for f in x.faces() {
        let word: Vec<String> = f.boundary.iter().map(|d| d.to_string()).collect();
        let angles: Vec<String> = f.angles.iter().map(|a| a.to_ratio_string()).collect();
        let _ = writeln!(out, "face {} : {} angles: {}", f.id, word.join(" "), angles.join(" "));
    }
    let _ = writeln!(out, "meta disk_diagram {}", x.meta().is_disk_diagram);
    if let Some(src) = &x.meta().source {
        let _ = writeln!(out, "meta source {src}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexBuilder;

    const TORUS: &str = "\
# flat torus: one vertex, two loops, one square
vertex v
edge a v v
edge b v v

face f : a+ b+ a- b- angles: 1/2 1/2 1/2 1/2
meta disk_diagram false
# end
";

    #[test]
    fn torus_document_matches_hand_built_value() {
        assert_eq!(TORUS.lines().count(), 8);
        let parsed = parse_a2c(TORUS).unwrap();
        let expected = ComplexBuilder::new()
            .vertex("v")
            .edge("a", "v", "v")
            .edge("b", "v", "v")
            .face("f", "a+ b+ a- b-", vec![Angle::new(1, 2); 4])
            .build()
            .unwrap();
        assert_eq!(parsed, expected);
        assert_eq!(parsed.vertices().len(), 1);
        assert_eq!(parsed.edges().len(), 2);
        assert_eq!(parsed.faces()[0].len(), 4);
    }

    #[test]
    fn single_point_document() {
        let x = parse_a2c("vertex p\n").unwrap();
        assert_eq!(x.vertices().len(), 1);
        assert!(x.edges().is_empty() && x.faces().is_empty());
        assert!(crate::validate(&x).ok);
    }

    #[test]
    fn triangle_with_wrong_sum_is_rejected() {
        let doc = "vertex x\nvertex y\nvertex z\nedge p x y\nedge q y z\nedge r z x\n\
                   face t : p+ q+ r+ angles: 1/3 1/3 1/2\n";
        let err = parse_a2c(doc).unwrap_err();
        match err {
            Error::Parse { line, kind: ParseErrorKind::AngleSum { face, actual, .. }, .. } => {
                assert_eq!(line, 7);
                assert_eq!(face, "t");
                assert_eq!(actual, "7π/6");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_a2c("vertex v\nedge a v\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, kind: ParseErrorKind::Syntax(_) }));
        let err = parse_a2c("vertex v\nedge a v v\nface f : a* angles: 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 10, .. }));
    }

    #[test]
    fn reference_and_duplicate_errors() {
        let err = parse_a2c("vertex v\nedge a v w\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse { line: 2, column: 10, kind: ParseErrorKind::UnknownVertex(ref w) } if w == "w"
        ));
        let err = parse_a2c("vertex v\nvertex v\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, kind: ParseErrorKind::Duplicate(_), .. }));
        let err = parse_a2c("vertex v\nedge a v v\nface f : a+ z- b+ angles: 1/3 1/3 1/3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::UnknownEdge(ref z), .. } if z == "z"));
    }

    #[test]
    fn non_positive_and_decimal_angles() {
        let base = "vertex x\nvertex y\nvertex z\nedge p x y\nedge q y z\nedge r z x\n";
        let err = parse_a2c(&format!("{base}face t : p+ q+ r+ angles: 0 1/2 1/2\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::NonPositiveAngle { .. }, .. }));
        let err = parse_a2c(&format!("{base}face t : p+ q+ r+ angles: 0.5 1/4 1/4\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::Angle(_), .. }));
        let err = parse_a2c(&format!("{base}face t : p+ q+ r+ angles: 1/2 1/2\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::AngleCount { .. }, .. }));
    }

    #[test]
    fn bare_faces_get_placeholder_angles() {
        let doc = "vertex v\nedge a v v\nedge b v v\nface f : a+ b+ a- b-\n";
        assert!(parse_a2c(doc).is_err());
        let x = parse_a2c_with(doc, ParseOptions { require_angles: false }).unwrap();
        assert_eq!(x.faces()[0].angles, vec![Angle::new(1, 2); 4]);
    }

    #[test]
    fn meta_source_round_trips() {
        let x = parse_a2c("vertex v\nmeta source built by hand  \nmeta disk_diagram true\n").unwrap();
        assert_eq!(x.meta().source.as_deref(), Some("built by hand"));
        assert!(x.meta().is_disk_diagram);
        assert_eq!(parse_a2c(&serialize_a2c(&x)).unwrap(), x);
    }
}
