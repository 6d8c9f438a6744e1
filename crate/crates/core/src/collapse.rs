//! Free faces, elementary collapses and greedy full collapse.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complex::{Complex2, EdgeId, FaceId, VertexId};
use crate::error::Error;
use crate::weight_test::{classify, Classification};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreeFace {
    /// A leaf vertex and the single (non-loop) edge it ends.
    VertexInEdge { vertex: VertexId, edge: EdgeId },
    /// An edge met exactly once by exactly one face.
    EdgeInFace { edge: EdgeId, face: FaceId },
}

impl fmt::Display for FreeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeFace::VertexInEdge { vertex, edge } => write!(f, "vertex {vertex} in edge {edge}"),
            FreeFace::EdgeInFace { edge, face } => write!(f, "edge {edge} in face {face}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TerminalClass {
    /// A single vertex.
    Point,
    /// No faces, connected, every vertex of degree 2.
    Cycle,
    /// No faces, otherwise.
    Graph,
    /// Faces remain but none has a free face.
    Stuck2Complex,
}

impl fmt::Display for TerminalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseTrace {
    pub steps: Vec<FreeFace>,
    #[serde(skip)]
    pub terminal: Complex2,
    pub terminal_class: TerminalClass,
}

fn vertex_free_face(x: &Complex2, v: &VertexId) -> Option<FreeFace> {
    let mut incident = x.incident_edges(v);
    let e = incident.next()?;
    if incident.next().is_some() || e.is_loop() {
        return None;
    }
    if x.corners_at(v).next().is_some() {
        return None;
    }
    Some(FreeFace::VertexInEdge {
        vertex: v.clone(),
        edge: e.id.clone(),
    })
}

/// All free faces, sorted (vertex faces first, then by identifier).
pub fn free_faces(x: &Complex2) -> Vec<FreeFace> {
    let mut out: Vec<FreeFace> = x
        .vertices()
        .iter()
        .filter_map(|v| vertex_free_face(x, v))
        .collect();
    let census = x.census_map();
    for e in x.edges() {
        if census[&e.id] == 1 {
            let face = x
                .faces()
                .iter()
                .find(|f| f.boundary.iter().any(|d| d.edge == e.id))
                .expect("census 1 edge has a face");
            out.push(FreeFace::EdgeInFace {
                edge: e.id.clone(),
                face: face.id.clone(),
            });
        }
    }
    out.sort();
    out
}

fn is_free(x: &Complex2, ff: &FreeFace) -> bool {
    match ff {
        FreeFace::VertexInEdge { vertex, edge } => {
            x.has_vertex(vertex)
                && vertex_free_face(x, vertex).is_some_and(|f| matches!(f, FreeFace::VertexInEdge { edge: e, .. } if &e == edge))
        }
        FreeFace::EdgeInFace { edge, face } => {
            x.edge(edge).is_some()
                && x.adjacency_census(edge) == Ok(1)
                && x
                    .face(face)
                    .is_some_and(|f| f.boundary.iter().any(|d| &d.edge == edge))
        }
    }
}

/// Removes a free face together with its coface.
pub fn elementary_collapse(x: &Complex2, ff: &FreeFace) -> Result<Complex2, Error> {
    if !is_free(x, ff) {
        return Err(Error::StaleFreeFace(ff.to_string()));
    }
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    let mut fs = BTreeSet::new();
    match ff {
        FreeFace::VertexInEdge { vertex, edge } => {
            vs.insert(vertex);
            es.insert(edge);
        }
        FreeFace::EdgeInFace { edge, face } => {
            es.insert(edge);
            fs.insert(face);
        }
    }
    Ok(x.without(&vs, &es, &fs))
}

/// Classifies a complex with no free faces left.
pub fn terminal_class(x: &Complex2) -> TerminalClass {
    if !x.faces().is_empty() {
        TerminalClass::Stuck2Complex
    } else if x.vertices().len() == 1 && x.edges().is_empty() {
        TerminalClass::Point
    } else if !x.edges().is_empty()
        && x.is_connected()
        && x.vertices().iter().all(|v| x.degree(v) == 2)
    {
        TerminalClass::Cycle
    } else {
        TerminalClass::Graph
    }
}

/// Collapses with `choose` picking among the current free faces until none
/// remain.
pub fn collapse_with(x: &Complex2, mut choose: impl FnMut(&[FreeFace]) -> usize) -> CollapseTrace {
    let mut current = x.clone();
    let mut steps = Vec::new();
    loop {
        let free = free_faces(&current);
        if free.is_empty() {
            break;
        }
        let pick = free[choose(&free)].clone();
        current = elementary_collapse(&current, &pick).expect("listed face is free");
        steps.push(pick);
    }
    let terminal_class = terminal_class(&current);
    CollapseTrace {
        steps,
        terminal: current,
        terminal_class,
    }
}

/// Greedy collapse, always taking the first free face in sorted order.
pub fn collapse_all(x: &Complex2) -> CollapseTrace {
    collapse_with(x, |_| 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Yes,
    No,
    NotApplicable,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Simple connectivity within the weight-test-passing class: collapsible
/// iff simply connected there. Outside the class, `NotApplicable`.
pub fn simply_connected_decision(x: &Complex2) -> Decision {
    if classify(x).classification == Classification::Fails {
        return Decision::NotApplicable;
    }
    if collapse_all(x).terminal_class == TerminalClass::Point {
        Decision::Yes
    } else {
        Decision::No
    }
}

/// Whether π₁ is ℤ, decided for conformally negatively curved complexes by
/// whether the greedy collapse ends in a cycle.
pub fn infinite_cyclic_decision(x: &Complex2) -> Decision {
    if classify(x).classification != Classification::Negative {
        return Decision::NotApplicable;
    }
    if collapse_all(x).terminal_class == TerminalClass::Cycle {
        Decision::Yes
    } else {
        Decision::No
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::complex::ComplexBuilder;

    fn path2() -> Complex2 {
        ComplexBuilder::new()
            .vertex("p")
            .vertex("q")
            .vertex("r")
            .edge("a", "p", "q")
            .edge("b", "q", "r")
            .build()
            .unwrap()
    }

    #[test]
    fn square_disk_free_faces() {
        let sq = builders::polygon(4).unwrap();
        let ff = free_faces(&sq);
        assert_eq!(ff.len(), 4);
        assert!(ff.iter().all(|f| matches!(f, FreeFace::EdgeInFace { .. })));
    }

    #[test]
    fn torus_has_no_free_faces() {
        assert!(free_faces(&builders::torus()).is_empty());
    }

    #[test]
    fn path_leaves_are_free() {
        let ff = free_faces(&path2());
        assert_eq!(
            ff,
            vec![
                FreeFace::VertexInEdge { vertex: "p".into(), edge: "a".into() },
                FreeFace::VertexInEdge { vertex: "r".into(), edge: "b".into() },
            ]
        );
        let shorter = elementary_collapse(&path2(), &ff[0]).unwrap();
        assert_eq!((shorter.vertices().len(), shorter.edges().len()), (2, 1));
    }

    #[test]
    fn square_collapse_leaves_a_path() {
        let sq = builders::polygon(4).unwrap();
        let ff = FreeFace::EdgeInFace { edge: "e1".into(), face: "f".into() };
        let y = elementary_collapse(&sq, &ff).unwrap();
        assert_eq!((y.vertices().len(), y.edges().len(), y.faces().len()), (4, 3, 0));
        assert!(crate::validate(&y).ok);
        assert!(matches!(elementary_collapse(&y, &ff), Err(Error::StaleFreeFace(_))));
    }

    #[test]
    fn cylinder_collapse_steps() {
        let c = builders::cylinder(3).unwrap();
        let y = elementary_collapse(&c, &FreeFace::EdgeInFace { edge: "t0".into(), face: "f0".into() }).unwrap();
        let ff = free_faces(&y);
        assert!(ff.contains(&FreeFace::EdgeInFace { edge: "t1".into(), face: "f1".into() }));
        assert!(ff.contains(&FreeFace::EdgeInFace { edge: "t2".into(), face: "f2".into() }));
        assert!(!ff.iter().any(|f| matches!(f, FreeFace::VertexInEdge { .. })));
    }

    #[test]
    fn collapse_all_examples() {
        let sq = collapse_all(&builders::polygon(4).unwrap());
        assert_eq!(sq.terminal_class, TerminalClass::Point);
        assert_eq!(sq.steps.len(), 4);
        assert!(matches!(sq.steps[0], FreeFace::EdgeInFace { .. }));
        assert!(sq.steps[1..].iter().all(|f| matches!(f, FreeFace::VertexInEdge { .. })));

        let cyl = collapse_all(&builders::cylinder(3).unwrap());
        assert_eq!(cyl.terminal_class, TerminalClass::Cycle);
        assert_eq!(cyl.terminal.edges().len(), 3);

        let t = collapse_all(&builders::torus());
        assert_eq!(t.terminal_class, TerminalClass::Stuck2Complex);
        assert!(t.steps.is_empty());
    }

    #[test]
    fn decisions() {
        assert_eq!(simply_connected_decision(&builders::heptadisk()), Decision::Yes);
        assert_eq!(simply_connected_decision(&builders::torus()), Decision::No);
        assert_eq!(simply_connected_decision(&builders::tetrahedron()), Decision::NotApplicable);
        assert_eq!(infinite_cyclic_decision(&builders::cylinder(4).unwrap()), Decision::Yes);
        assert_eq!(infinite_cyclic_decision(&builders::torus()), Decision::NotApplicable);
        assert_eq!(infinite_cyclic_decision(&builders::heptadisk()), Decision::No);
    }

    #[test]
    fn terminal_classes_of_graphs() {
        let theta = ComplexBuilder::new()
            .vertex("p")
            .vertex("q")
            .edge("a", "p", "q")
            .edge("b", "p", "q")
            .edge("c", "p", "q")
            .build()
            .unwrap();
        assert_eq!(collapse_all(&theta).terminal_class, TerminalClass::Graph);
        let one_loop = ComplexBuilder::new().vertex("p").edge("a", "p", "p").build().unwrap();
        assert_eq!(terminal_class(&one_loop), TerminalClass::Cycle);
    }
}
