//! Finite angled combinatorial 2-complexes.
//!
//! Faces are attached along cyclic words of directed edges. Corner `i` of a
//! face sits between boundary letters `i` and `i + 1` (cyclically), at the
//! head of letter `i`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::Angle;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);
id_type!(FaceId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn endpoint(&self, end: End) -> &VertexId {
        match end {
            End::Tail => &self.tail,
            End::Head => &self.head,
        }
    }
}

/// An edge traversed in a given direction; written `a+` or `a-`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub edge: EdgeId,
    pub sign: Sign,
}

impl DirectedEdge {
    pub fn new(edge: impl Into<EdgeId>, sign: Sign) -> Self {
        DirectedEdge {
            edge: edge.into(),
            sign,
        }
    }

    pub fn reversed(&self) -> Self {
        DirectedEdge {
            edge: self.edge.clone(),
            sign: self.sign.flip(),
        }
    }

    /// The edge end at which this traversal starts.
    pub fn start_end(&self) -> End {
        match self.sign {
            Sign::Plus => End::Tail,
            Sign::Minus => End::Head,
        }
    }

    /// The edge end at which this traversal finishes.
    pub fn finish_end(&self) -> End {
        self.start_end().opposite()
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", self.edge, s)
    }
}

impl fmt::Debug for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for DirectedEdge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses a boundary word such as `"a+ b+ a- b-"`.
pub fn parse_word(word: &str) -> Result<Vec<DirectedEdge>, Error> {
    word.split_whitespace()
        .map(|tok| {
            let (id, sign) = if let Some(id) = tok.strip_suffix('+') {
                (id, Sign::Plus)
            } else if let Some(id) = tok.strip_suffix('-') {
                (id, Sign::Minus)
            } else {
                return Err(Error::Invalid(format!("edge reference `{tok}` needs a + or - suffix")));
            };
            if id.is_empty() {
                return Err(Error::Invalid(format!("empty edge reference `{tok}`")));
            }
            Ok(DirectedEdge::new(id, sign))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: FaceId,
    pub boundary: Vec<DirectedEdge>,
    /// `angles[i]` is the corner between `boundary[i]` and `boundary[i + 1]`.
    pub angles: Vec<Angle>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn angle_sum(&self) -> Angle {
        self.angles.iter().sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metadata {
    /// Caller's assertion that the complex is planar and simply connected.
    pub is_disk_diagram: bool,
    pub source: Option<String>,
}

/// Identifies corner `index` of a face.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CornerRef {
    pub face: FaceId,
    pub index: usize,
}

impl fmt::Display for CornerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.face, self.index)
    }
}

/// Identifies one occurrence of an edge in a face boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdjacencyRef {
    pub face: FaceId,
    pub position: usize,
}

impl fmt::Display for AdjacencyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.face, self.position)
    }
}

/// A face corner with its incident boundary letters resolved.
#[derive(Clone, Debug)]
pub struct Corner<'a> {
    pub face: &'a Face,
    pub index: usize,
    pub vertex: &'a VertexId,
    pub incoming: &'a DirectedEdge,
    pub outgoing: &'a DirectedEdge,
    pub angle: &'a Angle,
}

impl Corner<'_> {
    pub fn reference(&self) -> CornerRef {
        CornerRef {
            face: self.face.id.clone(),
            index: self.index,
        }
    }
}

/// A finite combinatorial 2-complex with corner angles. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex2 {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    meta: Metadata,
    vertex_index: HashMap<VertexId, usize>,
    edge_index: HashMap<EdgeId, usize>,
    face_index: HashMap<FaceId, usize>,
}

impl Complex2 {
    /// Assembles a complex, checking identifier uniqueness, that every
    /// reference resolves, and that each face has one angle per letter.
    /// Geometric conditions (consistency, angle sums, connectivity) are left
    /// to [`crate::validate`].
    pub fn new(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        faces: Vec<Face>,
        meta: Metadata,
    ) -> Result<Self, Error> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::Duplicate {
                    kind: "vertex",
                    id: v.0.clone(),
                });
            }
        }
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            for end in [&e.tail, &e.head] {
                if !vertex_index.contains_key(end) {
                    return Err(Error::UnknownVertex(end.0.clone()));
                }
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Duplicate {
                    kind: "edge",
                    id: e.id.0.clone(),
                });
            }
        }
        let mut face_index = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for d in &f.boundary {
                if !edge_index.contains_key(&d.edge) {
                    return Err(Error::UnknownEdge(d.edge.0.clone()));
                }
            }
            if f.angles.len() != f.boundary.len() {
                return Err(Error::AngleCount {
                    face: f.id.0.clone(),
                    expected: f.boundary.len(),
                    found: f.angles.len(),
                });
            }
            if face_index.insert(f.id.clone(), i).is_some() {
                return Err(Error::Duplicate {
                    kind: "face",
                    id: f.id.0.clone(),
                });
            }
        }
        Ok(Complex2 {
            vertices,
            edges,
            faces,
            meta,
            vertex_index,
            edge_index,
            face_index,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn meta(&self) -> &Metadata {
        &self.meta
    }

    pub fn with_meta(&self, meta: Metadata) -> Complex2 {
        let mut out = self.clone();
        out.meta = meta;
        out
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertex_index.contains_key(v)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn face(&self, id: &FaceId) -> Option<&Face> {
        self.face_index.get(id).map(|&i| &self.faces[i])
    }

    pub fn require_vertex(&self, v: &VertexId) -> Result<(), Error> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.0.clone()))
        }
    }

    pub fn require_edge(&self, e: &EdgeId) -> Result<&Edge, Error> {
        self.edge(e).ok_or_else(|| Error::UnknownEdge(e.0.clone()))
    }

    pub fn require_face(&self, f: &FaceId) -> Result<&Face, Error> {
        self.face(f).ok_or_else(|| Error::UnknownFace(f.0.clone()))
    }

    /// Vertex where a traversal of `d` starts.
    pub fn start_of(&self, d: &DirectedEdge) -> &VertexId {
        let e = &self.edges[self.edge_index[&d.edge]];
        e.endpoint(d.start_end())
    }

    /// Vertex where a traversal of `d` finishes.
    pub fn finish_of(&self, d: &DirectedEdge) -> &VertexId {
        let e = &self.edges[self.edge_index[&d.edge]];
        e.endpoint(d.finish_end())
    }

    /// Vertex identifiers in lexicographic order.
    pub fn sorted_vertices(&self) -> Vec<&VertexId> {
        let mut v: Vec<_> = self.vertices.iter().collect();
        v.sort();
        v
    }

    /// Edges in lexicographic id order.
    pub fn sorted_edges(&self) -> Vec<&Edge> {
        let mut e: Vec<_> = self.edges.iter().collect();
        e.sort_by(|a, b| a.id.cmp(&b.id));
        e
    }

    /// Faces in lexicographic id order.
    pub fn sorted_faces(&self) -> Vec<&Face> {
        let mut f: Vec<_> = self.faces.iter().collect();
        f.sort_by(|a, b| a.id.cmp(&b.id));
        f
    }

    /// All corners, faces in lexicographic order, corners by index.
    pub fn corners(&self) -> impl Iterator<Item = Corner<'_>> {
        self.sorted_faces().into_iter().flat_map(move |face| {
            let n = face.boundary.len();
            (0..n).map(move |i| {
                let incoming = &face.boundary[i];
                Corner {
                    face,
                    index: i,
                    vertex: self.finish_of(incoming),
                    incoming,
                    outgoing: &face.boundary[(i + 1) % n],
                    angle: &face.angles[i],
                }
            })
        })
    }

    pub fn corners_at<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = Corner<'a>> + 'a {
        self.corners().filter(move |c| c.vertex == v)
    }

    pub fn corner(&self, r: &CornerRef) -> Option<Corner<'_>> {
        let face = self.face(&r.face)?;
        let n = face.boundary.len();
        if r.index >= n {
            return None;
        }
        let incoming = &face.boundary[r.index];
        Some(Corner {
            face,
            index: r.index,
            vertex: self.finish_of(incoming),
            incoming,
            outgoing: &face.boundary[(r.index + 1) % n],
            angle: &face.angles[r.index],
        })
    }

    /// Every occurrence of `e` in a face boundary, faces in lexicographic order.
    pub fn adjacencies(&self, e: &EdgeId) -> Vec<(AdjacencyRef, Sign)> {
        let mut out = Vec::new();
        for face in self.sorted_faces() {
            for (pos, d) in face.boundary.iter().enumerate() {
                if &d.edge == e {
                    out.push((
                        AdjacencyRef {
                            face: face.id.clone(),
                            position: pos,
                        },
                        d.sign,
                    ));
                }
            }
        }
        out
    }

    /// Number of times `e` occurs (in either orientation) across all face
    /// boundaries.
    pub fn adjacency_census(&self, e: &EdgeId) -> Result<usize, Error> {
        self.require_edge(e)?;
        Ok(self
            .faces
            .iter()
            .flat_map(|f| f.boundary.iter())
            .filter(|d| &d.edge == e)
            .count())
    }

    /// Census of every edge in one pass.
    pub fn census_map(&self) -> HashMap<&EdgeId, usize> {
        let mut counts: HashMap<&EdgeId, usize> = self.edges.iter().map(|e| (&e.id, 0)).collect();
        for d in self.faces.iter().flat_map(|f| f.boundary.iter()) {
            *counts.get_mut(&d.edge).expect("resolved edge") += 1;
        }
        counts
    }

    /// `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn cell_count(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }

    /// Edges with `v` as an endpoint (loops listed once).
    pub fn incident_edges<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges
            .iter()
            .filter(move |e| &e.tail == v || &e.head == v)
    }

    /// Graph degree of `v` in the 1-skeleton; loops count twice.
    pub fn degree(&self, v: &VertexId) -> usize {
        self.incident_edges(v)
            .map(|e| if e.is_loop() { 2 } else { 1 })
            .sum()
    }

    /// Number of connected components of the 1-skeleton.
    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let a = find(&mut parent, self.vertex_index[&e.tail]);
            let b = find(&mut parent, self.vertex_index[&e.head]);
            if a != b {
                parent[a] = b;
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Copy with selected cells removed. Callers guarantee the result is still
    /// closed under boundaries.
    pub(crate) fn without(
        &self,
        vertices: &BTreeSet<&VertexId>,
        edges: &BTreeSet<&EdgeId>,
        faces: &BTreeSet<&FaceId>,
    ) -> Complex2 {
        Complex2::new(
            self.vertices
                .iter()
                .filter(|v| !vertices.contains(v))
                .cloned()
                .collect(),
            self.edges
                .iter()
                .filter(|e| !edges.contains(&e.id))
                .cloned()
                .collect(),
            self.faces
                .iter()
                .filter(|f| !faces.contains(&f.id))
                .cloned()
                .collect(),
            self.meta.clone(),
        )
        .expect("removing a closed set of cells keeps references valid")
    }

    /// Copy with every corner angle replaced via `angle_of`.
    pub fn with_angles(&self, mut angle_of: impl FnMut(&CornerRef) -> Angle) -> Complex2 {
        let mut out = self.clone();
        for face in &mut out.faces {
            for i in 0..face.angles.len() {
                face.angles[i] = angle_of(&CornerRef {
                    face: face.id.clone(),
                    index: i,
                });
            }
        }
        out
    }

    /// Copy with all identifiers renamed; used for isomorphism checks.
    pub fn relabeled(
        &self,
        vmap: impl Fn(&VertexId) -> VertexId,
        emap: impl Fn(&EdgeId) -> EdgeId,
        fmap: impl Fn(&FaceId) -> FaceId,
    ) -> Complex2 {
        Complex2::new(
            self.vertices.iter().map(&vmap).collect(),
            self.edges
                .iter()
                .map(|e| Edge {
                    id: emap(&e.id),
                    tail: vmap(&e.tail),
                    head: vmap(&e.head),
                })
                .collect(),
            self.faces
                .iter()
                .map(|f| Face {
                    id: fmap(&f.id),
                    boundary: f
                        .boundary
                        .iter()
                        .map(|d| DirectedEdge::new(emap(&d.edge), d.sign))
                        .collect(),
                    angles: f.angles.clone(),
                })
                .collect(),
            self.meta.clone(),
        )
        .expect("injective relabeling")
    }
}

/// Incremental construction helper.
#[derive(Debug, Default, Clone)]
pub struct ComplexBuilder {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    meta: Metadata,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<VertexId>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<EdgeId>,
        tail: impl Into<VertexId>,
        head: impl Into<VertexId>,
    ) -> Self {
        self.edges.push(Edge {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
        });
        self
    }

    /// Adds a face from a word like `"a+ b+ a- b-"`; panics on a malformed word.
    pub fn face(mut self, id: impl Into<FaceId>, word: &str, angles: Vec<Angle>) -> Self {
        let boundary = parse_word(word).expect("well-formed boundary word");
        self.faces.push(Face {
            id: id.into(),
            boundary,
            angles,
        });
        self
    }

    pub fn face_word(
        mut self,
        id: impl Into<FaceId>,
        boundary: Vec<DirectedEdge>,
        angles: Vec<Angle>,
    ) -> Self {
        self.faces.push(Face {
            id: id.into(),
            boundary,
            angles,
        });
        self
    }

    /// Adds a face whose corners all get the equal angle `(n - 2)π / n`.
    pub fn equiangular_face(self, id: impl Into<FaceId>, word: &str) -> Self {
        let boundary = parse_word(word).expect("well-formed boundary word");
        let angles = equal_angles(boundary.len());
        self.face_word(id, boundary, angles)
    }

    pub fn disk_diagram(mut self, flag: bool) -> Self {
        self.meta.is_disk_diagram = flag;
        self
    }

    pub fn source(mut self, source: impl Into<String>) -> Self {
        self.meta.source = Some(source.into());
        self
    }

    pub fn build(self) -> Result<Complex2, Error> {
        Complex2::new(self.vertices, self.edges, self.faces, self.meta)
    }
}

/// `n` copies of `(n - 2)π / n`.
pub fn equal_angles(n: usize) -> Vec<Angle> {
    if n == 0 {
        return Vec::new();
    }
    vec![Angle::new(n as i64 - 2, n as i64); n]
}
