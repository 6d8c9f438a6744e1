//! Vertex links and edge-interior links as weighted metric multigraphs.
//!
//! A link node at a vertex `v` is an edge end incident to `v`, so a loop at
//! `v` contributes two nodes. Each face corner at `v` becomes an arc whose
//! length is the corner angle. Arcs run from the end of the incoming boundary
//! letter to the end of the outgoing one, and offsets along an arc are
//! measured from its `from` node.
//!
//! Distances, girth and eccentricity are computed exactly over any
//! [`Exact`] field; points inside arcs are handled by splitting the arc.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::Serialize;

use crate::angle::AngleOf;
use crate::complex::{AdjacencyRef, Complex2, CornerRef, EdgeId, End, VertexId};
use crate::error::Error;
use crate::scalar::Exact;

/// The two directions along an edge at one of its interior points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stub {
    /// Toward the edge's tail.
    X,
    /// Toward the edge's head.
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkNode {
    EdgeEnd { edge: EdgeId, end: End },
    Stub { stub: Stub },
    /// A bare numbered node, for graphs not derived from a complex.
    Abstract { index: usize },
}

impl fmt::Display for LinkNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkNode::EdgeEnd { edge, end } => {
                let e = match end {
                    End::Tail => "tail",
                    End::Head => "head",
                };
                write!(f, "{edge}_{e}")
            }
            LinkNode::Stub { stub } => write!(f, "{}", if *stub == Stub::X { "x" } else { "y" }),
            LinkNode::Abstract { index } => write!(f, "n{index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcSource {
    Corner(CornerRef),
    Adjacency(AdjacencyRef),
    Synthetic { index: usize },
}

impl fmt::Display for ArcSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcSource::Corner(c) => write!(f, "{c}"),
            ArcSource::Adjacency(a) => write!(f, "{a}"),
            ArcSource::Synthetic { index } => write!(f, "s{index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct LinkArc<T: Exact> {
    pub from: usize,
    pub to: usize,
    pub length: AngleOf<T>,
    pub source: ArcSource,
}

impl<T: Exact> LinkArc<T> {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// A finite metric multigraph with positive exact arc lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Link<T: Exact> {
    pub nodes: Vec<LinkNode>,
    pub arcs: Vec<LinkArc<T>>,
}

/// A position in a link: a node, or a point strictly inside an arc at
/// `offset` from the arc's `from` node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "")]
pub enum MetricPoint<T: Exact> {
    Node { node: usize },
    OnArc { arc: usize, offset: AngleOf<T> },
}

impl<T: Exact> MetricPoint<T> {
    pub fn node(node: usize) -> Self {
        MetricPoint::Node { node }
    }

    pub fn on_arc(arc: usize, offset: AngleOf<T>) -> Self {
        MetricPoint::OnArc { arc, offset }
    }

    pub fn convert<U: Exact>(&self) -> Option<MetricPoint<U>> {
        Some(match self {
            MetricPoint::Node { node } => MetricPoint::Node { node: *node },
            MetricPoint::OnArc { arc, offset } => MetricPoint::OnArc {
                arc: *arc,
                offset: offset.convert()?,
            },
        })
    }
}

/// A shortest simple cycle, as the arcs of a closed walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Cycle<T: Exact> {
    pub length: AngleOf<T>,
    pub arcs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "")]
pub enum Eccentricity<T: Exact> {
    /// The supremum of distances is attained at `witness`.
    Finite { value: AngleOf<T>, witness: MetricPoint<T> },
    /// Some point (e.g. `witness`) lies in a different component.
    Infinite { witness: MetricPoint<T> },
}

impl<T: Exact> Eccentricity<T> {
    pub fn witness(&self) -> &MetricPoint<T> {
        match self {
            Eccentricity::Finite { witness, .. } | Eccentricity::Infinite { witness } => witness,
        }
    }

    /// True when the eccentricity is at least `bound`.
    pub fn at_least(&self, bound: &AngleOf<T>) -> bool {
        match self {
            Eccentricity::Finite { value, .. } => value >= bound,
            Eccentricity::Infinite { .. } => true,
        }
    }
}

/// A piece of the far region of a point: a node, a single interior point, or
/// a closed sub-interval `[lo, hi]` (`lo < hi`) of an arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "")]
pub enum Region<T: Exact> {
    Point { point: MetricPoint<T> },
    Interval { arc: usize, lo: AngleOf<T>, hi: AngleOf<T> },
}

/// One linear piece `intercept + slope·s` with slope `±1`.
#[derive(Clone)]
struct Line<T: Exact> {
    intercept: AngleOf<T>,
    rising: bool,
}

impl<T: Exact> Line<T> {
    fn at(&self, s: &AngleOf<T>) -> AngleOf<T> {
        if self.rising {
            &self.intercept + s
        } else {
            &self.intercept - s
        }
    }
}

/// The distance function along one arc, restricted to `[lo, hi]`, as a
/// minimum of slope-±1 lines. `None` lines mean unreachable.
struct Piece<T: Exact> {
    lo: AngleOf<T>,
    hi: AngleOf<T>,
    lines: Vec<Line<T>>,
}

impl<T: Exact> Piece<T> {
    fn value(&self, s: &AngleOf<T>) -> Option<AngleOf<T>> {
        self.lines.iter().map(|l| l.at(s)).min()
    }

    /// Candidate maximizers: the ends and every rising/falling crossing.
    fn candidates(&self) -> Vec<AngleOf<T>> {
        let mut out = vec![self.lo.clone(), self.hi.clone()];
        for up in self.lines.iter().filter(|l| l.rising) {
            for down in self.lines.iter().filter(|l| !l.rising) {
                let s = (&down.intercept - &up.intercept).half();
                if s > self.lo && s < self.hi {
                    out.push(s);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// `{s in [lo, hi] : value(s) >= bound}`, an interval since the piece is
    /// concave.
    fn superlevel(&self, bound: &AngleOf<T>) -> Option<(AngleOf<T>, AngleOf<T>)> {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        for l in &self.lines {
            if l.rising {
                let s = bound - &l.intercept;
                if s > lo {
                    lo = s;
                }
            } else {
                let s = &l.intercept - bound;
                if s < hi {
                    hi = s;
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

impl<T: Exact> Link<T> {
    pub fn empty() -> Self {
        Link {
            nodes: Vec::new(),
            arcs: Vec::new(),
        }
    }

    /// A graph on `n` abstract nodes.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize, AngleOf<T>)>) -> Self {
        Link {
            nodes: (0..n).map(|index| LinkNode::Abstract { index }).collect(),
            arcs: arcs
                .into_iter()
                .enumerate()
                .map(|(index, (from, to, length))| {
                    assert!(from < n && to < n, "arc endpoint out of range");
                    assert!(length.is_positive(), "arc lengths must be positive");
                    LinkArc {
                        from,
                        to,
                        length,
                        source: ArcSource::Synthetic { index },
                    }
                })
                .collect(),
        }
    }

    pub fn node_index(&self, node: &LinkNode) -> Option<usize> {
        self.nodes.iter().position(|n| n == node)
    }

    /// Same graph over another exact field.
    pub fn convert<U: Exact>(&self) -> Link<U> {
        Link {
            nodes: self.nodes.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| LinkArc {
                    from: a.from,
                    to: a.to,
                    length: a.length.convert().expect("arc length representable"),
                    source: a.source.clone(),
                })
                .collect(),
        }
    }

    /// Euler characteristic `nodes - arcs`.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.arcs.len() as i64
    }

    pub fn total_length(&self) -> AngleOf<T> {
        self.arcs.iter().map(|a| a.length.clone()).sum()
    }

    pub fn contains(&self, p: &MetricPoint<T>) -> bool {
        match p {
            MetricPoint::Node { node } => *node < self.nodes.len(),
            MetricPoint::OnArc { arc, offset } => self
                .arcs
                .get(*arc)
                .is_some_and(|a| offset.is_positive() && offset < &a.length),
        }
    }

    fn require(&self, p: &MetricPoint<T>) -> Result<(), Error> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotInGraph(format!("{p:?}")))
        }
    }

    /// Multi-source Dijkstra. Returns distances and, per node, the arc used to
    /// reach it together with the predecessor node.
    fn dijkstra(
        &self,
        sources: &[(usize, AngleOf<T>)],
        skip_arc: Option<usize>,
    ) -> (Vec<Option<AngleOf<T>>>, Vec<Option<(usize, usize)>>) {
        let n = self.nodes.len();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, a) in self.arcs.iter().enumerate() {
            if Some(i) == skip_arc || a.is_loop() {
                continue;
            }
            adjacency[a.from].push((a.to, i));
            adjacency[a.to].push((a.from, i));
        }
        let mut dist: Vec<Option<AngleOf<T>>> = vec![None; n];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        for (node, d) in sources {
            if dist[*node].as_ref().is_none_or(|cur| d < cur) {
                dist[*node] = Some(d.clone());
                heap.push(Reverse((d.clone(), *node)));
            }
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u].as_ref().is_some_and(|best| &d > best) {
                continue;
            }
            for &(v, arc) in &adjacency[u] {
                let nd = &d + &self.arcs[arc].length;
                if dist[v].as_ref().is_none_or(|cur| &nd < cur) {
                    dist[v] = Some(nd.clone());
                    pred[v] = Some((arc, u));
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        (dist, pred)
    }

    fn sources_of(&self, p: &MetricPoint<T>) -> Vec<(usize, AngleOf<T>)> {
        match p {
            MetricPoint::Node { node } => vec![(*node, AngleOf::zero())],
            MetricPoint::OnArc { arc, offset } => {
                let a = &self.arcs[*arc];
                vec![(a.from, offset.clone()), (a.to, &a.length - offset)]
            }
        }
    }

    /// Distances from `p` to every node.
    pub fn distances_from(&self, p: &MetricPoint<T>) -> Result<Vec<Option<AngleOf<T>>>, Error> {
        self.require(p)?;
        Ok(self.dijkstra(&self.sources_of(p), None).0)
    }

    /// Exact shortest-path distance; `None` when `p` and `q` lie in different
    /// components.
    pub fn distance(&self, p: &MetricPoint<T>, q: &MetricPoint<T>) -> Result<Option<AngleOf<T>>, Error> {
        self.require(q)?;
        let dist = self.distances_from(p)?;
        Ok(match q {
            MetricPoint::Node { node } => dist[*node].clone(),
            MetricPoint::OnArc { arc, offset } => {
                let a = &self.arcs[*arc];
                let mut best = [
                    dist[a.from].as_ref().map(|d| d + offset),
                    dist[a.to].as_ref().map(|d| &(d + &a.length) - offset),
                ]
                .into_iter()
                .flatten()
                .min();
                if let MetricPoint::OnArc { arc: parc, offset: poff } = p {
                    if parc == arc {
                        let direct = (poff - offset).abs();
                        best = Some(match best {
                            Some(b) if b < direct => b,
                            _ => direct,
                        });
                    }
                }
                best
            }
        })
    }

    /// Length and arcs of a shortest simple cycle, or `None` for a forest.
    ///
    /// For every arc `(u, v, w)` the candidate is `w` for a loop, otherwise
    /// `w` plus the shortest `v → u` path avoiding that arc. Ties keep the
    /// lowest arc index.
    pub fn shortest_cycle(&self) -> Option<Cycle<T>> {
        let mut best: Option<Cycle<T>> = None;
        for (i, a) in self.arcs.iter().enumerate() {
            if best.as_ref().is_some_and(|b| a.length >= b.length) {
                continue;
            }
            let candidate = if a.is_loop() {
                Some(Cycle {
                    length: a.length.clone(),
                    arcs: vec![i],
                })
            } else {
                let (dist, pred) = self.dijkstra(&[(a.to, AngleOf::zero())], Some(i));
                dist[a.from].as_ref().map(|d| {
                    // Walk back from `from` to `to`, then orient as a closed walk
                    // starting with arc i.
                    let mut back = Vec::new();
                    let mut cur = a.from;
                    while cur != a.to {
                        let (arc, prev) = pred[cur].expect("reachable node has a predecessor");
                        back.push(arc);
                        cur = prev;
                    }
                    back.reverse();
                    let mut arcs = vec![i];
                    arcs.extend(back);
                    Cycle {
                        length: &a.length + d,
                        arcs,
                    }
                })
            };
            if let Some(c) = candidate {
                if best.as_ref().is_none_or(|b| c.length < b.length) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// The distance function along every arc, split so each piece is a
    /// minimum of lines. Unreachable arcs produce pieces with no lines.
    fn pieces(&self, p: &MetricPoint<T>, dist: &[Option<AngleOf<T>>]) -> Vec<(usize, Piece<T>)> {
        let mut out = Vec::new();
        for (i, a) in self.arcs.iter().enumerate() {
            let mut lines = Vec::new();
            if let Some(du) = &dist[a.from] {
                lines.push(Line {
                    intercept: du.clone(),
                    rising: true,
                });
            }
            if let Some(dv) = &dist[a.to] {
                lines.push(Line {
                    intercept: dv + &a.length,
                    rising: false,
                });
            }
            match p {
                MetricPoint::OnArc { arc, offset } if *arc == i => {
                    let mut left = lines.clone();
                    left.push(Line {
                        intercept: offset.clone(),
                        rising: false,
                    });
                    let mut right = lines;
                    right.push(Line {
                        intercept: -offset.clone(),
                        rising: true,
                    });
                    out.push((
                        i,
                        Piece {
                            lo: AngleOf::zero(),
                            hi: offset.clone(),
                            lines: left,
                        },
                    ));
                    out.push((
                        i,
                        Piece {
                            lo: offset.clone(),
                            hi: a.length.clone(),
                            lines: right,
                        },
                    ));
                }
                _ => out.push((
                    i,
                    Piece {
                        lo: AngleOf::zero(),
                        hi: a.length.clone(),
                        lines,
                    },
                )),
            }
        }
        out
    }

    fn point_at(&self, arc: usize, s: &AngleOf<T>) -> MetricPoint<T> {
        let a = &self.arcs[arc];
        if s.is_zero() {
            MetricPoint::node(a.from)
        } else if s == &a.length {
            MetricPoint::node(a.to)
        } else {
            MetricPoint::on_arc(arc, s.clone())
        }
    }

    /// Supremum of `distance(p, q)` over all metric points `q`, with a point
    /// attaining it. Earlier arcs and smaller offsets win ties.
    pub fn eccentricity(&self, p: &MetricPoint<T>) -> Result<Eccentricity<T>, Error> {
        let dist = self.distances_from(p)?;
        for (i, d) in dist.iter().enumerate() {
            if d.is_none() {
                return Ok(Eccentricity::Infinite {
                    witness: MetricPoint::node(i),
                });
            }
        }
        let mut best: Option<(AngleOf<T>, MetricPoint<T>)> = None;
        // Isolated nodes only matter when they are p itself.
        if let MetricPoint::Node { node } = p {
            best = Some((AngleOf::zero(), MetricPoint::node(*node)));
        }
        for (arc, piece) in self.pieces(p, &dist) {
            for s in piece.candidates() {
                let v = piece.value(&s).expect("reachable piece");
                if best.as_ref().is_none_or(|(b, _)| &v > b) {
                    best = Some((v, self.point_at(arc, &s)));
                }
            }
        }
        let (value, witness) = best.expect("non-empty link");
        Ok(Eccentricity::Finite { value, witness })
    }

    /// Every point at distance `>= bound` from `p`, canonically: nodes first
    /// (by index), then interior points and intervals by arc.
    pub fn far_region(&self, p: &MetricPoint<T>, bound: &AngleOf<T>) -> Result<Vec<Region<T>>, Error> {
        let dist = self.distances_from(p)?;
        let mut nodes = Vec::new();
        for (i, d) in dist.iter().enumerate() {
            if d.as_ref().is_none_or(|d| d >= bound) {
                nodes.push(i);
            }
        }
        let mut spans: Vec<(usize, AngleOf<T>, AngleOf<T>)> = Vec::new();
        for (arc, piece) in self.pieces(p, &dist) {
            let span = if piece.lines.is_empty() {
                Some((piece.lo.clone(), piece.hi.clone()))
            } else {
                piece.superlevel(bound)
            };
            if let Some((lo, hi)) = span {
                match spans.last_mut() {
                    Some((a, _, h)) if *a == arc && *h == lo => *h = hi,
                    _ => spans.push((arc, lo, hi)),
                }
            }
        }
        let mut out: Vec<Region<T>> = nodes
            .into_iter()
            .map(|node| Region::Point {
                point: MetricPoint::node(node),
            })
            .collect();
        for (arc, lo, hi) in spans {
            let len = &self.arcs[arc].length;
            if lo == hi {
                if lo.is_positive() && &lo < len {
                    out.push(Region::Point {
                        point: MetricPoint::on_arc(arc, lo),
                    });
                }
            } else {
                out.push(Region::Interval { arc, lo, hi });
            }
        }
        Ok(out)
    }

    /// DOT text for inspection.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for (i, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{n}\"];\n"));
        }
        for a in &self.arcs {
            s.push_str(&format!(
                "  n{} -- n{} [label=\"{} ({})\"];\n",
                a.from,
                a.to,
                a.length.to_ratio_string(),
                a.source
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// The link of vertex `v`: one node per incident edge end (sorted by edge id,
/// tail before head) and one arc per corner at `v` (faces by id, corners by
/// index).
pub fn build_link(x: &Complex2, v: &VertexId) -> Result<Link<num_rational::Rational64>, Error> {
    x.require_vertex(v)?;
    let mut nodes = Vec::new();
    for e in x.sorted_edges() {
        for end in [End::Tail, End::Head] {
            if e.endpoint(end) == v {
                nodes.push(LinkNode::EdgeEnd {
                    edge: e.id.clone(),
                    end,
                });
            }
        }
    }
    let index = |edge: &EdgeId, end: End| {
        nodes
            .iter()
            .position(|n| matches!(n, LinkNode::EdgeEnd { edge: e, end: d } if e == edge && *d == end))
            .expect("corner edge end is incident")
    };
    let arcs = x
        .corners_at(v)
        .map(|c| LinkArc {
            from: index(&c.incoming.edge, c.incoming.finish_end()),
            to: index(&c.outgoing.edge, c.outgoing.start_end()),
            length: c.angle.clone(),
            source: ArcSource::Corner(c.reference()),
        })
        .collect();
    Ok(Link { nodes, arcs })
}

/// The link of an interior point of `e`: stubs `x` (toward the tail) and `y`
/// (toward the head), joined by one arc of length π per occurrence of `e` in a
/// face boundary.
pub fn link_of_edge_interior(x: &Complex2, e: &EdgeId) -> Result<Link<num_rational::Rational64>, Error> {
    x.require_edge(e)?;
    let nodes = vec![LinkNode::Stub { stub: Stub::X }, LinkNode::Stub { stub: Stub::Y }];
    let arcs = x
        .adjacencies(e)
        .into_iter()
        .map(|(adj, _)| LinkArc {
            from: 0,
            to: 1,
            length: AngleOf::pi(),
            source: ArcSource::Adjacency(adj),
        })
        .collect();
    Ok(Link { nodes, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::Angle;

    type L = Link<num_rational::Rational64>;

    fn a(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    #[test]
    fn torus_link_is_a_four_cycle() {
        let t = builders::torus();
        let l = build_link(&t, &"v".into()).unwrap();
        let names: Vec<String> = l.nodes.iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["a_tail", "a_head", "b_tail", "b_head"]);
        assert_eq!(l.arcs.len(), 4);
        let pairs: Vec<(String, String)> = l
            .arcs
            .iter()
            .map(|arc| (names[arc.from].clone(), names[arc.to].clone()))
            .collect();
        // a_head–b_tail–a_tail–b_head–a_head
        assert_eq!(
            pairs,
            [
                ("a_head".to_string(), "b_tail".to_string()),
                ("b_head".to_string(), "a_head".to_string()),
                ("a_tail".to_string(), "b_head".to_string()),
                ("b_tail".to_string(), "a_tail".to_string()),
            ]
        );
        assert!(l.arcs.iter().all(|arc| arc.length == a(1, 2)));
    }

    #[test]
    fn isolated_vertex_has_empty_link() {
        let x = crate::complex::ComplexBuilder::new().vertex("p").build().unwrap();
        let l = build_link(&x, &"p".into()).unwrap();
        assert!(l.nodes.is_empty() && l.arcs.is_empty());
        assert!(l.shortest_cycle().is_none());
    }

    #[test]
    fn heptadisk_center_is_a_seven_cycle() {
        let h = builders::heptadisk();
        let l = build_link(&h, &"c".into()).unwrap();
        assert_eq!(l.nodes.len(), 7);
        assert_eq!(l.arcs.len(), 7);
        assert!(l.arcs.iter().all(|arc| arc.length == a(1, 3)));
        let cyc = l.shortest_cycle().unwrap();
        assert_eq!(cyc.length, a(7, 3));
        assert_eq!(cyc.arcs.len(), 7);
    }

    #[test]
    fn edge_interior_links() {
        let t = builders::torus();
        let l = link_of_edge_interior(&t, &"a".into()).unwrap();
        assert_eq!(l.nodes.len(), 2);
        assert_eq!(l.arcs.len(), 2);
        assert!(l.arcs.iter().all(|arc| arc.length == Angle::pi()));
        let c = builders::cylinder(3).unwrap();
        assert_eq!(link_of_edge_interior(&c, &"t0".into()).unwrap().arcs.len(), 1);
        let bare = crate::complex::ComplexBuilder::new()
            .vertex("p")
            .vertex("q")
            .edge("e", "p", "q")
            .build()
            .unwrap();
        let l = link_of_edge_interior(&bare, &"e".into()).unwrap();
        assert_eq!((l.nodes.len(), l.arcs.len()), (2, 0));
    }

    #[test]
    fn torus_distances() {
        let l = build_link(&builders::torus(), &"v".into()).unwrap();
        let head = l.node_index(&LinkNode::EdgeEnd { edge: "a".into(), end: End::Head }).unwrap();
        let tail = l.node_index(&LinkNode::EdgeEnd { edge: "a".into(), end: End::Tail }).unwrap();
        assert_eq!(
            l.distance(&MetricPoint::node(head), &MetricPoint::node(tail)).unwrap(),
            Some(Angle::pi())
        );
        let p = MetricPoint::on_arc(2, a(1, 7));
        assert_eq!(l.distance(&p, &p).unwrap(), Some(Angle::zero()));
    }

    #[test]
    fn interior_points_on_parallel_arcs() {
        let l = L::from_arcs(2, [(0, 1, Angle::pi()), (0, 1, Angle::pi())]);
        let p = MetricPoint::on_arc(0, a(1, 2));
        let q = MetricPoint::on_arc(1, a(1, 2));
        assert_eq!(l.distance(&p, &q).unwrap(), Some(Angle::pi()));
        let r = MetricPoint::on_arc(0, a(1, 5));
        assert_eq!(l.distance(&p, &r).unwrap(), Some(a(3, 10)));
    }

    #[test]
    fn different_components_are_infinitely_far() {
        let l = L::from_arcs(4, [(0, 1, a(1, 2)), (2, 3, a(1, 2))]);
        assert_eq!(l.distance(&MetricPoint::node(0), &MetricPoint::node(3)).unwrap(), None);
        assert!(matches!(
            l.eccentricity(&MetricPoint::node(0)).unwrap(),
            Eccentricity::Infinite { .. }
        ));
    }

    #[test]
    fn points_outside_the_graph_are_rejected() {
        let l = L::from_arcs(2, [(0, 1, a(1, 2))]);
        assert!(l.distance(&MetricPoint::node(5), &MetricPoint::node(0)).is_err());
        assert!(l
            .distance(&MetricPoint::on_arc(0, a(1, 2)), &MetricPoint::node(0))
            .is_err());
        assert!(l.eccentricity(&MetricPoint::on_arc(0, Angle::zero())).is_err());
    }

    #[test]
    fn girth_examples() {
        let l = build_link(&builders::torus(), &"v".into()).unwrap();
        let c = l.shortest_cycle().unwrap();
        assert_eq!(c.length, Angle::two_pi());
        assert_eq!(c.arcs.len(), 4);
        let looped = L::from_arcs(1, [(0, 0, a(1, 3))]);
        assert_eq!(looped.shortest_cycle().unwrap().length, a(1, 3));
        let cyl = builders::cylinder(3).unwrap();
        let l = build_link(&cyl, &"u0".into()).unwrap();
        assert_eq!(l.arcs.len(), 2);
        assert!(l.shortest_cycle().is_none());
    }

    #[test]
    fn bigons_from_parallel_arcs() {
        let l = L::from_arcs(3, [(0, 1, a(1, 3)), (1, 2, a(1, 9)), (1, 0, a(1, 4))]);
        let c = l.shortest_cycle().unwrap();
        assert_eq!(c.length, a(7, 12));
        assert_eq!(c.arcs, vec![0, 2]);
    }

    #[test]
    fn eccentricity_examples() {
        // Single cycle of total length 2π: antipode at distance π.
        let cyc = L::from_arcs(4, (0..4).map(|i| (i, (i + 1) % 4, a(1, 2))));
        let e = cyc.eccentricity(&MetricPoint::on_arc(0, a(1, 6))).unwrap();
        assert_eq!(
            e,
            Eccentricity::Finite {
                value: Angle::pi(),
                witness: MetricPoint::on_arc(2, a(1, 6)),
            }
        );
        // Path of two arcs π/2, p at π/4 on the first: far end at 3π/4.
        let path = L::from_arcs(3, [(0, 1, a(1, 2)), (1, 2, a(1, 2))]);
        let e = path.eccentricity(&MetricPoint::on_arc(0, a(1, 4))).unwrap();
        assert_eq!(
            e,
            Eccentricity::Finite {
                value: a(3, 4),
                witness: MetricPoint::node(2),
            }
        );
        // Torus link from a_head: farthest point is a_tail at π.
        let l = build_link(&builders::torus(), &"v".into()).unwrap();
        let head = l.node_index(&LinkNode::EdgeEnd { edge: "a".into(), end: End::Head }).unwrap();
        let tail = l.node_index(&LinkNode::EdgeEnd { edge: "a".into(), end: End::Tail }).unwrap();
        match l.eccentricity(&MetricPoint::node(head)).unwrap() {
            Eccentricity::Finite { value, witness } => {
                assert_eq!(value, Angle::pi());
                assert_eq!(witness, MetricPoint::node(tail));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn far_region_on_cycles() {
        // 2π cycle: exactly the antipode.
        let cyc = L::from_arcs(4, (0..4).map(|i| (i, (i + 1) % 4, a(1, 2))));
        let r = cyc.far_region(&MetricPoint::on_arc(1, a(1, 4)), &Angle::pi()).unwrap();
        assert_eq!(
            r,
            vec![Region::Point {
                point: MetricPoint::on_arc(3, a(1, 4))
            }]
        );
        // Heptagonal 7π/3 cycle from a node: the closed arc opposite it.
        let h = L::from_arcs(7, (0..7).map(|i| (i, (i + 1) % 7, a(1, 3))));
        let r = h.far_region(&MetricPoint::node(0), &Angle::pi()).unwrap();
        assert_eq!(
            r,
            vec![
                Region::Point { point: MetricPoint::node(3) },
                Region::Point { point: MetricPoint::node(4) },
                Region::Interval { arc: 3, lo: Angle::zero(), hi: a(1, 3) },
            ]
        );
    }

    #[test]
    fn far_region_on_a_path() {
        let cyl = builders::cylinder(3).unwrap();
        let l = build_link(&cyl, &"u0".into()).unwrap();
        let t0_tail = l.node_index(&LinkNode::EdgeEnd { edge: "t0".into(), end: End::Tail }).unwrap();
        let t2_head = l.node_index(&LinkNode::EdgeEnd { edge: "t2".into(), end: End::Head }).unwrap();
        let r = l.far_region(&MetricPoint::node(t0_tail), &Angle::pi()).unwrap();
        assert_eq!(r, vec![Region::Point { point: MetricPoint::node(t2_head) }]);
        let s0_tail = l.node_index(&LinkNode::EdgeEnd { edge: "s0".into(), end: End::Tail }).unwrap();
        assert!(l.far_region(&MetricPoint::node(s0_tail), &Angle::pi()).unwrap().is_empty());
    }
}
