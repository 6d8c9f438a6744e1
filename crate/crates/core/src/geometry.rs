//! Euclidean polygons for faces and straight segmental paths.
//!
//! Planar coordinates are floating point and only locate crossings. Every
//! straightness decision is made exactly in a link metric graph over
//! `BigRational`, with float angles converted exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use serde::Serialize;

use crate::complex::{AdjacencyRef, Complex2, CornerRef, EdgeId, End, FaceId, Sign, VertexId};
use crate::error::Error;
use crate::link::{build_link, link_of_edge_interior, ArcSource, Link, LinkNode, MetricPoint, Region};
use crate::scalar::{Exact, Real};
use crate::{Angle, ExactAngle};

pub type Point<S> = [S; 2];

fn add<S: Real>(a: Point<S>, b: Point<S>) -> Point<S> {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub<S: Real>(a: Point<S>, b: Point<S>) -> Point<S> {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale<S: Real>(a: Point<S>, k: S) -> Point<S> {
    [a[0] * k, a[1] * k]
}

fn dot<S: Real>(a: Point<S>, b: Point<S>) -> S {
    a[0] * b[0] + a[1] * b[1]
}

fn cross<S: Real>(a: Point<S>, b: Point<S>) -> S {
    a[0] * b[1] - a[1] * b[0]
}

fn norm<S: Real>(a: Point<S>) -> S {
    a[0].hypot(a[1])
}

fn unit<S: Real>(a: Point<S>) -> Point<S> {
    scale(a, norm(a).recip())
}

/// Counter-clockwise rotation by `radians`.
fn rotate<S: Real>(a: Point<S>, radians: S) -> Point<S> {
    let (s, c) = radians.sin_cos();
    [a[0] * c - a[1] * s, a[0] * s + a[1] * c]
}

/// Clockwise angle from `u` to `w`, in `[0, 2π)`.
fn cw_angle<S: Real>(u: Point<S>, w: Point<S>) -> S {
    let a = cross(w, u).atan2(dot(u, w));
    if a < S::zero() {
        a + S::PI() + S::PI()
    } else {
        a
    }
}

/// Unsigned angle between two vectors, in `[0, π]`.
fn angle_between<S: Real>(u: Point<S>, w: Point<S>) -> S {
    cross(u, w).abs().atan2(dot(u, w))
}

/// Solves `p + t·d = a + s·(b − a)`; `None` when parallel.
fn ray_hit<S: Real>(p: Point<S>, d: Point<S>, a: Point<S>, b: Point<S>) -> Option<(S, S)> {
    let side = sub(b, a);
    let den = cross(d, side);
    if den.abs() <= S::epsilon() * norm(d) * norm(side) {
        return None;
    }
    let ap = sub(a, p);
    Some((cross(ap, side) / den, cross(ap, d) / den))
}

/// Exact multiple of π for a float angle given in radians.
fn exact_multiple<S: Real>(radians: S) -> ExactAngle {
    let m = (radians / S::PI()).to_f64().expect("finite angle");
    ExactAngle::from_multiple(BigRational::from_float(m).expect("finite angle"))
}

fn radians<S: Real, T: Exact>(a: &crate::AngleOf<T>) -> S {
    S::lit(a.to_radians())
}

/// A face drawn as a planar polygon: vertex `i` is where boundary letter `i`
/// starts, so corner `i` sits at `points[i + 1]`. Counter-clockwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonRealization<S: Real> {
    pub face: FaceId,
    pub points: Vec<Point<S>>,
    pub lengths: Vec<S>,
}

impl<S: Real> PolygonRealization<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point<S> {
        self.points[i % self.points.len()]
    }

    /// Side `i` as (start, end) in traversal order.
    pub fn side(&self, i: usize) -> (Point<S>, Point<S>) {
        (self.point(i), self.point(i + 1))
    }

    pub fn perimeter(&self) -> S {
        self.lengths.iter().fold(S::zero(), |a, &b| a + b)
    }

    /// Snap distance for vertex hits.
    pub fn snap(&self) -> S {
        S::tolerance() * self.perimeter()
    }

    /// Interior angle at corner `i`, in radians.
    pub fn interior_angle(&self, i: usize) -> S {
        let c = self.point(i + 1);
        cw_angle(sub(self.point(i), c), sub(self.point(i + 2), c))
    }

    /// Distance from `p` to the closest side.
    pub fn boundary_distance(&self, p: Point<S>) -> S {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.side(i);
                let ab = sub(b, a);
                let t = (dot(sub(p, a), ab) / dot(ab, ab)).max(S::zero()).min(S::one());
                norm(sub(p, add(a, scale(ab, t))))
            })
            .fold(S::infinity(), S::min)
    }

    pub fn contains(&self, p: Point<S>) -> bool {
        let mut inside = false;
        for i in 0..self.len() {
            let (a, b) = self.side(i);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Point at fraction `s` along side `i`.
    pub fn along(&self, i: usize, s: S) -> Point<S> {
        let (a, b) = self.side(i);
        add(a, scale(sub(b, a), s))
    }
}

fn segments_cross<S: Real>(a: Point<S>, b: Point<S>, c: Point<S>, d: Point<S>) -> bool {
    let o1 = cross(sub(b, a), sub(c, a));
    let o2 = cross(sub(b, a), sub(d, a));
    let o3 = cross(sub(d, c), sub(a, c));
    let o4 = cross(sub(d, c), sub(b, c));
    o1 * o2 <= S::zero() && o3 * o4 <= S::zero()
}

fn project_null(dirs: &[Point<f64>], g_inv: [[f64; 2]; 2], l: &[f64]) -> Vec<f64> {
    let m = [
        dirs.iter().zip(l).map(|(d, x)| d[0] * x).sum::<f64>(),
        dirs.iter().zip(l).map(|(d, x)| d[1] * x).sum::<f64>(),
    ];
    let lam = [
        g_inv[0][0] * m[0] + g_inv[0][1] * m[1],
        g_inv[1][0] * m[0] + g_inv[1][1] * m[1],
    ];
    dirs.iter()
        .zip(l)
        .map(|(d, x)| x - (d[0] * lam[0] + d[1] * lam[1]))
        .collect()
}

/// Side lengths closing a polygon with the given unit side directions:
/// the projection of the all-ones vector onto the closure null space, or an
/// alternating-projection search when that is not positive.
fn closing_lengths(dirs: &[Point<f64>]) -> Result<Vec<f64>, String> {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for d in dirs {
        a += d[0] * d[0];
        b += d[0] * d[1];
        c += d[1] * d[1];
    }
    let det = a * c - b * b;
    if det.abs() < 1e-12 {
        return Err("side directions are collinear".into());
    }
    let g_inv = [[c / det, -b / det], [-b / det, a / det]];
    let n = dirs.len();
    let mut l = project_null(dirs, g_inv, &vec![1.0; n]);
    let floor = 0.1;
    let positive = |l: &[f64]| l.iter().all(|&x| x > 1e-6);
    if !positive(&l) {
        for _ in 0..20_000 {
            let clipped: Vec<f64> = l.iter().map(|&x| x.max(floor)).collect();
            l = project_null(dirs, g_inv, &clipped);
            if l.iter().all(|&x| x >= floor / 2.0) {
                break;
            }
        }
    }
    if !positive(&l) {
        let sx: f64 = dirs.iter().map(|d| d[0]).sum();
        let sy: f64 = dirs.iter().map(|d| d[1]).sum();
        return Err(format!(
            "no positive side lengths close the polygon (direction sum {sx:.6}, {sy:.6})"
        ));
    }
    Ok(l)
}

/// Realizes face `f` as a convex-or-not simple polygon with the face's
/// corner angles.
pub fn realize_face<S: Real>(x: &Complex2, f: &FaceId) -> Result<PolygonRealization<S>, Error> {
    let face = x.require_face(f)?;
    let n = face.len();
    let fail = |reason: String| Error::Realization {
        face: f.to_string(),
        reason,
    };
    if n < 3 {
        return Err(fail(format!("{n} corners")));
    }
    let mut heading = Angle::zero();
    let mut dirs = Vec::with_capacity(n);
    for i in 0..n {
        let r = heading.to_radians();
        dirs.push([r.cos(), r.sin()]);
        heading = heading + Angle::pi() - face.angles[i].clone();
    }
    let lengths = closing_lengths(&dirs).map_err(fail)?;
    let lengths: Vec<S> = lengths.into_iter().map(S::lit).collect();
    let mut points = vec![[S::zero(), S::zero()]];
    for i in 0..n - 1 {
        let d = [S::lit(dirs[i][0]), S::lit(dirs[i][1])];
        points.push(add(points[i], scale(d, lengths[i])));
    }
    let poly = PolygonRealization {
        face: f.clone(),
        points,
        lengths,
    };
    let last = add(
        poly.points[n - 1],
        scale([S::lit(dirs[n - 1][0]), S::lit(dirs[n - 1][1])], poly.lengths[n - 1]),
    );
    if norm(last) > S::lit(1e3) * poly.snap() {
        return Err(fail(format!("closure residual {}", norm(last))));
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = poly.side(i);
            let (c, d) = poly.side(j);
            if segments_cross(a, b, c, d) {
                return Err(fail(format!("sides {i} and {j} intersect")));
            }
        }
    }
    Ok(poly)
}

/// Realizations of all faces, keyed by face.
pub fn realize_all<S: Real>(x: &Complex2) -> Result<BTreeMap<FaceId, PolygonRealization<S>>, Error> {
    x.faces()
        .iter()
        .map(|f| Ok((f.id.clone(), realize_face(x, &f.id)?)))
        .collect()
}

/// Continuations through an interior point of `e` that lie at link distance
/// at least π from the entry, which arrives on adjacency `entry` at angle
/// `alpha` from the direction of the edge's tail.
pub fn straight_exits(
    x: &Complex2,
    e: &EdgeId,
    entry: &AdjacencyRef,
    alpha: &ExactAngle,
) -> Result<Vec<(AdjacencyRef, ExactAngle)>, Error> {
    let adj = x.adjacencies(e);
    if adj.is_empty() {
        return Err(Error::Invalid(format!("edge `{e}` lies in no face")));
    }
    if adj.len() == 1 {
        return Err(Error::FreeEdge(e.to_string()));
    }
    if !alpha.is_positive() || alpha >= &ExactAngle::pi() {
        return Err(Error::Invalid(format!("entry angle {alpha} outside (0, π)")));
    }
    let arc = adj
        .iter()
        .position(|(a, _)| a == entry)
        .ok_or_else(|| Error::Invalid(format!("`{entry}` is not an adjacency of `{e}`")))?;
    let link: Link<BigRational> = link_of_edge_interior(x, e)?.convert();
    let far = link.far_region(&MetricPoint::on_arc(arc, alpha.clone()), &ExactAngle::pi())?;
    let mut out = Vec::new();
    for r in far {
        match r {
            Region::Point {
                point: MetricPoint::OnArc { arc, offset },
            } => out.push((adj[arc].0.clone(), offset)),
            Region::Interval { arc, lo, .. } => out.push((adj[arc].0.clone(), lo)),
            Region::Point { .. } => {}
        }
    }
    Ok(out)
}

/// All points of the vertex link at distance at least π from `entry`.
pub fn straight_exits_at_vertex(
    x: &Complex2,
    v: &VertexId,
    entry: &MetricPoint<BigRational>,
) -> Result<Vec<Region<BigRational>>, Error> {
    let link: Link<BigRational> = build_link(x, v)?.convert();
    link.far_region(entry, &ExactAngle::pi())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacePoint<S: Real> {
    pub face: FaceId,
    pub point: Point<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Place<S: Real> {
    Interior { face: FaceId, point: Point<S> },
    /// `parameter` is the fraction of the edge measured from its tail.
    EdgePoint { edge: EdgeId, parameter: S },
    Vertex { vertex: VertexId },
}

/// Exact certificate that a breakpoint is straight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    EdgeCrossing {
        edge: EdgeId,
        entry: AdjacencyRef,
        entry_offset: ExactAngle,
        exit: AdjacencyRef,
        exit_offset: ExactAngle,
    },
    Vertex {
        vertex: VertexId,
        entry: MetricPoint<BigRational>,
        exit: MetricPoint<BigRational>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Breakpoint<S: Real> {
    pub place: Place<S>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Carrier {
    Face(FaceId),
    /// Runs along an edge; coordinates are `(parameter, 0)`.
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment<S: Real> {
    pub carrier: Carrier,
    pub start: Point<S>,
    pub end: Point<S>,
}

/// Breakpoints `b_0 … b_k` joined by segments `s_i = [b_i, b_{i+1}]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentalPath<S: Real> {
    pub breakpoints: Vec<Breakpoint<S>>,
    pub segments: Vec<Segment<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TerminationReason {
    SelfIntersect,
    EdgeRevisit,
    FreeEdgeHit,
    MaxSteps,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Termination {
    pub reason: TerminationReason,
    /// Index of the final breakpoint.
    pub breakpoint: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trace<S: Real> {
    pub path: SegmentalPath<S>,
    pub termination: Termination,
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Interior,
    Side(usize),
    Corner(usize),
}

enum Hit<S> {
    Side { side: usize, s: S },
    Corner { vertex: usize },
}

struct Tracer<'a, S: Real> {
    x: &'a Complex2,
    polys: BTreeMap<FaceId, PolygonRealization<S>>,
    path: SegmentalPath<S>,
    edges_seen: BTreeSet<EdgeId>,
    vertices_seen: BTreeSet<VertexId>,
    max_steps: usize,
}

enum Step<S: Real> {
    Continue { face: FaceId, point: Point<S>, dir: Point<S>, origin: Origin },
    Stop(TerminationReason, String),
}

impl<'a, S: Real> Tracer<'a, S> {
    fn poly(&self, f: &FaceId) -> &PolygonRealization<S> {
        &self.polys[f]
    }

    fn push(&mut self, carrier: Carrier, start: Point<S>, end: Point<S>, place: Place<S>) {
        self.path.segments.push(Segment { carrier, start, end });
        self.path.breakpoints.push(Breakpoint { place, witness: None });
    }

    fn first_exit(&self, face: &FaceId, p: Point<S>, d: Point<S>, origin: Origin) -> Option<(S, Hit<S>)> {
        let poly = self.poly(face);
        let n = poly.len();
        let snap = poly.snap();
        let mut best: Option<(S, usize, S)> = None;
        for i in 0..n {
            let skip = match origin {
                Origin::Interior => false,
                Origin::Side(k) => i == k,
                Origin::Corner(j) => i == j % n || (i + 1) % n == j % n,
            };
            if skip {
                continue;
            }
            let (a, b) = poly.side(i);
            let Some((t, s)) = ray_hit(p, d, a, b) else { continue };
            let len = poly.lengths[i];
            if t <= snap || s * len < -snap || (S::one() - s) * len < -snap {
                continue;
            }
            if best.is_none_or(|(bt, _, _)| t < bt) {
                best = Some((t, i, s));
            }
        }
        let (t, i, s) = best?;
        let len = poly.lengths[i];
        let hit = if s * len <= snap {
            Hit::Corner { vertex: i }
        } else if (S::one() - s) * len <= snap {
            Hit::Corner { vertex: (i + 1) % n }
        } else {
            Hit::Side { side: i, s }
        };
        Some((t, hit))
    }

    /// Earliest crossing of `p → q` with an earlier segment in the same face,
    /// as a fraction of the new segment.
    fn self_crossing(&self, face: &FaceId, p: Point<S>, q: Point<S>) -> Option<S> {
        let carrier = Carrier::Face(face.clone());
        let snap = self.poly(face).snap();
        let len = norm(sub(q, p));
        let mut best: Option<S> = None;
        for seg in &self.path.segments {
            if seg.carrier != carrier {
                continue;
            }
            let Some((t, s)) = ray_hit(p, sub(q, p), seg.start, seg.end) else { continue };
            let seg_len = norm(sub(seg.end, seg.start));
            if t * len > snap
                && t <= S::one() + snap / len
                && s * seg_len >= -snap
                && (S::one() - s) * seg_len >= -snap
                && best.is_none_or(|b| t < b)
            {
                best = Some(t.min(S::one()));
            }
        }
        best
    }

    fn step(&mut self, face: FaceId, p: Point<S>, d: Point<S>, origin: Origin) -> Result<Step<S>, Error> {
        if self.path.segments.len() >= self.max_steps {
            return Ok(Step::Stop(TerminationReason::MaxSteps, format!("{} segments", self.max_steps)));
        }
        let (_, hit) = self.first_exit(&face, p, d, origin).ok_or_else(|| Error::Realization {
            face: face.to_string(),
            reason: "ray does not leave the polygon".into(),
        })?;
        let poly = self.poly(&face).clone();
        let q = match hit {
            Hit::Corner { vertex } => poly.point(vertex),
            Hit::Side { side, s } => poly.along(side, s),
        };
        if let Some(t) = self.self_crossing(&face, p, q) {
            let r = add(p, scale(sub(q, p), t));
            self.push(
                Carrier::Face(face.clone()),
                p,
                r,
                Place::Interior {
                    face: face.clone(),
                    point: r,
                },
            );
            return Ok(Step::Stop(
                TerminationReason::SelfIntersect,
                format!("crosses an earlier segment in face {face}"),
            ));
        }
        let f = self.x.face(&face).expect("realized face");
        match hit {
            Hit::Side { side, s } => {
                let letter = f.boundary[side].clone();
                let e = letter.edge.clone();
                let u = if letter.sign == Sign::Plus { s } else { S::one() - s };
                self.push(
                    Carrier::Face(face.clone()),
                    p,
                    q,
                    Place::EdgePoint {
                        edge: e.clone(),
                        parameter: u,
                    },
                );
                if self.edges_seen.contains(&e) {
                    return Ok(Step::Stop(TerminationReason::EdgeRevisit, format!("edge {e} reached again")));
                }
                let adj = self.x.adjacencies(&e);
                if adj.len() < 2 {
                    return Ok(Step::Stop(TerminationReason::FreeEdgeHit, format!("edge {e} is free")));
                }
                self.edges_seen.insert(e.clone());
                let (a, b) = poly.side(side);
                let to_tail = unit(if letter.sign == Sign::Plus { sub(a, b) } else { sub(b, a) });
                let alpha = exact_multiple(angle_between(scale(d, -S::one()), to_tail));
                let entry = AdjacencyRef {
                    face: face.clone(),
                    position: side,
                };
                let exits = straight_exits(self.x, &e, &entry, &alpha)?;
                let (exit, beta) = exits.into_iter().next().ok_or_else(|| Error::FreeEdge(e.to_string()))?;
                let sign = adj.iter().find(|(a, _)| a == &exit).expect("listed adjacency").1;
                self.path.breakpoints.last_mut().expect("pushed").witness = Some(Witness::EdgeCrossing {
                    edge: e,
                    entry,
                    entry_offset: alpha,
                    exit: exit.clone(),
                    exit_offset: beta.clone(),
                });
                let g = self.poly(&exit.face);
                let (a, b) = g.side(exit.position);
                let s2 = if sign == Sign::Plus { u } else { S::one() - u };
                let start = g.along(exit.position, s2);
                let beta_r: S = radians(&beta);
                let dir = if sign == Sign::Plus {
                    rotate(unit(sub(a, b)), -beta_r)
                } else {
                    rotate(unit(sub(b, a)), beta_r)
                };
                Ok(Step::Continue {
                    face: exit.face.clone(),
                    point: start,
                    dir,
                    origin: Origin::Side(exit.position),
                })
            }
            Hit::Corner { vertex } => {
                let n = poly.len();
                let c = (vertex + n - 1) % n;
                let cref = CornerRef {
                    face: face.clone(),
                    index: c,
                };
                let v = self.x.finish_of(&f.boundary[c]).clone();
                self.push(Carrier::Face(face.clone()), p, q, Place::Vertex { vertex: v.clone() });
                if !self.vertices_seen.insert(v.clone()) {
                    return Ok(Step::Stop(TerminationReason::SelfIntersect, format!("vertex {v} reached again")));
                }
                let link: Link<BigRational> = build_link(self.x, &v)?.convert();
                let arc = link
                    .arcs
                    .iter()
                    .position(|a| a.source == ArcSource::Corner(cref.clone()))
                    .expect("corner arc in link");
                let theta = cw_angle(sub(poly.point(c), q), scale(d, -S::one()));
                let alpha = &f.angles[c];
                let tol = S::tolerance();
                let entry = if theta <= tol * S::PI() {
                    MetricPoint::node(link.arcs[arc].from)
                } else if theta >= radians::<S, _>(alpha) - tol * S::PI() {
                    MetricPoint::node(link.arcs[arc].to)
                } else {
                    MetricPoint::on_arc(arc, exact_multiple(theta))
                };
                self.at_vertex(v, link, entry)
            }
        }
    }

    /// Leaves vertex `v` from `entry`, following edges while the chosen
    /// exit is a link node.
    fn at_vertex(
        &mut self,
        mut v: VertexId,
        mut link: Link<BigRational>,
        mut entry: MetricPoint<BigRational>,
    ) -> Result<Step<S>, Error> {
        loop {
            let ecc = link.eccentricity(&entry)?;
            if !ecc.at_least(&ExactAngle::pi()) {
                return Ok(Step::Stop(
                    TerminationReason::FreeEdgeHit,
                    format!("no direction at distance π at vertex {v}"),
                ));
            }
            let exit = ecc.witness().clone();
            self.path.breakpoints.last_mut().expect("pushed").witness = Some(Witness::Vertex {
                vertex: v.clone(),
                entry: entry.clone(),
                exit: exit.clone(),
            });
            match exit {
                MetricPoint::OnArc { arc, offset } => {
                    let ArcSource::Corner(c) = &link.arcs[arc].source else {
                        unreachable!("vertex link arcs are corners")
                    };
                    let g = self.poly(&c.face);
                    let at = g.point(c.index + 1);
                    let dir = rotate(unit(sub(g.point(c.index), at)), -radians::<S, _>(&offset));
                    return Ok(Step::Continue {
                        face: c.face.clone(),
                        point: at,
                        dir,
                        origin: Origin::Corner(c.index + 1),
                    });
                }
                MetricPoint::Node { node } => {
                    let LinkNode::EdgeEnd { edge, end } = link.nodes[node].clone() else {
                        unreachable!("vertex link nodes are edge ends")
                    };
                    if self.path.segments.len() >= self.max_steps {
                        return Ok(Step::Stop(TerminationReason::MaxSteps, format!("{} segments", self.max_steps)));
                    }
                    if self.edges_seen.contains(&edge) {
                        return Ok(Step::Stop(TerminationReason::EdgeRevisit, format!("edge {edge} reached again")));
                    }
                    self.edges_seen.insert(edge.clone());
                    let w = self.x.edge(&edge).expect("link edge").endpoint(end.opposite()).clone();
                    let u0 = if end == End::Tail { S::zero() } else { S::one() };
                    self.push(
                        Carrier::Edge(edge.clone()),
                        [u0, S::zero()],
                        [S::one() - u0, S::zero()],
                        Place::Vertex { vertex: w.clone() },
                    );
                    if !self.vertices_seen.insert(w.clone()) {
                        return Ok(Step::Stop(TerminationReason::SelfIntersect, format!("vertex {w} reached again")));
                    }
                    link = build_link(self.x, &w)?.convert();
                    let back = LinkNode::EdgeEnd {
                        edge,
                        end: end.opposite(),
                    };
                    entry = MetricPoint::node(link.node_index(&back).expect("edge end at w"));
                    v = w;
                }
            }
        }
    }
}

/// Traces a straight segmental path from an interior point of a face.
/// At each edge crossing the first straight continuation in adjacency order
/// is taken; at a vertex the eccentricity witness is taken.
pub fn trace_straight<S: Real>(
    x: &Complex2,
    start: &FacePoint<S>,
    direction: Point<S>,
    max_steps: usize,
) -> Result<Trace<S>, Error> {
    let polys = realize_all::<S>(x)?;
    let poly = polys
        .get(&start.face)
        .ok_or_else(|| Error::InvalidStart(format!("unknown face `{}`", start.face)))?;
    let p = start.point;
    if !p[0].is_finite() || !p[1].is_finite() || !poly.contains(p) || poly.boundary_distance(p) <= poly.snap() {
        return Err(Error::InvalidStart(format!(
            "({}, {}) is not interior to face `{}`",
            p[0], p[1], start.face
        )));
    }
    let len = norm(direction);
    if !len.is_finite() || len <= S::zero() {
        return Err(Error::InvalidStart("direction must be a nonzero vector".into()));
    }
    let mut tracer = Tracer {
        x,
        polys,
        path: SegmentalPath {
            breakpoints: vec![Breakpoint {
                place: Place::Interior {
                    face: start.face.clone(),
                    point: p,
                },
                witness: None,
            }],
            segments: Vec::new(),
        },
        edges_seen: BTreeSet::new(),
        vertices_seen: BTreeSet::new(),
        max_steps,
    };
    let (mut face, mut point, mut dir, mut origin) = (start.face.clone(), p, unit(direction), Origin::Interior);
    loop {
        match tracer.step(face, point, dir, origin)? {
            Step::Continue {
                face: f,
                point: q,
                dir: d,
                origin: o,
            } => {
                face = f;
                point = q;
                dir = d;
                origin = o;
            }
            Step::Stop(reason, detail) => {
                let breakpoint = tracer.path.breakpoints.len() - 1;
                return Ok(Trace {
                    path: tracer.path,
                    termination: Termination {
                        reason,
                        breakpoint,
                        detail,
                    },
                });
            }
        }
    }
}

/// Result of checking a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Straight,
    Violation {
        breakpoint: usize,
        /// Link distance between entry and exit; `None` when infinite.
        distance: Option<ExactAngle>,
        reason: String,
    },
}

impl Verdict {
    pub fn is_straight(&self) -> bool {
        matches!(self, Verdict::Straight)
    }
}

/// Recomputes every breakpoint's link distance from scratch and checks that
/// each witness agrees with the segments around it.
pub fn verify_straight<S: Real>(x: &Complex2, path: &SegmentalPath<S>) -> Result<Verdict, Error> {
    let k = path.breakpoints.len();
    if k == 0 || path.segments.len() + 1 != k {
        return Err(Error::MalformedPath(format!(
            "{k} breakpoints for {} segments",
            path.segments.len()
        )));
    }
    for seg in &path.segments {
        match &seg.carrier {
            Carrier::Face(f) => {
                x.require_face(f).map_err(|_| Error::MalformedPath(format!("unknown face `{f}`")))?;
            }
            Carrier::Edge(e) => {
                x.require_edge(e).map_err(|_| Error::MalformedPath(format!("unknown edge `{e}`")))?;
            }
        }
    }
    let polys = realize_all::<S>(x)?;
    let pi = ExactAngle::pi();
    let violation = |i: usize, distance: Option<ExactAngle>, reason: String| {
        Ok(Verdict::Violation {
            breakpoint: i,
            distance,
            reason,
        })
    };
    for (i, b) in path.breakpoints.iter().enumerate() {
        let endpoint = i == 0 || i + 1 == k;
        let Some(w) = &b.witness else {
            if endpoint {
                continue;
            }
            return violation(i, None, "missing witness".into());
        };
        if i == 0 {
            return Err(Error::MalformedPath("witness on the initial breakpoint".into()));
        }
        let before = &path.segments[i - 1];
        let after = path.segments.get(i);
        match w {
            Witness::EdgeCrossing {
                edge,
                entry,
                entry_offset,
                exit,
                exit_offset,
            } => {
                let adj = x.adjacencies(edge);
                let arc_of = |a: &AdjacencyRef| adj.iter().position(|(r, _)| r == a);
                let (Some(ia), Some(ib)) = (arc_of(entry), arc_of(exit)) else {
                    return Err(Error::MalformedPath(format!("adjacency not on edge `{edge}`")));
                };
                let link: Link<BigRational> = link_of_edge_interior(x, edge)?.convert();
                let p = MetricPoint::on_arc(ia, entry_offset.clone());
                let q = MetricPoint::on_arc(ib, exit_offset.clone());
                if !link.contains(&p) || !link.contains(&q) {
                    return Err(Error::MalformedPath(format!("offset outside (0, π) at breakpoint {i}")));
                }
                let d = link.distance(&p, &q)?;
                if d.as_ref().is_some_and(|d| d < &pi) {
                    return violation(i, d, format!("edge crossing on {edge} at distance below π"));
                }
                if before.carrier != Carrier::Face(entry.face.clone()) {
                    return violation(i, d, format!("segment before does not lie in face {}", entry.face));
                }
                let sign_of = |a: &AdjacencyRef| adj.iter().find(|(r, _)| r == a).expect("found").1;
                let measured = |seg: &Segment<S>, a: &AdjacencyRef, back: bool| {
                    let poly = &polys[&a.face];
                    let (s, t) = poly.side(a.position);
                    let to_tail = if sign_of(a) == Sign::Plus { sub(s, t) } else { sub(t, s) };
                    let dir = sub(seg.end, seg.start);
                    let dir = if back { scale(dir, -S::one()) } else { dir };
                    angle_between(dir, to_tail).to_f64().unwrap_or(f64::NAN) / std::f64::consts::PI
                };
                let close = |m: f64, a: &ExactAngle| (m - a.to_f64()).abs() <= 1e3 * S::tolerance().to_f64().unwrap_or(1e-9);
                if !close(measured(before, entry, true), entry_offset) {
                    return violation(i, d, "entry angle disagrees with the incoming segment".into());
                }
                if let Some(seg) = after {
                    if seg.carrier != Carrier::Face(exit.face.clone()) {
                        return violation(i, d, format!("segment after does not lie in face {}", exit.face));
                    }
                    if !close(measured(seg, exit, false), exit_offset) {
                        return violation(i, d, "exit angle disagrees with the outgoing segment".into());
                    }
                }
            }
            Witness::Vertex { vertex, entry, exit } => {
                if b.place != (Place::Vertex { vertex: vertex.clone() }) {
                    return Err(Error::MalformedPath(format!("witness for {vertex} at another place")));
                }
                let link: Link<BigRational> = build_link(x, vertex)?.convert();
                if !link.contains(entry) || !link.contains(exit) {
                    return Err(Error::MalformedPath(format!("point outside the link of {vertex}")));
                }
                let d = link.distance(entry, exit)?;
                if d.as_ref().is_some_and(|d| d < &pi) {
                    return violation(i, d, format!("vertex {vertex} entry and exit closer than π"));
                }
                let carrier_of = |p: &MetricPoint<BigRational>| match p {
                    MetricPoint::OnArc { arc, .. } => match &link.arcs[*arc].source {
                        ArcSource::Corner(c) => Some(Carrier::Face(c.face.clone())),
                        _ => None,
                    },
                    MetricPoint::Node { .. } => None,
                };
                if let Some(c) = carrier_of(entry) {
                    if before.carrier != c {
                        return violation(i, d, "entry arc is not in the incoming face".into());
                    }
                }
                if let (Some(seg), MetricPoint::Node { node }) = (after, exit) {
                    if let LinkNode::EdgeEnd { edge, .. } = &link.nodes[*node] {
                        if seg.carrier != Carrier::Edge(edge.clone()) {
                            return violation(i, d, format!("exit along {edge} but the next segment is elsewhere"));
                        }
                    }
                }
                if let (Some(seg), Some(c)) = (after, carrier_of(exit)) {
                    if seg.carrier != c {
                        return violation(i, d, "exit arc is not in the outgoing face".into());
                    }
                }
            }
        }
    }
    Ok(Verdict::Straight)
}

/// Draws the visited faces unfolded along a constant heading, with the path
/// as a horizontal line.
pub fn path_svg<S: Real>(x: &Complex2, path: &SegmentalPath<S>) -> Result<String, Error> {
    let polys = realize_all::<S>(x)?;
    let unit_px = 100.0;
    let mut pen = 0.0f64;
    let mut shapes = String::new();
    let mut lines = String::new();
    let (mut lo_y, mut hi_y) = (0.0f64, 0.0f64);
    let mut max_x = 0.0f64;
    let f = |v: S| v.to_f64().unwrap_or(0.0);
    for seg in &path.segments {
        let start = [f(seg.start[0]), f(seg.start[1])];
        let end = [f(seg.end[0]), f(seg.end[1])];
        let v = [end[0] - start[0], end[1] - start[1]];
        let mut len = v[0].hypot(v[1]);
        match &seg.carrier {
            Carrier::Face(face) => {
                let rho = -v[1].atan2(v[0]);
                let (s, c) = rho.sin_cos();
                let pts: Vec<String> = polys[face]
                    .points
                    .iter()
                    .map(|p| {
                        let z = [f(p[0]) - start[0], f(p[1]) - start[1]];
                        let px = pen + z[0] * c - z[1] * s;
                        let py = z[0] * s + z[1] * c;
                        lo_y = lo_y.min(py);
                        hi_y = hi_y.max(py);
                        max_x = max_x.max(px);
                        format!("{:.3},{:.3}", px * unit_px, -py * unit_px)
                    })
                    .collect();
                let _ = writeln!(
                    shapes,
                    "  <polygon points=\"{}\" fill=\"#eef\" stroke=\"#447\" stroke-width=\"1\"><title>{face}</title></polygon>",
                    pts.join(" ")
                );
            }
            Carrier::Edge(e) => {
                let edge_len = x
                    .adjacencies(e)
                    .first()
                    .map(|(a, _)| f(polys[&a.face].lengths[a.position]))
                    .unwrap_or(1.0);
                len *= edge_len;
            }
        }
        let dash = if matches!(seg.carrier, Carrier::Edge(_)) { " stroke-dasharray=\"4 3\"" } else { "" };
        let _ = writeln!(
            lines,
            "  <line x1=\"{:.3}\" y1=\"0\" x2=\"{:.3}\" y2=\"0\" stroke=\"#c22\" stroke-width=\"2\"{dash}/>",
            pen * unit_px,
            (pen + len) * unit_px
        );
        pen += len;
        max_x = max_x.max(pen);
    }
    let pad = 10.0;
    let min_x = -pad;
    let width = max_x * unit_px + 2.0 * pad;
    let top = -hi_y * unit_px - pad;
    let height = (hi_y - lo_y) * unit_px + 2.0 * pad;
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x:.3} {top:.3} {width:.3} {height:.3}\">\n{shapes}{lines}</svg>\n"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::complex::ComplexBuilder;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn regular_polygons_have_unit_sides() {
        for n in 3..=9 {
            let x = builders::polygon(n).unwrap();
            let r = realize_face::<f64>(&x, &"f".into()).unwrap();
            assert!(r.lengths.iter().all(|&l| close(l, 1.0)), "{n}: {:?}", r.lengths);
            for i in 0..n {
                let want = std::f64::consts::PI * (n as f64 - 2.0) / n as f64;
                assert!(close(r.interior_angle(i), want));
            }
        }
        let sq = realize_face::<f64>(&builders::torus(), &"f".into()).unwrap();
        let want = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        for (p, w) in sq.points.iter().zip(want) {
            assert!(close(p[0], w[0]) && close(p[1], w[1]));
        }
        let r32 = realize_face::<f32>(&builders::polygon(5).unwrap(), &"f".into()).unwrap();
        assert!(r32.lengths.iter().all(|&l| (l - 1.0).abs() < 1e-4));
    }

    #[test]
    fn irregular_angles_are_respected() {
        let angles = vec![Angle::new(1, 6), Angle::new(1, 2), Angle::new(4, 3), Angle::new(1, 2), Angle::new(1, 2)];
        let x = ComplexBuilder::new()
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .vertex("d")
            .vertex("e")
            .edge("p", "a", "b")
            .edge("q", "b", "c")
            .edge("r", "c", "d")
            .edge("s", "d", "e")
            .edge("t", "e", "a")
            .face("f", "p+ q+ r+ s+ t+", angles.clone())
            .build()
            .unwrap();
        let r = realize_face::<f64>(&x, &"f".into()).unwrap();
        assert!(r.lengths.iter().all(|&l| l > 0.0));
        for (i, a) in angles.iter().enumerate() {
            assert!((r.interior_angle(i) - a.to_radians()).abs() < 1e-7, "corner {i}");
        }
    }

    #[test]
    fn edge_exits() {
        let t = builders::torus();
        let b: EdgeId = "b".into();
        let adj = t.adjacencies(&b);
        let exits = straight_exits(&t, &b, &adj[0].0, &ExactAngle::new(1, 2)).unwrap();
        assert_eq!(exits, vec![(adj[1].0.clone(), ExactAngle::new(1, 2))]);

        let y = ComplexBuilder::new()
            .vertex("p")
            .vertex("q")
            .vertex("r")
            .vertex("s")
            .vertex("u")
            .edge("e", "p", "q")
            .edge("a", "q", "r")
            .edge("b", "r", "p")
            .edge("c", "q", "s")
            .edge("d", "s", "p")
            .edge("g", "q", "u")
            .edge("h", "u", "p")
            .equiangular_face("f1", "e+ a+ b+")
            .equiangular_face("f2", "e+ c+ d+")
            .equiangular_face("f3", "e+ g+ h+")
            .build()
            .unwrap();
        let e: EdgeId = "e".into();
        let adj = y.adjacencies(&e);
        let exits = straight_exits(&y, &e, &adj[0].0, &ExactAngle::new(1, 3)).unwrap();
        assert_eq!(
            exits,
            vec![(adj[1].0.clone(), ExactAngle::new(2, 3)), (adj[2].0.clone(), ExactAngle::new(2, 3))]
        );

        let c = builders::cylinder(3).unwrap();
        let t0: EdgeId = "t0".into();
        let a0 = c.adjacencies(&t0)[0].0.clone();
        assert_eq!(straight_exits(&c, &t0, &a0, &ExactAngle::new(1, 2)), Err(Error::FreeEdge("t0".into())));
    }

    #[test]
    fn vertex_exits() {
        let h = builders::heptadisk();
        let far = straight_exits_at_vertex(&h, &"c".into(), &MetricPoint::node(0)).unwrap();
        assert!(!far.is_empty());
        let t = builders::torus();
        let link: Link<BigRational> = build_link(&t, &"v".into()).unwrap().convert();
        let p = MetricPoint::on_arc(0, ExactAngle::new(1, 5));
        let far = straight_exits_at_vertex(&t, &"v".into(), &p).unwrap();
        assert_eq!(far.len(), 1);
        let Region::Point { point } = &far[0] else { panic!("{far:?}") };
        assert_eq!(link.distance(&p, point).unwrap(), Some(ExactAngle::pi()));
    }

    #[test]
    fn torus_horizontal_trace() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.5, 1.0 / 3.0] };
        let tr = trace_straight(&t, &start, [1.0, 0.0], 64).unwrap();
        assert_eq!(tr.termination.reason, TerminationReason::EdgeRevisit);
        assert_eq!(tr.path.segments.len(), 2);
        let Some(Witness::EdgeCrossing { entry_offset, exit_offset, .. }) = &tr.path.breakpoints[1].witness else {
            panic!("no crossing witness")
        };
        assert_eq!(entry_offset.clone() + exit_offset.clone(), ExactAngle::pi());
        assert!(verify_straight(&t, &tr.path).unwrap().is_straight());
    }

    #[test]
    fn square_disk_stops_at_the_boundary() {
        let sq = builders::polygon(4).unwrap();
        let start = FacePoint { face: "f".into(), point: [0.5, 0.5] };
        let tr = trace_straight(&sq, &start, [1.0, 0.0], 16).unwrap();
        assert_eq!(tr.termination.reason, TerminationReason::FreeEdgeHit);
        assert_eq!(tr.path.segments.len(), 1);
        assert!(verify_straight(&sq, &tr.path).unwrap().is_straight());
    }

    #[test]
    fn torus_rational_slope() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.5, 0.5] };
        let tr = trace_straight(&t, &start, [1.0, 0.5], 16).unwrap();
        assert_eq!(tr.termination.reason, TerminationReason::EdgeRevisit);
        assert!(verify_straight(&t, &tr.path).unwrap().is_straight());
    }

    #[test]
    fn torus_diagonal_through_the_vertex() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.25, 0.25] };
        let tr = trace_straight(&t, &start, [1.0, 1.0], 16).unwrap();
        assert!(matches!(
            tr.termination.reason,
            TerminationReason::SelfIntersect | TerminationReason::EdgeRevisit
        ));
        assert!(tr.path.breakpoints.iter().any(|b| matches!(b.witness, Some(Witness::Vertex { .. }))));
        assert!(verify_straight(&t, &tr.path).unwrap().is_straight());
    }

    #[test]
    fn manufactured_bend_is_rejected() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.5, 1.0 / 3.0] };
        let mut path = trace_straight(&t, &start, [1.0, 0.0], 64).unwrap().path;
        let Some(Witness::EdgeCrossing { exit_offset, .. }) = &mut path.breakpoints[1].witness else {
            panic!()
        };
        *exit_offset = ExactAngle::new(1, 4);
        match verify_straight(&t, &path).unwrap() {
            Verdict::Violation { breakpoint, distance, .. } => {
                assert_eq!(breakpoint, 1);
                assert_eq!(distance, Some(ExactAngle::new(3, 4)));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn single_segment_path_is_straight() {
        let t = builders::torus();
        let path = SegmentalPath {
            breakpoints: vec![
                Breakpoint { place: Place::Interior { face: "f".into(), point: [0.2, 0.2] }, witness: None },
                Breakpoint { place: Place::Interior { face: "f".into(), point: [0.4, 0.3] }, witness: None },
            ],
            segments: vec![Segment { carrier: Carrier::Face("f".into()), start: [0.2, 0.2], end: [0.4, 0.3] }],
        };
        assert!(verify_straight(&t, &path).unwrap().is_straight());
        let broken = SegmentalPath { breakpoints: path.breakpoints.clone(), segments: vec![] };
        assert!(matches!(verify_straight(&t, &broken), Err(Error::MalformedPath(_))));
    }

    #[test]
    fn bad_starts() {
        let t = builders::torus();
        let on_edge = FacePoint { face: "f".into(), point: [0.0, 0.5] };
        assert!(matches!(trace_straight(&t, &on_edge, [1.0, 0.0], 4), Err(Error::InvalidStart(_))));
        let ok = FacePoint { face: "f".into(), point: [0.5, 0.5] };
        assert!(matches!(trace_straight(&t, &ok, [0.0, 0.0], 4), Err(Error::InvalidStart(_))));
        let nowhere = FacePoint { face: "g".into(), point: [0.5, 0.5] };
        assert!(matches!(trace_straight(&t, &nowhere, [1.0, 0.0], 4), Err(Error::InvalidStart(_))));
    }

    #[test]
    fn max_steps_stops_early() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.5, 0.5] };
        let tr = trace_straight(&t, &start, [1.0, 0.5], 1).unwrap();
        assert_eq!(tr.termination.reason, TerminationReason::MaxSteps);
        assert_eq!(tr.path.segments.len(), 1);
    }

    #[test]
    fn svg_has_a_polygon_per_face_segment() {
        let t = builders::torus();
        let start = FacePoint { face: "f".into(), point: [0.5, 0.5] };
        let tr = trace_straight(&t, &start, [1.0, 0.5], 16).unwrap();
        let svg = path_svg(&t, &tr.path).unwrap();
        assert_eq!(svg.matches("<polygon").count(), tr.path.segments.len());
        assert!(svg.starts_with("<svg"));
    }
}
