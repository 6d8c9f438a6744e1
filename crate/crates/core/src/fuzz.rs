//! Seeded random complexes and link graphs for property tests, plus a
//! brute-force girth oracle.
//!
//! Every generator is a pure function of its seed. Angles use small
//! denominators so that all arithmetic stays inside `Rational64`.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::builders::{cylinder_with, wheel};
use crate::complex::{Complex2, ComplexBuilder, Metadata};
use crate::error::Error;
use crate::homotopy::h1;
use crate::link::{ArcSource, Link, LinkArc, LinkNode, MetricPoint};
use crate::Angle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Simply connected polyomino of squares, angles perturbed by row and
    /// column offsets.
    Polyomino,
    /// Triangles around a centre whose angles sum to at least 2π.
    Wheel,
    /// Polygon triangulated from one vertex.
    Fan,
    /// Ring of squares with arbitrary angles.
    Cylinder,
    /// Two rows of squares around a ring; middle corners opened by δ.
    Annulus,
    /// A bare cycle graph with a polygon hanging off it.
    Pendant,
    /// Square grid on the torus.
    TorusGrid,
    /// One-vertex closed orientable surface of genus 1 to 3.
    Surface,
}

impl Family {
    pub const DISK: [Family; 3] = [Family::Polyomino, Family::Wheel, Family::Fan];
    pub const RING: [Family; 3] = [Family::Cylinder, Family::Annulus, Family::Pendant];
    pub const CLOSED: [Family; 2] = [Family::TorusGrid, Family::Surface];

    pub fn name(self) -> &'static str {
        match self {
            Family::Polyomino => "polyomino",
            Family::Wheel => "wheel",
            Family::Fan => "fan",
            Family::Cylinder => "cylinder",
            Family::Annulus => "annulus",
            Family::Pendant => "pendant",
            Family::TorusGrid => "torus-grid",
            Family::Surface => "surface",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        [Family::DISK.as_slice(), Family::RING.as_slice(), Family::CLOSED.as_slice()]
            .concat()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::BadBuilder {
                spec: format!("fuzz:{s}"),
                reason: "unknown fuzz family".into(),
            })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `parts` positive multiples of `1/denom` summing to `total`.
pub fn composition(rng: &mut impl Rng, parts: usize, total: i64, denom: i64) -> Vec<Angle> {
    let units = total * denom;
    assert!(units >= parts as i64, "not enough room for positive parts");
    let mut cuts: Vec<i64> = rand::seq::index::sample(rng, (units - 1) as usize, parts - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(units);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let a = Angle::new(c - prev, denom);
            prev = c;
            a
        })
        .collect()
}

fn polyomino(rng: &mut ChaCha8Rng) -> Complex2 {
    loop {
        let (w, h) = (rng.gen_range(2..=6usize), rng.gen_range(2..=6usize));
        let target = rng.gen_range(1..=w * h * 2 / 3);
        let mut cells = vec![(rng.gen_range(0..w), rng.gen_range(0..h))];
        while cells.len() < target {
            let mut frontier: Vec<(usize, usize)> = Vec::new();
            for &(i, j) in &cells {
                let near = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for c in near {
                    if c.0 < w && c.1 < h && !cells.contains(&c) && !frontier.contains(&c) {
                        frontier.push(c);
                    }
                }
            }
            match frontier.choose(rng) {
                Some(&c) => cells.push(c),
                None => break,
            }
        }
        cells.sort_unstable();
        let rows: Vec<Rational64> = (0..w).map(|_| Rational64::new(rng.gen_range(-5..=5), 24)).collect();
        let cols: Vec<Rational64> = (0..h).map(|_| Rational64::new(rng.gen_range(-5..=5), 24)).collect();
        let mut b = ComplexBuilder::new().disk_diagram(true);
        let mut vertices = std::collections::BTreeSet::new();
        let mut edges = std::collections::BTreeMap::new();
        for &(i, j) in &cells {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                vertices.insert(format!("v{}_{}", i + di, j + dj));
            }
            for (name, t, hd) in [
                (format!("h{i}_{j}"), (i, j), (i + 1, j)),
                (format!("h{i}_{}", j + 1), (i, j + 1), (i + 1, j + 1)),
                (format!("u{i}_{j}"), (i, j), (i, j + 1)),
                (format!("u{}_{j}", i + 1), (i + 1, j), (i + 1, j + 1)),
            ] {
                edges.insert(name, (format!("v{}_{}", t.0, t.1), format!("v{}_{}", hd.0, hd.1)));
            }
        }
        for v in vertices {
            b = b.vertex(v);
        }
        for (e, (t, hd)) in edges {
            b = b.edge(e, t, hd);
        }
        for &(i, j) in &cells {
            let a = Angle::from_multiple(rows[i] + cols[j]);
            let lo = Angle::new(1, 2) - a.clone();
            let hi = Angle::new(1, 2) + a;
            b = b.face(
                format!("f{i}_{j}"),
                &format!("h{i}_{j}+ u{}_{j}+ h{i}_{}- u{i}_{j}-", i + 1, j + 1),
                vec![lo.clone(), hi.clone(), lo, hi],
            );
        }
        let x = b.build().expect("polyomino is well formed");
        if h1(&x).is_trivial() {
            return x;
        }
    }
}

fn random_wheel(rng: &mut ChaCha8Rng) -> Complex2 {
    let k = rng.gen_range(3..=9i64);
    let denom = 12 * k;
    wheel(k as usize, |_| {
        // centre angle in [2/k, 1)
        let lo = 24;
        let centre = rng.gen_range(lo..denom - 1);
        let rest = denom - centre;
        let a = rng.gen_range(1..rest);
        vec![Angle::new(a, denom), Angle::new(rest - a, denom), Angle::new(centre, denom)]
    })
    .expect("wheel is well formed")
}

fn fan(rng: &mut ChaCha8Rng) -> Complex2 {
    let n = rng.gen_range(4..=10usize);
    let mut b = ComplexBuilder::new().disk_diagram(true);
    for i in 0..n {
        b = b.vertex(format!("v{i}"));
    }
    for i in 0..n {
        b = b.edge(format!("e{i}"), format!("v{i}"), format!("v{}", (i + 1) % n));
    }
    for i in 2..n - 1 {
        b = b.edge(format!("d{i}"), "v0", format!("v{i}"));
    }
    for i in 1..n - 1 {
        let first = if i == 1 { "e0+".to_string() } else { format!("d{i}+") };
        let last = if i + 1 == n - 1 {
            format!("e{}+", n - 1)
        } else {
            format!("d{}-", i + 1)
        };
        let word = format!("{first} e{i}+ {last}");
        b = b.face(format!("t{i}"), &word, composition(rng, 3, 1, 12));
    }
    b.build().expect("fan is well formed")
}

fn random_cylinder(rng: &mut ChaCha8Rng) -> Complex2 {
    let k = rng.gen_range(3..=10);
    cylinder_with(k, |_| composition(rng, 4, 2, 12)).expect("cylinder is well formed")
}

fn annulus(rng: &mut ChaCha8Rng) -> Complex2 {
    let k = rng.gen_range(3..=8usize);
    let d = Angle::new(rng.gen_range(1..=11), 24);
    let up = Angle::new(1, 2) + d.clone();
    let down = Angle::new(1, 2) - d;
    let mut b = ComplexBuilder::new();
    for i in 0..k {
        b = b.vertex(format!("u{i}")).vertex(format!("m{i}")).vertex(format!("w{i}"));
    }
    for i in 0..k {
        let n = (i + 1) % k;
        b = b
            .edge(format!("t{i}"), format!("u{i}"), format!("u{n}"))
            .edge(format!("p{i}"), format!("m{i}"), format!("m{n}"))
            .edge(format!("b{i}"), format!("w{i}"), format!("w{n}"))
            .edge(format!("s{i}"), format!("u{i}"), format!("m{i}"))
            .edge(format!("q{i}"), format!("m{i}"), format!("w{i}"));
    }
    for i in 0..k {
        let n = (i + 1) % k;
        b = b
            .face(
                format!("g{i}"),
                &format!("t{i}+ s{n}+ p{i}- s{i}-"),
                vec![down.clone(), up.clone(), up.clone(), down.clone()],
            )
            .face(
                format!("h{i}"),
                &format!("p{i}+ q{n}+ b{i}- q{i}-"),
                vec![up.clone(), down.clone(), down.clone(), up.clone()],
            );
    }
    b.build().expect("annulus is well formed")
}

fn pendant(rng: &mut ChaCha8Rng) -> Complex2 {
    let k = rng.gen_range(1..=6usize);
    let n = rng.gen_range(3..=7usize);
    let stalk = rng.gen_bool(0.5);
    let mut b = ComplexBuilder::new();
    for i in 0..k {
        b = b.vertex(format!("x{i}"));
    }
    for i in 0..k {
        b = b.edge(format!("c{i}"), format!("x{i}"), format!("x{}", (i + 1) % k));
    }
    let anchor = if stalk {
        b = b.vertex("z0").edge("stalk", "x0", "z0");
        "z0".to_string()
    } else {
        "x0".to_string()
    };
    let ring: Vec<String> = std::iter::once(anchor)
        .chain((1..n).map(|i| format!("y{i}")))
        .collect();
    for v in &ring[1..] {
        b = b.vertex(v.clone());
    }
    for i in 0..n {
        b = b.edge(format!("g{i}"), ring[i].clone(), ring[(i + 1) % n].clone());
    }
    let word: Vec<String> = (0..n).map(|i| format!("g{i}+")).collect();
    b.face("disk", &word.join(" "), composition(rng, n, n as i64 - 2, 12))
        .build()
        .expect("pendant is well formed")
}

fn torus_grid(rng: &mut ChaCha8Rng) -> Complex2 {
    let (m, k) = (rng.gen_range(2..=4usize), rng.gen_range(2..=4usize));
    let rows: Vec<Rational64> = (0..m).map(|_| Rational64::new(rng.gen_range(-5..=5), 24)).collect();
    let cols: Vec<Rational64> = (0..k).map(|_| Rational64::new(rng.gen_range(-5..=5), 24)).collect();
    let mut b = ComplexBuilder::new();
    for j in 0..k {
        for i in 0..m {
            b = b.vertex(format!("v{i}_{j}"));
        }
    }
    for j in 0..k {
        for i in 0..m {
            b = b
                .edge(format!("h{i}_{j}"), format!("v{i}_{j}"), format!("v{}_{j}", (i + 1) % m))
                .edge(format!("u{i}_{j}"), format!("v{i}_{j}"), format!("v{i}_{}", (j + 1) % k));
        }
    }
    for j in 0..k {
        for i in 0..m {
            let a = Angle::from_multiple(rows[i] + cols[j]);
            let lo = Angle::new(1, 2) - a.clone();
            let hi = Angle::new(1, 2) + a;
            b = b.face(
                format!("f{i}_{j}"),
                &format!("h{i}_{j}+ u{}_{j}+ h{i}_{}- u{i}_{j}-", (i + 1) % m, (j + 1) % k),
                vec![lo.clone(), hi.clone(), lo, hi],
            );
        }
    }
    b.build().expect("torus grid is well formed")
}

fn surface(rng: &mut ChaCha8Rng) -> Complex2 {
    let g = rng.gen_range(1..=3usize);
    let mut b = ComplexBuilder::new().vertex("v");
    let mut word = Vec::new();
    for i in 1..=g {
        b = b.edge(format!("a{i}"), "v", "v").edge(format!("b{i}"), "v", "v");
        word.extend([format!("a{i}+"), format!("b{i}+"), format!("a{i}-"), format!("b{i}-")]);
    }
    let n = 4 * g;
    b.face("f", &word.join(" "), composition(rng, n, n as i64 - 2, 12))
        .build()
        .expect("surface is well formed")
}

/// A complex of `family` determined by `seed`.
pub fn generate(family: Family, seed: u64) -> Complex2 {
    let mut r = rng(seed ^ (family as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let x = match family {
        Family::Polyomino => polyomino(&mut r),
        Family::Wheel => random_wheel(&mut r),
        Family::Fan => fan(&mut r),
        Family::Cylinder => random_cylinder(&mut r),
        Family::Annulus => annulus(&mut r),
        Family::Pendant => pendant(&mut r),
        Family::TorusGrid => torus_grid(&mut r),
        Family::Surface => surface(&mut r),
    };
    x.with_meta(Metadata {
        source: Some(format!("fuzz:{family}@{seed}")),
        ..x.meta().clone()
    })
}

/// `count` complexes cycling through `families`, seeds `seed, seed + 1, …`.
pub fn corpus(families: &[Family], seed: u64, count: usize) -> Vec<Complex2> {
    (0..count)
        .map(|i| generate(families[i % families.len()], seed + i as u64))
        .collect()
}

/// Random metric multigraph with up to `max_nodes` nodes, loops and
/// parallel arcs allowed, and rational lengths in `(0, 4]`.
pub fn random_link(rng: &mut impl Rng, max_nodes: usize) -> Link<Rational64> {
    let n = rng.gen_range(1..=max_nodes);
    let m = rng.gen_range(0..=2 * n + 2);
    let arcs: Vec<LinkArc<Rational64>> = (0..m)
        .map(|index| LinkArc {
            from: rng.gen_range(0..n),
            to: rng.gen_range(0..n),
            length: Angle::new(rng.gen_range(1..=24), rng.gen_range(1..=6)),
            source: ArcSource::Synthetic { index },
        })
        .collect();
    Link {
        nodes: (0..n).map(|index| LinkNode::Abstract { index }).collect(),
        arcs,
    }
}

/// A random node or interior arc point of `link`.
pub fn random_point(rng: &mut impl Rng, link: &Link<Rational64>) -> MetricPoint<Rational64> {
    if link.arcs.is_empty() || rng.gen_bool(0.25) {
        return MetricPoint::node(rng.gen_range(0..link.nodes.len()));
    }
    let arc = rng.gen_range(0..link.arcs.len());
    let len = link.arcs[arc].length.multiple();
    let steps = 24i64;
    let k = rng.gen_range(1..steps);
    MetricPoint::on_arc(arc, Angle::from_multiple(len * Rational64::new(k, steps)))
}

/// Seeded `(face, point, direction)` with the point strictly inside the
/// face's realization.
pub fn random_start(
    rng: &mut impl Rng,
    x: &Complex2,
) -> Result<(crate::geometry::FacePoint<f64>, [f64; 2]), Error> {
    let faces = x.sorted_faces();
    let face = faces
        .choose(rng)
        .ok_or_else(|| Error::InvalidStart("complex has no faces".into()))?;
    let poly = crate::geometry::realize_face::<f64>(x, &face.id)?;
    let point = loop {
        // convex combination of the vertices, pulled toward the centroid
        let weights: Vec<f64> = (0..poly.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut p = [0.0, 0.0];
        for (w, q) in weights.iter().zip(&poly.points) {
            p[0] += w / total * q[0];
            p[1] += w / total * q[1];
        }
        if poly.contains(p) && poly.boundary_distance(p) > 1e-3 {
            break p;
        }
    };
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Ok((
        crate::geometry::FacePoint {
            face: face.id.clone(),
            point,
        },
        [theta.cos(), theta.sin()],
    ))
}

/// Length of a shortest simple cycle by exhaustive search: loops, then
/// every closed walk from its smallest node through larger, unvisited nodes.
/// Exponential; meant as an oracle on small graphs.
pub fn brute_force_girth(link: &Link<Rational64>) -> Option<Angle> {
    fn walk(
        link: &Link<Rational64>,
        start: usize,
        at: usize,
        used: &mut Vec<usize>,
        seen: &mut Vec<bool>,
        len: Angle,
        best: &mut Option<Angle>,
    ) {
        for (i, a) in link.arcs.iter().enumerate() {
            if a.from == a.to || used.contains(&i) {
                continue;
            }
            let next = match (a.from == at, a.to == at) {
                (true, _) => a.to,
                (_, true) => a.from,
                _ => continue,
            };
            let total = len.clone() + a.length.clone();
            if next == start {
                if best.as_ref().is_none_or(|b| &total < b) {
                    *best = Some(total);
                }
            } else if next > start && !seen[next] {
                used.push(i);
                seen[next] = true;
                walk(link, start, next, used, seen, total, best);
                seen[next] = false;
                used.pop();
            }
        }
    }
    let mut best: Option<Angle> = link
        .arcs
        .iter()
        .filter(|a| a.from == a.to)
        .map(|a| a.length.clone())
        .min();
    for s in 0..link.nodes.len() {
        let mut seen = vec![false; link.nodes.len()];
        seen[s] = true;
        walk(link, s, s, &mut Vec::new(), &mut seen, Angle::zero(), &mut best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::free_faces;
    use crate::validate;
    use crate::weight_test::{classify, Classification};

    #[test]
    fn families_are_valid_and_in_class() {
        for seed in 0..30 {
            for fam in Family::DISK {
                let x = generate(fam, seed);
                assert!(validate(&x).ok, "{fam} {seed}: {:?}", validate(&x));
                assert_ne!(classify(&x).classification, Classification::Fails, "{fam} {seed}");
                assert!(h1(&x).is_trivial());
            }
            for fam in Family::RING {
                let x = generate(fam, seed);
                assert!(validate(&x).ok, "{fam} {seed}");
                assert_eq!(classify(&x).classification, Classification::Negative, "{fam} {seed}");
                assert!(h1(&x).is_infinite_cyclic());
            }
            for fam in Family::CLOSED {
                let x = generate(fam, seed);
                assert!(validate(&x).ok, "{fam} {seed}");
                assert_ne!(classify(&x).classification, Classification::Fails, "{fam} {seed}");
                assert!(free_faces(&x).is_empty());
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for fam in [Family::Polyomino, Family::Annulus, Family::Surface] {
            assert_eq!(generate(fam, 7), generate(fam, 7));
        }
        assert_ne!(generate(Family::Fan, 1), generate(Family::Fan, 2));
    }

    #[test]
    fn compositions_sum_and_stay_positive() {
        let mut r = rng(3);
        for parts in 3..9 {
            let c = composition(&mut r, parts, parts as i64 - 2, 12);
            assert_eq!(c.len(), parts);
            assert!(c.iter().all(Angle::is_positive));
            assert_eq!(c.into_iter().sum::<Angle>(), Angle::polygon_sum(parts));
        }
    }
}
