//! Deterministic constructors for the canonical complexes.
//!
//! | spec | cells |
//! |------|-------|
//! | `polygon:n` | one `n`-gon disk with angles `(n-2)π/n` |
//! | `grid:m,k` | `m × k` unit squares forming a disk |
//! | `torus` | one vertex, loops `a`, `b`, face `a+ b+ a- b-` |
//! | `cylinder:k` | a ring of `k ≥ 3` squares |
//! | `heptadisk` | seven `π/3` triangles around a centre `c` |
//! | `tetrahedron` | boundary of the 3-simplex, angles `π/3` |
//! | `presentation:<gens>\|<relators>` | presentation complex, equal angles |
//! | `fuzz:<family>` | a seeded random complex, see [`crate::fuzz`] |

use crate::complex::{equal_angles, Complex2, ComplexBuilder, DirectedEdge, Sign};
use crate::error::Error;
use crate::fuzz::{self, Family};
use crate::homotopy::{Letter, Presentation};
use crate::Angle;

/// A parsed builder spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuilderSpec {
    Polygon(usize),
    Grid(usize, usize),
    Torus,
    Cylinder(usize),
    Heptadisk,
    Tetrahedron,
    Presentation(Presentation),
    Fuzz(Family),
}

/// Seed used for `fuzz:` specs when none is given.
pub const DEFAULT_SEED: u64 = 0;

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::BadBuilder {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

impl std::str::FromStr for BuilderSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self, Error> {
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let int = |s: &str| -> Result<usize, Error> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad(spec, format!("`{s}` is not a non-negative integer")))
        };
        match (name, args) {
            ("polygon", Some(n)) => Ok(BuilderSpec::Polygon(int(n)?)),
            ("grid", Some(mk)) => {
                let (m, k) = mk
                    .split_once(',')
                    .ok_or_else(|| bad(spec, "expected `grid:m,k`"))?;
                Ok(BuilderSpec::Grid(int(m)?, int(k)?))
            }
            ("torus", None) => Ok(BuilderSpec::Torus),
            ("cylinder", Some(k)) => Ok(BuilderSpec::Cylinder(int(k)?)),
            ("heptadisk", None) => Ok(BuilderSpec::Heptadisk),
            ("tetrahedron", None) => Ok(BuilderSpec::Tetrahedron),
            ("presentation", Some(rest)) => Ok(BuilderSpec::Presentation(
                Presentation::parse(rest).map_err(|e| bad(spec, e.to_string()))?,
            )),
            ("fuzz", Some(f)) => Ok(BuilderSpec::Fuzz(f.parse().map_err(|_| bad(spec, "unknown fuzz family"))?)),
            _ => Err(bad(spec, "unknown builder")),
        }
    }
}

/// Builds the complex named by `spec`, e.g. `"grid:2,3"`.
pub fn build(spec: &str) -> Result<Complex2, Error> {
    build_seeded(spec, DEFAULT_SEED)
}

/// Like [`build`]; `seed` only matters for `fuzz:` specs.
pub fn build_seeded(spec: &str, seed: u64) -> Result<Complex2, Error> {
    let parsed: BuilderSpec = spec.parse()?;
    let x = match parsed {
        BuilderSpec::Polygon(n) => polygon(n),
        BuilderSpec::Grid(m, k) => grid(m, k),
        BuilderSpec::Torus => Ok(torus()),
        BuilderSpec::Cylinder(k) => cylinder(k),
        BuilderSpec::Heptadisk => Ok(heptadisk()),
        BuilderSpec::Tetrahedron => Ok(tetrahedron()),
        BuilderSpec::Presentation(p) => presentation_complex(&p),
        BuilderSpec::Fuzz(f) => return Ok(fuzz::generate(f, seed)),
    }
    .map_err(|e| match e {
        Error::BadBuilder { reason, .. } => bad(spec, reason),
        other => other,
    })?;
    Ok(x.with_meta(crate::complex::Metadata {
        source: Some(spec.to_string()),
        ..x.meta().clone()
    }))
}

/// A single `n`-gon disk, vertices `v0..`, edges `e_i: v_i → v_{i+1}`.
pub fn polygon(n: usize) -> Result<Complex2, Error> {
    if n < 3 {
        return Err(bad("polygon", "need n >= 3"));
    }
    let mut b = ComplexBuilder::new().disk_diagram(true);
    for i in 0..n {
        b = b.vertex(format!("v{i}"));
    }
    for i in 0..n {
        b = b.edge(format!("e{i}"), format!("v{i}"), format!("v{}", (i + 1) % n));
    }
    let word: Vec<String> = (0..n).map(|i| format!("e{i}+")).collect();
    b.face("f", &word.join(" "), equal_angles(n)).build()
}

/// An `m × k` grid of unit squares. Vertex `v{i}_{j}` sits at column `i`,
/// row `j`; `h{i}_{j}` runs right from it and `u{i}_{j}` runs up.
pub fn grid(m: usize, k: usize) -> Result<Complex2, Error> {
    if m == 0 || k == 0 {
        return Err(bad("grid", "need m, k >= 1"));
    }
    let mut b = ComplexBuilder::new().disk_diagram(true);
    for j in 0..=k {
        for i in 0..=m {
            b = b.vertex(format!("v{i}_{j}"));
        }
    }
    for j in 0..=k {
        for i in 0..m {
            b = b.edge(format!("h{i}_{j}"), format!("v{i}_{j}"), format!("v{}_{j}", i + 1));
        }
    }
    for j in 0..k {
        for i in 0..=m {
            b = b.edge(format!("u{i}_{j}"), format!("v{i}_{j}"), format!("v{i}_{}", j + 1));
        }
    }
    for j in 0..k {
        for i in 0..m {
            b = b.face(
                format!("f{i}_{j}"),
                &format!("h{i}_{j}+ u{}_{j}+ h{i}_{}- u{i}_{j}-", i + 1, j + 1),
                vec![Angle::new(1, 2); 4],
            );
        }
    }
    b.build()
}

/// The flat torus: one vertex, loops `a`, `b`, one square `a+ b+ a- b-`.
pub fn torus() -> Complex2 {
    ComplexBuilder::new()
        .vertex("v")
        .edge("a", "v", "v")
        .edge("b", "v", "v")
        .face("f", "a+ b+ a- b-", vec![Angle::new(1, 2); 4])
        .build()
        .expect("torus is well formed")
}

/// A ring of `k` squares: tops `t_i: u_i → u_{i+1}`, bottoms
/// `b_i: w_i → w_{i+1}`, sides `s_i: u_i → w_i`, faces
/// `f_i = t_i+ s_{i+1}+ b_i- s_i-`.
pub fn cylinder(k: usize) -> Result<Complex2, Error> {
    cylinder_with(k, |_| vec![Angle::new(1, 2); 4])
}

/// [`cylinder`] with caller-chosen corner angles per face.
pub fn cylinder_with(k: usize, mut angles: impl FnMut(usize) -> Vec<Angle>) -> Result<Complex2, Error> {
    if k < 3 {
        return Err(bad("cylinder", "need k >= 3"));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..k {
        b = b.vertex(format!("u{i}")).vertex(format!("w{i}"));
    }
    for i in 0..k {
        let n = (i + 1) % k;
        b = b
            .edge(format!("t{i}"), format!("u{i}"), format!("u{n}"))
            .edge(format!("b{i}"), format!("w{i}"), format!("w{n}"))
            .edge(format!("s{i}"), format!("u{i}"), format!("w{i}"));
    }
    for i in 0..k {
        let n = (i + 1) % k;
        b = b.face(format!("f{i}"), &format!("t{i}+ s{n}+ b{i}- s{i}-"), angles(i));
    }
    b.build()
}

/// Seven equilateral triangles around a centre `c`: spokes `r_i: c → o_i`,
/// rim `e_i: o_i → o_{i+1}`, faces `f_i = r_i+ e_i+ r_{i+1}-`.
pub fn heptadisk() -> Complex2 {
    wheel(7, |_| vec![Angle::new(1, 3); 3]).expect("heptadisk is well formed")
}

/// A wheel of `k` triangles around `c`; `angles(i)` gives the corners of
/// `f_i` in the order (at `o_i`, at `o_{i+1}`, at `c`).
pub fn wheel(k: usize, mut angles: impl FnMut(usize) -> Vec<Angle>) -> Result<Complex2, Error> {
    if k < 3 {
        return Err(bad("wheel", "need k >= 3"));
    }
    let mut b = ComplexBuilder::new().disk_diagram(true).vertex("c");
    for i in 0..k {
        b = b.vertex(format!("o{i}"));
    }
    for i in 0..k {
        b = b.edge(format!("r{i}"), "c", format!("o{i}"));
    }
    for i in 0..k {
        b = b.edge(format!("e{i}"), format!("o{i}"), format!("o{}", (i + 1) % k));
    }
    for i in 0..k {
        b = b.face(
            format!("f{i}"),
            &format!("r{i}+ e{i}+ r{}-", (i + 1) % k),
            angles(i),
        );
    }
    b.build()
}

/// Boundary of the 3-simplex on vertices `0..3`, edges `e{i}{j}` for `i < j`.
pub fn tetrahedron() -> Complex2 {
    let mut b = ComplexBuilder::new();
    for i in 0..4 {
        b = b.vertex(format!("{i}"));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            b = b.edge(format!("e{i}{j}"), format!("{i}"), format!("{j}"));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                b = b.face(
                    format!("f{i}{j}{k}"),
                    &format!("e{i}{j}+ e{j}{k}+ e{i}{k}-"),
                    vec![Angle::new(1, 3); 3],
                );
            }
        }
    }
    b.build().expect("tetrahedron is well formed")
}

/// Presentation complex: vertex `v`, a loop per generator, a face `r{i}` per
/// relator with equal angles. Relators shorter than three letters cannot
/// carry positive angles and are rejected.
pub fn presentation_complex(p: &Presentation) -> Result<Complex2, Error> {
    let mut b = ComplexBuilder::new().vertex("v");
    for g in &p.generators {
        b = b.edge(g.as_str(), "v", "v");
    }
    for (i, r) in p.relators.iter().enumerate() {
        if r.len() < 3 {
            return Err(bad("presentation", format!("relator {i} has fewer than 3 letters")));
        }
        let word: Vec<DirectedEdge> = r
            .iter()
            .map(|Letter { generator, inverse }| {
                DirectedEdge::new(p.generators[*generator].as_str(), if *inverse { Sign::Minus } else { Sign::Plus })
            })
            .collect();
        let n = word.len();
        b = b.face_word(format!("r{i}"), word, equal_angles(n));
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate;

    #[test]
    fn cell_counts_match_closed_forms() {
        for n in 3..=12 {
            let x = build(&format!("polygon:{n}")).unwrap();
            assert_eq!((x.vertices().len(), x.edges().len(), x.faces().len()), (n, n, 1));
            assert_eq!(x.euler_characteristic(), 1);
            assert!(validate(&x).ok);
        }
        for m in 1..=6 {
            for k in 1..=6 {
                let x = build(&format!("grid:{m},{k}")).unwrap();
                let v = (m + 1) * (k + 1);
                let e = m * (k + 1) + k * (m + 1);
                assert_eq!((x.vertices().len(), x.edges().len(), x.faces().len()), (v, e, m * k));
                assert_eq!(x.euler_characteristic(), 1);
                assert!(validate(&x).ok);
            }
        }
        for k in 3..=12 {
            let x = build(&format!("cylinder:{k}")).unwrap();
            assert_eq!((x.vertices().len(), x.edges().len(), x.faces().len()), (2 * k, 3 * k, k));
            assert_eq!(x.euler_characteristic(), 0);
            assert!(validate(&x).ok);
        }
    }

    #[test]
    fn fixed_builders() {
        let t = build("torus").unwrap();
        assert_eq!((t.vertices().len(), t.edges().len(), t.faces().len()), (1, 2, 1));
        let h = build("heptadisk").unwrap();
        assert_eq!((h.vertices().len(), h.edges().len(), h.faces().len()), (8, 14, 7));
        assert!(h.meta().is_disk_diagram);
        let s = build("tetrahedron").unwrap();
        assert_eq!((s.vertices().len(), s.edges().len(), s.faces().len()), (4, 6, 4));
        assert_eq!(s.euler_characteristic(), 2);
        for x in [t, h, s] {
            assert!(validate(&x).ok);
        }
    }

    #[test]
    fn presentation_builder() {
        let x = build("presentation:a,b|a.b.a^-1.b^-1").unwrap();
        assert_eq!(x.faces()[0].boundary.iter().map(|d| d.to_string()).collect::<Vec<_>>(), ["a+", "b+", "a-", "b-"]);
        assert!(validate(&x).ok);
        let bs = build("presentation:a,b|b.a.b^-1.a^-2").unwrap();
        assert_eq!(bs.faces()[0].len(), 5);
        assert_eq!(bs.faces()[0].angles[0], Angle::new(3, 5));
        assert!(build("presentation:a|a^2").is_err());
    }

    #[test]
    fn bad_specs() {
        for spec in ["polygon:2", "grid:0,3", "grid:3", "cylinder:2", "sphere", "polygon:x"] {
            assert!(matches!(build(spec), Err(Error::BadBuilder { .. })), "{spec}");
        }
    }
}
