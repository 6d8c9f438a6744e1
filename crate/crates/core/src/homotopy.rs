//! First homology by Smith normal form, spanning-tree presentations of the
//! fundamental group, and bounded Tietze simplification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::complex::{Complex2, EdgeId, Sign, VertexId};
use crate::error::Error;

/// Invariant factors of an integer matrix: the nonzero diagonal entries of
/// its Smith normal form, each dividing the next.
pub fn invariant_factors<T>(matrix: &[Vec<T>]) -> Vec<T>
where
    T: Integer + Signed + Clone,
{
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                for j in t..cols {
                    let d = q.clone() * a[t][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for i in t..rows {
                    let d = q.clone() * a[i][t].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into row t and retry
        let offending = (t + 1..rows)
            .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
        if let Some(i) = offending {
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] = a[t][j].clone() + v;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub betti: usize,
    /// Torsion coefficients greater than one, each dividing the next.
    #[serde(serialize_with = "integers")]
    pub torsion: Vec<BigInt>,
}

/// Plain numbers when they fit, decimal strings otherwise.
fn integers<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(untagged)]
    enum Int {
        Small(u64),
        Big(String),
    }
    s.collect_seq(v.iter().map(|d| d.to_u64().map_or_else(|| Int::Big(d.to_string()), Int::Small)))
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// True for ℤ.
    pub fn is_infinite_cyclic(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }

    fn from_relation_matrix(generators: usize, matrix: &[Vec<BigInt>]) -> Self {
        let factors = invariant_factors(matrix);
        AbelianInvariants {
            betti: generators - factors.len(),
            torsion: factors.into_iter().filter(|d| d > &BigInt::from(1)).collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `∂₁` with one column per edge (+1 at the head, −1 at the tail).
pub fn boundary_1(x: &Complex2) -> Vec<Vec<BigInt>> {
    let vs = x.sorted_vertices();
    let es = x.sorted_edges();
    let row: BTreeMap<&VertexId, usize> = vs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut m = vec![vec![BigInt::zero(); es.len()]; vs.len()];
    for (j, e) in es.iter().enumerate() {
        m[row[&e.head]][j] += 1;
        m[row[&e.tail]][j] -= 1;
    }
    m
}

/// `∂₂` with one row per edge and one column per face; entries are signed
/// traversal counts.
pub fn boundary_2(x: &Complex2) -> Vec<Vec<BigInt>> {
    let es = x.sorted_edges();
    let fs = x.sorted_faces();
    let row: BTreeMap<&EdgeId, usize> = es.iter().enumerate().map(|(i, e)| (&e.id, i)).collect();
    let mut m = vec![vec![BigInt::zero(); fs.len()]; es.len()];
    for (j, f) in fs.iter().enumerate() {
        for d in &f.boundary {
            m[row[&d.edge]][j] += d.sign.as_int();
        }
    }
    m
}

/// `H₁(X; ℤ)`.
pub fn h1(x: &Complex2) -> AbelianInvariants {
    let r1 = invariant_factors(&boundary_1(x)).len();
    let f2 = invariant_factors(&boundary_2(x));
    AbelianInvariants {
        betti: x.edges().len() - r1 - f2.len(),
        torsion: f2.into_iter().filter(|d| d > &BigInt::from(1)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

pub type Word = Vec<Letter>;

/// Cancels adjacent inverse pairs.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancelling the ends against each other.
pub fn cyclic_reduce(word: &[Letter]) -> Word {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inv() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

fn invert(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inv()).collect()
}

/// A finite group presentation. Relators are kept freely reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators
            .iter()
            .map(|r| free_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        Presentation {
            generators,
            relators,
        }
    }

    /// Parses `a,b|a.b.a^-1.b^-1`. Relators are separated by commas and
    /// letters by dots or spaces; `x^k` repeats `x` (inverted for k < 0).
    pub fn parse(s: &str) -> Result<Presentation, Error> {
        let bad = |msg: String| Error::Invalid(format!("bad presentation `{s}`: {msg}"));
        let (gens, rels) = s.split_once('|').unwrap_or((s, ""));
        let generators: Vec<String> = gens
            .split(',')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(str::to_string)
            .collect();
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !g.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(bad(format!("generator `{g}` is not an identifier")));
            }
            if !seen.insert(g.as_str()) {
                return Err(bad(format!("generator `{g}` listed twice")));
            }
        }
        let mut relators = Vec::new();
        for rel in rels.split(',') {
            let mut word = Vec::new();
            for tok in rel.split(|c: char| c == '.' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let (name, power) = match tok.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<i64>()
                            .map_err(|_| bad(format!("bad exponent in `{tok}`")))?,
                    ),
                    None => (tok, 1),
                };
                let g = generators
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| bad(format!("unknown generator `{name}`")))?;
                for _ in 0..power.unsigned_abs() {
                    word.push(Letter::new(g, power < 0));
                }
            }
            relators.push(word);
        }
        Ok(Presentation::new(generators, relators))
    }

    pub fn word_to_string(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Relation matrix of the abelianization: exponent sums.
    pub fn exponent_sums(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for l in r {
                    row[l.generator] += l.exponent();
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        AbelianInvariants::from_relation_matrix(self.generators.len(), &self.exponent_sums())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        write!(f, "{}|{}", self.generators.join(","), rels.join(","))
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        let mut st = s.serialize_struct("Presentation", 2)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("relators", &rels)?;
        st.end()
    }
}

/// Edges of a BFS spanning forest grown from `root`, scanning vertices in
/// queue order and their edges lexicographically.
fn spanning_tree(x: &Complex2, root: &VertexId) -> BTreeSet<EdgeId> {
    let mut tree = BTreeSet::new();
    let mut seen = BTreeSet::from([root.clone()]);
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(v) = queue.pop_front() {
        let mut incident: Vec<_> = x.incident_edges(&v).collect();
        incident.sort_by(|a, b| a.id.cmp(&b.id));
        for e in incident {
            let w = if e.tail == v { &e.head } else { &e.tail };
            if seen.insert(w.clone()) {
                tree.insert(e.id.clone());
                queue.push_back(w.clone());
            }
        }
    }
    tree
}

/// Presentation of `π₁(X, basepoint)`; the default basepoint is the
/// lexicographically first vertex.
pub fn fundamental_presentation(
    x: &Complex2,
    basepoint: Option<&VertexId>,
) -> Result<Presentation, Error> {
    let root = match basepoint {
        Some(v) => {
            x.require_vertex(v)?;
            v.clone()
        }
        None => match x.sorted_vertices().first() {
            Some(v) => (*v).clone(),
            None => return Ok(Presentation::new(Vec::new(), Vec::new())),
        },
    };
    let tree = spanning_tree(x, &root);
    let gens: Vec<&EdgeId> = x
        .sorted_edges()
        .into_iter()
        .map(|e| &e.id)
        .filter(|id| !tree.contains(*id))
        .collect();
    let index: BTreeMap<&EdgeId, usize> = gens.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let relators = x
        .sorted_faces()
        .into_iter()
        .map(|f| {
            let word: Word = f
                .boundary
                .iter()
                .filter_map(|d| index.get(&d.edge).map(|&g| Letter::new(g, d.sign == Sign::Minus)))
                .collect();
            cyclic_reduce(&word)
        })
        .collect();
    Ok(Presentation::new(
        gens.iter().map(|e| e.as_str().to_string()).collect(),
        relators,
    ))
}

/// One elimination: a generator occurring exactly once in some relator.
/// Candidates are ranked by relator length, then relator index, then
/// generator index.
fn elimination(p: &Presentation) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (ri, r) in p.relators.iter().enumerate() {
        let mut count = vec![0usize; p.generators.len()];
        for l in r {
            count[l.generator] += 1;
        }
        if let Some(g) = count.iter().position(|&c| c == 1) {
            if best.is_none_or(|(len, _, _)| r.len() < len) {
                best = Some((r.len(), ri, g));
            }
        }
    }
    best.map(|(_, ri, g)| (ri, g))
}

/// Applies at most `budget` generator eliminations. Each keeps the group
/// unchanged up to isomorphism.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut p = Presentation::new(p.generators.clone(), p.relators.clone());
    for _ in 0..budget {
        let Some((ri, g)) = elimination(&p) else { break };
        let r = p.relators.remove(ri);
        let at = r.iter().position(|l| l.generator == g).expect("occurs once");
        let (u, v) = (&r[..at], &r[at + 1..]);
        // u x^ε v = 1
        let image: Word = if r[at].inverse {
            v.iter().chain(u).copied().collect()
        } else {
            invert(u).into_iter().chain(invert(v)).collect()
        };
        let image_inv = invert(&image);
        let shift = |l: Letter| Letter::new(if l.generator > g { l.generator - 1 } else { l.generator }, l.inverse);
        let relators: Vec<Word> = p
            .relators
            .iter()
            .map(|rel| {
                let expanded: Word = rel
                    .iter()
                    .flat_map(|&l| {
                        if l.generator == g {
                            if l.inverse { image_inv.clone() } else { image.clone() }
                        } else {
                            vec![l]
                        }
                    })
                    .collect();
                cyclic_reduce(&expanded).into_iter().map(shift).collect()
            })
            .collect();
        let mut generators = p.generators.clone();
        generators.remove(g);
        p = Presentation::new(generators, relators);
    }
    p
}

/// Small integers as `BigInt` rows, for tests and callers with `i64` data.
pub fn to_big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::complex::ComplexBuilder;
    use proptest::prelude::*;

    fn det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Invariant factors through determinantal divisors: `d_k` is the gcd of
    /// all k×k minors and the k-th factor is `d_k / d_{k-1}`.
    fn factors_by_minors(m: &[Vec<i64>]) -> Vec<i64> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut out = Vec::new();
        let mut prev = 1i64;
        for k in 1..=rows.min(cols) {
            let mut g = 0i64;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if g == 0 {
                break;
            }
            out.push(g / prev);
            prev = g;
        }
        out
    }

    #[test]
    fn known_normal_forms() {
        assert_eq!(invariant_factors(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(invariant_factors(&[vec![0i64, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(invariant_factors::<i64>(&[]), Vec::<i64>::new());
        assert_eq!(invariant_factors(&[vec![2i64, 0], vec![0, 3]]), vec![1, 6]);
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(
            m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
                prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            })
        ) {
            let ours = invariant_factors(&to_big_matrix(&m));
            let expected: Vec<BigInt> = factors_by_minors(&m).into_iter().map(BigInt::from).collect();
            prop_assert_eq!(ours, expected);
        }
    }

    #[test]
    fn homology_examples() {
        assert_eq!(h1(&builders::torus()), AbelianInvariants { betti: 2, torsion: vec![] });
        assert_eq!(h1(&builders::cylinder(3).unwrap()), AbelianInvariants { betti: 1, torsion: vec![] });
        assert!(h1(&builders::heptadisk()).is_trivial());
        assert!(h1(&builders::tetrahedron()).is_trivial());
        let rp2 = ComplexBuilder::new()
            .vertex("v")
            .vertex("w")
            .edge("a", "v", "w")
            .edge("b", "w", "v")
            .equiangular_face("f", "a+ b+ a+ b+")
            .build()
            .unwrap();
        assert_eq!(h1(&rp2), AbelianInvariants { betti: 0, torsion: vec![BigInt::from(2)] });
        assert_eq!(h1(&rp2).to_string(), "Z/2");
        assert_eq!(h1(&builders::torus()).to_string(), "Z^2");
    }

    #[test]
    fn parse_and_print() {
        let p = Presentation::parse("a,b|a.b.a^-1.b^-1").unwrap();
        assert_eq!(p.generators, vec!["a", "b"]);
        assert_eq!(p.relators[0].len(), 4);
        assert_eq!(p.to_string(), "a,b|a.b.a^-1.b^-1");
        let bs = Presentation::parse("a,b|b.a.b^-1.a^-2").unwrap();
        assert_eq!(bs.relators[0].len(), 5);
        assert_eq!(Presentation::parse("a|a a^-1").unwrap().relators.len(), 0);
        assert!(Presentation::parse("a|b").is_err());
        assert!(Presentation::parse("a,a|").is_err());
        assert!(Presentation::parse("a|a^x").is_err());
        assert_eq!(Presentation::parse("a,b|a^2,b^3").unwrap().abelianization().to_string(), "Z/6");
    }

    #[test]
    fn spanning_tree_presentations() {
        let t = fundamental_presentation(&builders::torus(), None).unwrap();
        assert_eq!(t.generators.len(), 2);
        assert_eq!(t.relators.len(), 1);
        assert_eq!(t.relators[0].len(), 4);

        let tri = ComplexBuilder::new()
            .vertex("p")
            .vertex("q")
            .vertex("r")
            .edge("a", "p", "q")
            .edge("b", "q", "r")
            .edge("c", "r", "p")
            .build()
            .unwrap();
        let p = fundamental_presentation(&tri, None).unwrap();
        assert_eq!((p.generators.len(), p.relators.len()), (1, 0));
        assert_eq!(p.generators, vec!["b"]);

        let sq = fundamental_presentation(&builders::polygon(4).unwrap(), None).unwrap();
        assert_eq!((sq.generators.len(), sq.relators.len()), (1, 1));
        let s = tietze_simplify(&sq, 10);
        assert!(s.generators.is_empty() && s.relators.is_empty());

        assert!(fundamental_presentation(&builders::torus(), Some(&"w".into())).is_err());
    }

    #[test]
    fn tietze_examples() {
        let p = Presentation::parse("a,b|b").unwrap();
        assert_eq!(tietze_simplify(&p, 5).to_string(), "a|");
        let q = Presentation::parse("a|").unwrap();
        assert_eq!(tietze_simplify(&q, 5), q);
        let r = Presentation::parse("a,b,c|a.b.c,c^-1.b^-1.a.a").unwrap();
        assert_eq!(tietze_simplify(&r, 0), r);
        let s = tietze_simplify(&r, 10);
        assert_eq!(s.abelianization(), r.abelianization());
        assert!(s.generators.len() < r.generators.len());
    }

    #[test]
    fn two_computations_of_h1_agree() {
        for x in [
            builders::torus(),
            builders::cylinder(4).unwrap(),
            builders::heptadisk(),
            builders::grid(2, 3).unwrap(),
            builders::tetrahedron(),
            builders::build("presentation:a,b|b.a.b^-1.a^-2").unwrap(),
        ] {
            let p = fundamental_presentation(&x, None).unwrap();
            assert_eq!(h1(&x), p.abelianization());
            assert_eq!(h1(&x), tietze_simplify(&p, 20).abelianization());
        }
    }
}
