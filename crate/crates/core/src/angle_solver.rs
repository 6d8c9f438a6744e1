//! Searches for an angle assignment passing the weight test, by exact linear
//! programming with link girth as the separation oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::complex::{Complex2, CornerRef, FaceId, VertexId};
use crate::error::Error;
use crate::lp::{LinearProgram, LpResult, Relation};
use crate::scalar::Exact;
use crate::weight_test::{classify, vertex_girth, Classification, Mode};
use crate::{Angle, ExactAngle};

/// A link cycle, as the corners it runs through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleConstraint {
    pub vertex: VertexId,
    pub corners: Vec<CornerRef>,
}

fn big_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedCycle {
    pub cycle: CycleConstraint,
    #[serde(serialize_with = "big_int")]
    pub multiplier: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedFace {
    pub face: FaceId,
    #[serde(serialize_with = "big_int")]
    pub multiplier: BigInt,
}

/// Counting obstruction. With cycle weights `λ`, face weights `μ` and
/// corner slacks `σ >= 0` such that `μ(face of c) = σ_c + Σ λ_k·[c in k]`,
/// any admissible assignment would give `supply >= demand + t·(Σσ + δΣλ)`
/// with `t > 0` the smallest angle; the certificate shows this fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub mode: Mode,
    /// Every cycle constraint the search generated.
    pub discovered: Vec<CycleConstraint>,
    /// Cycles with positive weight.
    pub cycles: Vec<WeightedCycle>,
    pub faces: Vec<WeightedFace>,
    pub corner_slack: Vec<(CornerRef, String)>,
    /// `Σ λ_k · 2π`.
    pub demand: ExactAngle,
    /// `Σ μ_f · (n_f − 2)π`.
    pub supply: ExactAngle,
}

impl Certificate {
    /// Re-checks the obstruction against `x` from scratch.
    pub fn verify(&self, x: &Complex2) -> bool {
        let mut load: BTreeMap<CornerRef, BigRational> = BTreeMap::new();
        for c in x.corners() {
            load.insert(c.reference(), BigRational::zero());
        }
        let mut lambda = BigRational::zero();
        for w in &self.cycles {
            if w.multiplier.is_negative() {
                return false;
            }
            let m = BigRational::from_integer(w.multiplier.clone());
            lambda += &m;
            for c in &w.cycle.corners {
                let Some(v) = load.get_mut(c) else { return false };
                *v += &m;
            }
        }
        let mu: BTreeMap<&FaceId, BigRational> = self
            .faces
            .iter()
            .map(|f| (&f.face, BigRational::from_integer(f.multiplier.clone())))
            .collect();
        let mut sigma = BigRational::zero();
        for (c, l) in &load {
            let m = mu.get(&c.face).cloned().unwrap_or_else(BigRational::zero);
            if &m < l {
                return false;
            }
            sigma += m - l;
        }
        let two = BigRational::from_integer(2.into());
        let demand = &lambda * &two;
        let supply = x
            .faces()
            .iter()
            .map(|f| {
                let m = mu.get(&f.id).cloned().unwrap_or_else(BigRational::zero);
                m * BigRational::from_integer((f.len() as i64 - 2).into())
            })
            .fold(BigRational::zero(), |a, b| a + b);
        if demand != *self.demand.multiple() || supply != *self.supply.multiple() {
            return false;
        }
        let strict = match self.mode {
            Mode::Nonpositive => sigma,
            Mode::Negative => sigma + lambda,
        };
        demand > supply || (demand == supply && strict.is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveOutcome {
    Feasible {
        #[serde(skip)]
        complex: Complex2,
        angles: BTreeMap<String, Angle>,
        /// Smallest corner angle, and the girth surplus in negative mode.
        margin: Angle,
        iterations: usize,
        cycles: Vec<CycleConstraint>,
    },
    Infeasible {
        certificate: Certificate,
        iterations: usize,
    },
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible { .. })
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn corner_counts(corners: &[CornerRef], index: &BTreeMap<CornerRef, usize>) -> Vec<(usize, BigRational)> {
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for c in corners {
        *counts.entry(index[c]).or_default() += 1;
    }
    counts.into_iter().map(|(j, k)| (j, big(k))).collect()
}

/// Finds angles making `x` pass the weight test in `mode`, or a counting
/// certificate that none exist. The angles already on `x` are ignored.
pub fn solve_angles(x: &Complex2, mode: Mode) -> Result<SolveOutcome, Error> {
    let corners: Vec<CornerRef> = x.corners().map(|c| c.reference()).collect();
    let index: BTreeMap<CornerRef, usize> = corners.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let t = corners.len();
    let delta = match mode {
        Mode::Nonpositive => 0,
        Mode::Negative => 1,
    };
    let mut cycles: Vec<CycleConstraint> = Vec::new();
    let mut seen: BTreeSet<Vec<CornerRef>> = BTreeSet::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut lp = LinearProgram::<BigRational>::new(t + 1);
        lp.objective[t] = big(1);
        for f in x.sorted_faces() {
            let terms: Vec<(usize, BigRational)> = (0..f.len())
                .map(|i| (index[&CornerRef { face: f.id.clone(), index: i }], big(1)))
                .collect();
            lp.constrain(&terms, Relation::Eq, big(f.len() as i64 - 2));
        }
        for j in 0..t {
            lp.constrain(&[(j, big(1)), (t, big(-1))], Relation::Ge, big(0));
        }
        lp.constrain(&[(t, big(1))], Relation::Le, big(1));
        for c in &cycles {
            let mut terms = corner_counts(&c.corners, &index);
            terms.push((t, big(-delta)));
            lp.constrain(&terms, Relation::Ge, big(2));
        }
        let (values, slack) = match lp.solve() {
            LpResult::Optimal { x: v, value } if value.is_positive() => (v, value),
            _ => {
                return Ok(SolveOutcome::Infeasible {
                    certificate: certificate(x, &corners, &index, &cycles, mode),
                    iterations,
                })
            }
        };
        let mut angles = BTreeMap::new();
        for (c, v) in corners.iter().zip(&values) {
            let a = Rational64::from_big(v)
                .ok_or_else(|| Error::Invalid(format!("angle at {c} does not fit in 64-bit rationals")))?;
            angles.insert(c.clone(), Angle::from_multiple(a));
        }
        let candidate = x.with_angles(|c| angles[c].clone());
        let bound = big(2) + big(delta) * &slack;
        let mut added = false;
        for v in candidate.sorted_vertices() {
            let g = vertex_girth(&candidate, v);
            let Some(girth) = g.girth else { continue };
            if girth.multiple().to_big() < bound {
                let mut key = g.witness.clone();
                key.sort();
                if seen.insert(key) {
                    cycles.push(CycleConstraint {
                        vertex: v.clone(),
                        corners: g.witness,
                    });
                    added = true;
                }
            }
        }
        if !added {
            let margin = Angle::from_multiple(
                Rational64::from_big(&slack).ok_or_else(|| Error::Invalid("margin overflow".into()))?,
            );
            debug_assert!(classify(&candidate).classification.passes(mode));
            return Ok(SolveOutcome::Feasible {
                complex: candidate,
                angles: angles.into_iter().map(|(c, a)| (c.to_string(), a)).collect(),
                margin,
                iterations,
                cycles,
            });
        }
    }
}

/// Solves for cycle and face weights. First maximizes `demand − supply`
/// over weights normalized by `Σλ + Σσ = 1`; when the best gap is zero, a
/// second program maximizes the strict part with the gap held at zero.
fn certificate(
    x: &Complex2,
    corners: &[CornerRef],
    index: &BTreeMap<CornerRef, usize>,
    cycles: &[CycleConstraint],
    mode: Mode,
) -> Certificate {
    let faces = x.sorted_faces();
    let k = cycles.len();
    let nf = faces.len();
    let nc = corners.len();
    // variables: λ (k), μ⁺ (nf), μ⁻ (nf), σ (nc)
    let lam = |i: usize| i;
    let mu_p = |f: usize| k + f;
    let mu_m = |f: usize| k + nf + f;
    let sig = |c: usize| k + 2 * nf + c;
    let vars = k + 2 * nf + nc;
    let face_index: BTreeMap<&FaceId, usize> = faces.iter().enumerate().map(|(i, f)| (&f.id, i)).collect();
    let mut base = LinearProgram::<BigRational>::new(vars);
    let mut load: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); nc];
    for (i, cy) in cycles.iter().enumerate() {
        for (j, m) in corner_counts(&cy.corners, index) {
            load[j].push((lam(i), m));
        }
    }
    for (j, c) in corners.iter().enumerate() {
        let f = face_index[&c.face];
        let mut terms = vec![(mu_p(f), big(1)), (mu_m(f), big(-1)), (sig(j), big(-1))];
        terms.extend(load[j].iter().map(|(v, m)| (*v, -m.clone())));
        base.constrain(&terms, Relation::Eq, big(0));
    }
    let mut norm: Vec<(usize, BigRational)> = (0..k).map(|i| (lam(i), big(1))).collect();
    norm.extend((0..nc).map(|j| (sig(j), big(1))));
    base.constrain(&norm, Relation::Eq, big(1));
    let mut gap: Vec<(usize, BigRational)> = (0..k).map(|i| (lam(i), big(2))).collect();
    for (f, face) in faces.iter().enumerate() {
        let s = big(face.len() as i64 - 2);
        gap.push((mu_p(f), -s.clone()));
        gap.push((mu_m(f), s));
    }
    let mut first = base.clone();
    for (j, c) in &gap {
        first.objective[*j] = c.clone();
    }
    let solution = match first.solve() {
        LpResult::Optimal { x: v, value } if value.is_positive() => Some(v),
        LpResult::Optimal { value, .. } if value.is_zero() => {
            let mut second = base.clone();
            second.constrain(&gap, Relation::Ge, big(0));
            let strict: Vec<usize> = match mode {
                Mode::Nonpositive => (0..nc).map(sig).collect(),
                Mode::Negative => (0..nc).map(sig).chain((0..k).map(lam)).collect(),
            };
            for j in strict {
                second.objective[j] = big(1);
            }
            match second.solve() {
                LpResult::Optimal { x: v, value } if value.is_positive() => Some(v),
                _ => None,
            }
        }
        _ => None,
    };
    let v = solution.unwrap_or_else(|| vec![big(0); vars]);
    // scale to coprime integers
    let scale = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|r| (r * BigRational::from_integer(scale.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g > BigInt::one() {
        for n in ints.iter_mut() {
            *n = &*n / &g;
        }
    }
    let weighted: Vec<WeightedCycle> = cycles
        .iter()
        .enumerate()
        .filter(|(i, _)| ints[lam(*i)].is_positive())
        .map(|(i, c)| WeightedCycle {
            cycle: c.clone(),
            multiplier: ints[lam(i)].clone(),
        })
        .collect();
    let face_weights: Vec<WeightedFace> = faces
        .iter()
        .enumerate()
        .map(|(f, face)| WeightedFace {
            face: face.id.clone(),
            multiplier: &ints[mu_p(f)] - &ints[mu_m(f)],
        })
        .filter(|w| !w.multiplier.is_zero())
        .collect();
    let corner_slack = corners
        .iter()
        .enumerate()
        .filter(|(j, _)| ints[sig(*j)].is_positive())
        .map(|(j, c)| (c.clone(), ints[sig(j)].to_string()))
        .collect();
    let lambda: BigInt = weighted.iter().map(|w| w.multiplier.clone()).sum();
    let supply: BigInt = face_weights
        .iter()
        .map(|w| &w.multiplier * BigInt::from(x.face(&w.face).expect("face").len() as i64 - 2))
        .sum();
    Certificate {
        mode,
        discovered: cycles.to_vec(),
        cycles: weighted,
        faces: face_weights,
        corner_slack,
        demand: ExactAngle::from_multiple(BigRational::from_integer(lambda * 2)),
        supply: ExactAngle::from_multiple(BigRational::from_integer(supply)),
    }
}

/// Whether a feasible outcome really passes the weight test in `mode`.
pub fn recheck(outcome: &SolveOutcome, mode: Mode) -> bool {
    match outcome {
        SolveOutcome::Feasible { complex, .. } => {
            crate::validate(complex).ok && classify(complex).classification.passes(mode)
        }
        SolveOutcome::Infeasible { .. } => false,
    }
}

/// Classification of a feasible outcome.
pub fn outcome_class(outcome: &SolveOutcome) -> Option<Classification> {
    match outcome {
        SolveOutcome::Feasible { complex, .. } => Some(classify(complex).classification),
        SolveOutcome::Infeasible { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::complex::equal_angles;

    fn bare(x: &Complex2) -> Complex2 {
        x.with_angles(|c| equal_angles(x.face(&c.face).unwrap().len())[c.index].clone())
    }

    #[test]
    fn torus_is_feasible_but_not_strictly() {
        let t = bare(&builders::torus());
        let out = solve_angles(&t, Mode::Nonpositive).unwrap();
        assert!(recheck(&out, Mode::Nonpositive));
        assert_eq!(outcome_class(&out), Some(Classification::NonpositiveOnly));
        let SolveOutcome::Feasible { angles, .. } = &out else { panic!() };
        assert!(angles.values().all(|a| *a == Angle::new(1, 2)));

        let neg = solve_angles(&t, Mode::Negative).unwrap();
        let SolveOutcome::Infeasible { certificate, .. } = &neg else { panic!("{neg:?}") };
        assert!(certificate.verify(&t));
        assert_eq!(certificate.demand, certificate.supply);
    }

    #[test]
    fn tetrahedron_counting_obstruction() {
        let x = builders::tetrahedron();
        for mode in [Mode::Nonpositive, Mode::Negative] {
            let out = solve_angles(&x, mode).unwrap();
            let SolveOutcome::Infeasible { certificate, .. } = &out else { panic!("{out:?}") };
            assert!(certificate.verify(&x));
            assert_eq!(certificate.cycles.len(), 4);
            assert_eq!(certificate.demand, ExactAngle::new(8, 1));
            assert_eq!(certificate.supply, ExactAngle::new(4, 1));
        }
    }

    #[test]
    fn cylinder_is_vacuously_negative() {
        let c = bare(&builders::cylinder(3).unwrap());
        let out = solve_angles(&c, Mode::Negative).unwrap();
        assert!(recheck(&out, Mode::Negative));
        let SolveOutcome::Feasible { iterations, cycles, .. } = &out else { panic!() };
        assert_eq!((*iterations, cycles.len()), (1, 0));
    }

    #[test]
    fn heptadisk_finds_a_negative_assignment() {
        let h = bare(&builders::heptadisk());
        let out = solve_angles(&h, Mode::Negative).unwrap();
        assert!(recheck(&out, Mode::Negative));
    }

    #[test]
    fn tampered_certificate_fails() {
        let x = builders::tetrahedron();
        let SolveOutcome::Infeasible { mut certificate, .. } = solve_angles(&x, Mode::Negative).unwrap() else {
            panic!()
        };
        certificate.cycles.pop();
        assert!(!certificate.verify(&x));
    }
}
