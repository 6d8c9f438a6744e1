use serde::Serialize;

use crate::complex::Complex2;
use crate::Angle;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

pub const RULE_CONSISTENCY: &str = "boundary-consistency";
pub const RULE_EMPTY_FACE: &str = "empty-boundary";
pub const RULE_ANGLE_POSITIVE: &str = "angle-positive";
pub const RULE_ANGLE_SUM: &str = "angle-sum";
pub const RULE_CONNECTED: &str = "connected";

/// Checks every angled-complex invariant and collects all failures.
pub fn validate(x: &Complex2) -> ValidationReport {
    let mut violations = Vec::new();
    for face in x.sorted_faces() {
        let n = face.boundary.len();
        if n == 0 {
            violations.push(Violation {
                rule: RULE_EMPTY_FACE,
                message: format!("face `{}` has an empty boundary word", face.id),
                cells: vec![face.id.to_string()],
            });
            continue;
        }
        for i in 0..n {
            let here = &face.boundary[i];
            let next = &face.boundary[(i + 1) % n];
            if x.finish_of(here) != x.start_of(next) {
                violations.push(Violation {
                    rule: RULE_CONSISTENCY,
                    message: format!(
                        "boundary not vertex-consistent in face `{}`: {} ends at `{}` but {} starts at `{}`",
                        face.id,
                        here,
                        x.finish_of(here),
                        next,
                        x.start_of(next)
                    ),
                    cells: vec![face.id.to_string(), here.edge.to_string(), next.edge.to_string()],
                });
            }
        }
        for (i, a) in face.angles.iter().enumerate() {
            if !a.is_positive() {
                violations.push(Violation {
                    rule: RULE_ANGLE_POSITIVE,
                    message: format!("corner {i} of face `{}` has non-positive angle {a}", face.id),
                    cells: vec![face.id.to_string()],
                });
            }
        }
        let expected = Angle::polygon_sum(n);
        let actual = face.angle_sum();
        if actual != expected {
            violations.push(Violation {
                rule: RULE_ANGLE_SUM,
                message: format!(
                    "angle-sum violation in face `{}`: corners sum to {actual}, expected {expected}",
                    face.id
                ),
                cells: vec![face.id.to_string()],
            });
        }
    }
    if !x.is_connected() {
        violations.push(Violation {
            rule: RULE_CONNECTED,
            message: format!("not connected: {} components", x.component_count()),
            cells: Vec::new(),
        });
    }
    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}
