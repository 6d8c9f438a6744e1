use thiserror::Error;

/// Errors raised by constructors and operations. Validation failures of a
/// complex are reported as data by [`crate::validate`], not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {kind}")]
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("duplicate {kind} identifier `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("face `{face}` has {found} angles for {expected} boundary letters")]
    AngleCount {
        face: String,
        expected: usize,
        found: usize,
    },
    #[error("Gauss-Bonnet check needs a complex marked as a disk diagram")]
    NotDiskDiagram,
    #[error("`{0}` is not a free face of this complex")]
    StaleFreeFace(String),
    #[error("bad builder spec `{spec}`: {reason}")]
    BadBuilder { spec: String, reason: String },
    #[error("cannot realize face `{face}`: {reason}")]
    Realization { face: String, reason: String },
    #[error("edge `{0}` lies in a single face boundary; no straight continuation")]
    FreeEdge(String),
    #[error("invalid start: {0}")]
    InvalidStart(String),
    #[error("point does not belong to the link graph: {0}")]
    PointNotInGraph(String),
    #[error("malformed segmental path: {0}")]
    MalformedPath(String),
    #[error("complex is not valid: {0}")]
    InvalidComplex(String),
    #[error("{0}")]
    Invalid(String),
}

/// Reasons an A2C document is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("angle-sum violation in face `{face}`: corners sum to {actual}, expected {expected}")]
    AngleSum {
        face: String,
        expected: String,
        actual: String,
    },
    #[error("non-positive angle `{angle}` in face `{face}`")]
    NonPositiveAngle { face: String, angle: String },
    #[error("bad angle: {0}")]
    Angle(String),
    #[error("face `{face}` lists {found} angles for {expected} boundary letters")]
    AngleCount {
        face: String,
        expected: usize,
        found: usize,
    },
}
