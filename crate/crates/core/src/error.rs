use thiserror::Error;

use crate::diagram::{MatchClass, Point, ReebChord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram needs between 1 and 64 points, got {0}")]
    PointCount(usize),
    #[error("point a{0} is not part of the diagram")]
    UnknownPoint(Point),
    #[error("point a{0} appears on more than one arc position")]
    RepeatedPoint(Point),
    #[error("point a{0} is not placed on any arc")]
    UnplacedPoint(Point),
    #[error("at most 15 match-classes are supported, got {0}")]
    TooManyClasses(MatchClass),
    #[error("match-class {class} has {count} points, expected 2")]
    ClassSize { class: MatchClass, count: usize },
    #[error("{0} is not an upward chord on a single arc")]
    NotAChord(ReebChord),
    #[error("cannot read chord label {0:?}")]
    BadLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("generator has {found} strands, the summand needs {expected}")]
    WrongSummand { expected: usize, found: usize },
    #[error("two strands share the match-class {0} at one end")]
    ClassReused(MatchClass),
    #[error("match-class {0} is outside the diagram")]
    UnknownClass(MatchClass),
    #[error("cannot parse algebra word {0:?}")]
    BadWord(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("Maslov component {maslov2}/2 violates the parity constraint of its class")]
    Parity { maslov2: i64 },
    #[error("element is not in the refined subgroup: boundary class {0:?} is nonzero")]
    NotRefined(Vec<i64>),
    #[error("algebra element is not homogeneous")]
    NotHomogeneous,
    #[error("algebra element is zero")]
    Zero,
    #[error("refinement data: {0}")]
    Refinement(String),
    #[error("class has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator name {0:?} used twice")]
    DuplicateGenerator(String),
    #[error("term {coef} (x) {to} in the image of {from} is incompatible with the idempotents")]
    Idempotent { from: String, coef: String, to: String },
    #[error("morphisms do not compose or do not share source and target")]
    Shape,
    #[error("mapping cone needs a cycle; the boundary has {0} terms")]
    NotACycle(usize),
    #[error("generator {0:?} has no grading")]
    MissingGrading(String),
    #[error("map is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("morphism term {0} lies outside the morphism-space basis")]
    OutsideBasis(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("type-A side has operations up to arity {found}, above the bound {bound}")]
    Unbounded { bound: usize, found: usize },
    #[error("unknown type-A generator {0}")]
    UnknownGenerator(usize),
}
