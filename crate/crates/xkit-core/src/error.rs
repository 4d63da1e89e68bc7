//! Error types shared across the library.

use thiserror::Error;

/// Errors from the exact-arithmetic substrate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Bounded closure did not stabilize: the group is possibly infinite or
    /// the bound is too small. Never silently truncates.
    #[error("closure did not stabilize within bound {bound}")]
    Unbounded { bound: usize },
    /// Exact integer arithmetic overflowed a machine word.
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    /// A word refers to a generator index outside the presentation.
    #[error("generator index {index} out of range (have {count})")]
    BadGenerator { index: usize, count: usize },
    /// A group ring element refers to an element outside the table.
    #[error("group element index {index} out of range (order {order})")]
    BadElement { index: usize, order: usize },
    /// Matrix dimensions do not match the operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Errors from groupoid operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("paths are not composable: target {found} of one factor is not source {expected} of the next")]
    NotComposable { expected: usize, found: usize },
    #[error("object {0} not found")]
    ObjectNotFound(usize),
    #[error("edge index {0} out of range")]
    BadEdge(usize),
    #[error("relation endpoints disagree")]
    MismatchedRelation,
    #[error("morphism does not preserve endpoints on edge {0}")]
    BadMorphism(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from crossed-module constructions and validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmodError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("carrier is not finite")]
    InfiniteCarrier,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from cube-complex operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("cell {0} is not a member of the complex")]
    NotInComplex(String),
    #[error("{face} is not a codimension-one face of {cell}")]
    NotFace { cell: String, face: String },
    #[error("face {face} is not free: also a face of {other}")]
    NotFree { face: String, other: String },
    #[error("not a subcomplex: {0} missing")]
    NotSubcomplex(String),
    #[error("complex is not closed under faces: {0} missing")]
    NotClosed(String),
    #[error("not a partial box: {0}")]
    NotPartialBox(String),
    #[error("partial box {0} is not contained in the other")]
    NotContained(String),
    #[error("incidence mismatch between parts {left} and {right} in direction {direction}: {left_label} vs {right_label}")]
    IncidenceMismatch {
        left: String,
        right: String,
        direction: usize,
        left_label: String,
        right_label: String,
    },
    #[error("cell dimension mismatch: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
}

/// Errors from the double-groupoid layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgError {
    #[error("underlying crossed module is invalid: {0}")]
    InvalidCrossedModule(String),
    #[error("squares are not composable in direction {0}")]
    NotComposable(u8),
    #[error("shell violates the face compatibility conditions: {0}")]
    MalformedShell(String),
}

/// Errors from text-format parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}
