use thiserror::Error;

use crate::lattice::Space;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input itself is malformed (shapes, ranks, indices).
    Malformed,
    /// The input is well formed but violates a named precondition.
    Precondition,
    /// Fixed-width arithmetic overflowed or a resource budget was exhausted.
    Resource,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("lattice mismatch: expected a vector in {expected:?}, found {found:?}")]
    SpaceMismatch { expected: Space, found: Space },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("vectors must have rank at least 1")]
    ZeroRank,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("empty input")]
    EmptyInput,
    #[error("rank {rank} exceeds the supported cap of {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("{0:?} is not a facet normal of the polytope")]
    NotAFacetNormal(Vec<i64>),
    #[error("polytope is not full-dimensional (affine dimension {affine_dim} < rank {rank})")]
    Degenerate { affine_dim: usize, rank: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("divisor is not Cartier on cone {cone} ({})", if *.rational_only { "only a rational datum exists" } else { "no rational datum exists" })]
    NotCartier { cone: usize, rational_only: bool },
    #[error("maximal cone {cone} is not full-dimensional; its Cartier datum is not unique")]
    NonFullDimensionalCone { cone: usize },
    #[error("support function data disagree on ray {0}")]
    Discontinuous(usize),
    #[error("vector {0:?} lies outside the support of the fan")]
    OutsideSupport(Vec<i64>),
    #[error("fan is not complete")]
    IncompleteFan,
    #[error("inequalities cut out an unbounded region")]
    Unbounded,
    #[error("polytope is empty: the divisor has no global sections")]
    EmptyPolytope,
    #[error("polytope has a non-integral vertex")]
    NonLatticeVertex,
    #[error("fan does not refine the normal fan of the polytope: min is not linear on cone {cone}")]
    NotRefining { cone: usize },
    #[error("cone with rays {0:?} is not simplicial")]
    NonSimplicialCone(Vec<usize>),
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("divisor is not globally generated")]
    NotGloballyGenerated,
    #[error("lattice map does not send source cone {cone} into a cone of the target fan")]
    NotAMorphism { cone: usize },
    #[error("lattice map is not injective")]
    NotInjective,
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid curve class: {0}")]
    InvalidCurveClass(String),
    #[error("curve class has negative entry at ray {0}")]
    NegativeCurveClass(usize),
    #[error("curve class meets every invariant divisor with multiplicity zero")]
    ZeroCurveClass,
    #[error("ray {0} does not meet the curve class positively")]
    RayNotPositive(usize),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cone budget of {0} exceeded during resolution")]
    BudgetExceeded(usize),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            RankMismatch { .. }
            | SpaceMismatch { .. }
            | ShapeMismatch(_)
            | ZeroRank
            | EmptyInput
            | InvalidFan(_)
            | Discontinuous(_)
            | LengthMismatch { .. }
            | IndexOutOfRange { .. }
            | InvalidCurveClass(_) => ErrorKind::Malformed,
            Overflow | BudgetExceeded(_) | RankCapExceeded { .. } => ErrorKind::Resource,
            _ => ErrorKind::Precondition,
        }
    }
}
