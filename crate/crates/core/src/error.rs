use thiserror::Error;

use crate::fuzz::ReproBundle;
use crate::matfile::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which proved inequality failed to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// `|Λ(C)| ≤ (rank(B)+1)|Λ(A)| + d(A) − d(C)`.
    ImprovedBound,
    /// `m_g(C,λ) ≥ m_g(A,λ) − rank(B)`.
    GeometricMultiplicityDrop,
    /// `|Λ(C)| + d(C) ≤ n`.
    DistinctPlusDefectivity,
    /// No shared eigenvalue forces `(rank(B)+1)|Λ(A)| + d(A) > n`.
    DisjointSpectra,
    /// `I(C) ≥ I(A) − rank(B)·|Λ(A)|`.
    DerogatoryIndexLowerBound,
    /// Rank-one update of a diagonalizable matrix.
    RankOneDiagonalizable,
    /// `(n−d(A))/(rank(B)+1) ≤ |Λ(A)| ≤ n−d(A)` when `C` is nonderogatory.
    NonderogatorySandwich,
    /// A Hermitian/skew-Hermitian splitting bound fell below `|Λ(A)|`.
    SplitBound,
    /// Computed invariants disagree with the generating Jordan structure.
    GroundTruth,
    /// An internal consistency identity of the eigenstructure failed.
    Eigenstructure,
    /// Improved and Farrell bounds coincide although `C` is defective, or
    /// differ although it is not.
    FarrellComparison,
    /// A worked example no longer reproduces its known values.
    Golden,
}

/// A proved inequality failed on a concrete instance. Any occurrence is a
/// bug in this crate.
#[derive(Clone, Debug, Error)]
#[error("verification violation ({kind:?}): {detail}")]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Self {
            kind,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("{0} is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error("verification violation in fuzz trial {}: {}", .0.trial, .0.violation)]
    Reproduction(Box<ReproBundle>),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for outcomes that indicate a falsified inequality rather than bad
    /// input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::Violation(_) | Error::Reproduction(_))
    }
}
