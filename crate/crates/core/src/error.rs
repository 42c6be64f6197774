use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("center {id}: {reason}")]
    InvalidCenter { id: usize, reason: String },

    #[error("center {id} references divisor {parent}, which is not created before it")]
    DanglingParent { id: usize, parent: usize },

    #[error("center {id}: divisors E{a} and E{b} do not intersect when it is created")]
    IllegalSatellite { id: usize, a: usize, b: usize },

    /// det(M) is not a unit. This cannot happen for a legal sequence of
    /// point blow-ups and signals a bug.
    #[error("intersection matrix has determinant {det}, expected +1 or -1")]
    NonUnimodular { det: String },

    #[error("value {0} does not fit in 64 bits")]
    Overflow(String),

    #[error("vertex {vertex} is out of range 1..={count}")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("marked list is invalid: {0}")]
    InvalidMarking(String),

    #[error("the model is not the minimal resolution of the marked set; unneeded centers {offending:?}")]
    NotMinimal { offending: Vec<usize> },

    #[error("the model is not the minimal resolution of the single valuation at vertex {vertex}")]
    NotSingleMinimal { vertex: usize },

    #[error("box has {cells} cells, above the cap of {cap}")]
    BoxTooLarge { cells: u128, cap: u64 },

    #[error("{0:?} is not in the value semigroup")]
    NotInSemigroup(Vec<u64>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("truncation boxes differ: {left:?} vs {right:?}")]
    BoxMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("vertex set {0:?} is not a connected component of the graph minus the pivot vertex")]
    NoComponent(Vec<usize>),

    /// A search that a structural result guarantees to succeed came back
    /// empty, or a post-condition of such a result failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("membership did not stabilize within {kmax} extension levels")]
    NoStabilization { kmax: usize },

    #[error("factor with zero exponent vector and negative multiplicity cannot be expanded")]
    ZeroVectorFactor,

    #[error("specialization at t=1 over {coords:?} is not stable under box enlargement")]
    Unstable { coords: Vec<usize> },

    #[error("query {query:?} lies outside the table box {bound:?}")]
    MarginExceeded { query: Vec<i64>, bound: Vec<u64> },

    #[error("parse error: {0}")]
    Parse(String),
}
