use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coxeter matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("coxeter matrix diagonal entry {0} is not 1")]
    BadDiagonal(usize),
    #[error(
        "coxeter matrix entry ({row}, {col}) = {value} is out of range (need >= 2 or infinity)"
    )]
    EntryOutOfRange { row: usize, col: usize, value: u32 },
    #[error("pairing product {0} is negative; off-diagonal signs are inconsistent")]
    NegativeProduct(f64),
    #[error("datum does not satisfy the Coxeter conditions: {0}")]
    InvalidDatum(String),
    #[error("roots {0} and {1} define the same reflection")]
    DuplicateReflection(usize, usize),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("zero vector has no sign or root class")]
    ZeroVector,
    #[error("classification of gamma = {0} is inconclusive within the given bounds")]
    Inconclusive(f64),
    #[error("invalid dihedral parameters: {0}")]
    InvalidParams(String),
    #[error(
        "no descent found for a non-identity element (word {0:?}); datum is numerically broken"
    )]
    NoDescent(Vec<usize>),
    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("parent root system enumeration is truncated")]
    IncompleteParent,
    #[error("operation requires a finite, fully enumerated group")]
    InfiniteCase,
    #[error("element is not in the reflection subgroup")]
    NotInSubgroup,
    #[error("precondition failed: {0}")]
    PreconditionFail(String),
    #[error("roots are numerically dependent; their span is degenerate")]
    DegenerateSpan,
    #[error("root {0:?} is not in the generated parent system")]
    RootNotFound(Vec<f64>),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
