use alloc::boxed::Box;
use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("expected {expected} matrix entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("cannot {op} matrices of shapes {left:?} and {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix of shape {shape:?} is not square")]
    NotSquare { shape: (usize, usize) },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("image of generator {generator} is not symplectic")]
    SymplecticViolation { generator: usize },
    #[error("the surface relator does not evaluate to the identity")]
    RelatorViolation,
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("invalid cover spec: {0}")]
    InvalidSpec(String),
    #[error("base genera differ: {left} vs {right}")]
    BaseMismatch { left: usize, right: usize },
    #[error("section sum needs a section of square zero on both summands")]
    MissingSection,
    #[error("{0} needs explicit monodromy; declared blocks carry only invariants")]
    DeclaredBlockUnsupported(&'static str),
    #[error("{0} needs a representation of the standard surface presentation")]
    GeneratingSetUnsupported(&'static str),
    #[error("coinvariant rank {rank} is odd; s is undefined")]
    ParityUndefined { rank: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("at {path}: {source}")]
    Node { path: String, source: Box<Error> },
}
