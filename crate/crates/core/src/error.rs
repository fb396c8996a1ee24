use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters for `{family}`: {reason}")]
    BadParams { family: String, reason: String },
    #[error("graph too small: {0}")]
    TooSmall(String),
    #[error("graph too large for exhaustive search ({0} vertices)")]
    GraphTooLarge(usize),
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("embedding is empty (d = 0)")]
    EmptyEmbedding,
    #[error("matrix is nonsingular; the nullspace is trivial")]
    EmptyKernel,
    #[error("matrix has corank 0")]
    CorankZero,
    #[error("quadratic form is zero")]
    ZeroForm,
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("corank {0} is too small for this check")]
    CorankTooSmall(usize),
    #[error("operation needs dimension {expected}, embedding has d = {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("consecutive circuit vectors at positions {0} and {1} are linearly dependent")]
    DependentConsecutive(usize, usize),
    #[error("neighbours of circuit vertex at position {0} are not on opposite sides of its line")]
    SidesConditionViolated(usize),
    #[error("plane hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("plane walk stuck: {0}")]
    WalkStuck(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("kernel of M is not contained in the kernel of A (residual {0:e})")]
    KernelNotContained(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}
