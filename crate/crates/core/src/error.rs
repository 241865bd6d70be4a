use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("directed part contains a cycle")]
    CyclicGraph,
    #[error("invalid latent factor graph: {0}")]
    InvalidFactorGraph(String),
    #[error("`{vertex}` is not a parent of `{child}`")]
    NotAParentSubset { vertex: String, child: String },
    #[error("graph is not a disjoint union of simple directed cycles: {0}")]
    NotCycleDecomposable(String),
    #[error("matrix I - Lambda is singular")]
    SingularMatrix,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("path enumeration exceeded {0} partial states")]
    TooLarge(usize),
    #[error("parameter matrix is not bound to this graph: {0}")]
    BindingMismatch(String),
    #[error("density {density} yields fewer than one edge for p = {p}")]
    InvalidDensity { p: usize, density: f64 },
    #[error("no nonsingular parameter draw after {0} attempts")]
    DegenerateParameters(usize),
    #[error("unsupported cumulant order {0} (expected 2, 3 or 4)")]
    UnsupportedOrder(usize),
    #[error("column lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parents of `{0}` have a singular Gram matrix")]
    RankDeficientParents(String),
    #[error("objective became non-finite after {iterations} iterations")]
    NonFiniteObjective { iterations: usize, last: Vec<f64> },
    #[error("true parameter matrix is zero")]
    ZeroTrueMatrix,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
