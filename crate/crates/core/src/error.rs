use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined density: graph has no vertices")]
    EmptyGraph,
    #[error("graph has no edges")]
    EdgelessGraph,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(u32, u32),
    #[error("edge {0}-{1} would close a cycle")]
    CycleEdge(u32, u32),
    #[error("edge {0}-{1} not in forest")]
    NotInForest(u32, u32),
    #[error("vertex {0} not in forest")]
    VertexNotInForest(u32),
    #[error("empty forest")]
    EmptyForest,
    #[error("no central edge: vertex {0} is a centroid")]
    NoCentralEdge(u32),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal contradiction: {0}")]
    Diagnostic(String),
    #[error("recursion depth limit {0} exceeded")]
    DepthLimit(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
