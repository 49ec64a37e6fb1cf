use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edges `{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("embedding is not a graph homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("hypothesis {0} fails: {1}")]
    Hypothesis(&'static str, String),
    #[error("edge `{0}` is outside the embedded image")]
    NotInImage(String),
    #[error("ray has no edge outside the embedded image")]
    NoNonXiEdge,
    #[error("strata differ or are infinite ({0} vs {1})")]
    StratumMismatch(String, String),
    #[error("target stratum {k} is below the {found} non-embedded edges already present")]
    StratumTooSmall { k: usize, found: usize },
    #[error("no embedded tail reachable from vertex `{0}`")]
    NoTail(String),
    #[error("vertex `{0}` has no outgoing edge")]
    DeadEnd(String),
    #[error("tower depths differ ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("bracket undefined: tower distance upper bound {0} exceeds 1/2")]
    BracketUndefined(String),
    #[error("no cycle avoids the embedded image")]
    NoTransversal,
    #[error("size guard exceeded: {count} words (cap {cap})")]
    SizeGuard { count: u128, cap: u128 },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
