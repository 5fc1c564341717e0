use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph contains a cycle")]
    CycleDetected,
    #[error("vertex {0} is out of range")]
    InvalidVertex(usize),
    #[error("edge {0} is out of range")]
    InvalidEdge(usize),
    #[error("vertex {0} is unreachable from the source")]
    UnreachableFromSource(usize),
    #[error("failure set has {got} elements, oracle supports at most {max}")]
    TooManyFailures { got: usize, max: usize },
    #[error("oracle radius {radius} is below the requested level {needed}")]
    RadiusTooSmall { radius: String, needed: String },
    #[error("input set {index} has {got} vertices, needs at least {needed}")]
    SetTooSmall {
        index: usize,
        got: usize,
        needed: usize,
    },
    #[error("no hierarchy level below the threshold (diameter too small)")]
    DiameterTooSmall,
    #[error("sampling length {length} is below the concentration floor {floor}")]
    SamplingLengthTooSmall { length: f64, floor: f64 },
    #[error("graph must be unweighted (max weight 1) for this construction")]
    WeightedUnsupported,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown oracle version {0}")]
    UnknownVersion(u32),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
