use thiserror::Error;

/// Errors produced by network construction, mutation and experiment setup.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network config: {0}")]
    InvalidConfig(String),

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error(
        "node ({cluster}, {node}) out of range for {clusters} clusters of {cluster_size} nodes"
    )]
    IndexOutOfRange {
        cluster: usize,
        node: usize,
        clusters: usize,
        cluster_size: usize,
    },

    #[error("connection inside cluster {cluster} is not allowed")]
    IntraCluster { cluster: usize },

    #[error("weight {value} outside [0, {max}]")]
    WeightOutOfRange { value: u32, max: u32 },

    #[error("need {requested} distinct messages but the message space holds only {space}")]
    MessageSpaceExhausted { requested: usize, space: u128 },

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
