use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("XML error: {0}")]
    Xml(String),

    /// Bad user-supplied configuration (missing CSV column, malformed word list, ...).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("empty graph: modularity undefined")]
    EmptyGraph,

    #[error("graph has no vertices")]
    NoVertices,

    #[error("partition covers {got} vertices but the graph has {expected}")]
    PartitionMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("brute-force search refused: {vertices} vertices exceeds the limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },

    #[error("no data")]
    NoData,

    #[error("training corpus has no usable tokens")]
    EmptyTrainingCorpus,

    #[error("reports mix period kinds ({0} and {1})")]
    MixedPeriods(String, String),
}
