use thiserror::Error;

/// Errors surfaced by the slepgraph core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not symmetric: max |A - A^T| entry is {max_dev:.3e}")]
    NotSymmetric { max_dev: f64 },

    #[error("node {node} has zero degree; normalized Laplacian is undefined")]
    DegenerateDegree { node: usize },

    #[error("self-loop on node {node} is not allowed")]
    SelfLoop { node: usize },

    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },

    #[error("negative edge weight {weight} on edge ({i}, {j})")]
    NegativeWeight { i: usize, j: usize, weight: f64 },

    #[error("node index {index} out of range for graph with {n_nodes} nodes")]
    NodeOutOfRange { index: usize, n_nodes: usize },

    #[error("bandwidth K={k} exceeds graph size N={n}")]
    BandTooLarge { k: usize, n: usize },

    #[error("invalid selector: {0}")]
    InvalidSelector(String),

    #[error("spacelimiting requires a hard node selector (entries exactly 0 or 1)")]
    SoftSelectorRejected,

    #[error("eigenvalue iteration failed to converge for index {index}")]
    EigNoConvergence { index: usize },

    #[error("degenerate spectrum: eigengap {gap:.3e} below 1e-12 after perturbation")]
    DegenerateSpectrum { gap: f64 },

    #[error("cluster count {kappa} exceeds node count {n}")]
    TooManyClusters { kappa: usize, n: usize },

    #[error("spectral clustering produced an empty cluster after {restarts} restarts")]
    EmptyCluster { restarts: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("csv parse error at line {line}, column {column}: {message}")]
    CsvParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("eigenmap training did not converge: final training MSE {mse:.3e}")]
    EigenmapNotConverged { mse: f64 },

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
