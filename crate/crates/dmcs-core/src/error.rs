//! Error type shared across the crate.

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on node {node} is not allowed")]
    SelfLoop { node: u64 },

    #[error("line {line}: edge weight {weight} is not positive")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("unknown node id {0}")]
    UnknownNode(u64),

    #[error("query nodes span multiple connected components")]
    QueriesDisconnected,

    #[error("induced subgraph is not connected")]
    DisconnectedInput,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("community has a single node; nothing can be removed")]
    SingletonCommunity,

    #[error("node has no neighbor inside the community; density ratio is undefined")]
    DanglingNode,

    #[error("node {0} is protected and cannot be removed")]
    ProtectedNode(NodeId),

    #[error("no {k}-core community contains the query nodes")]
    NoKCoreCommunity { k: u32 },

    #[error("query nodes lie in different components of the {k}-core")]
    QueriesSplitAcrossCores { k: u32 },

    #[error("component has {size} nodes, exceeding the exact-search limit of {limit}")]
    ComponentTooLarge { size: usize, limit: usize },

    #[error("no ground-truth community contains the query nodes")]
    NotApplicable,

    #[error("{0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }

    /// Stable machine-readable tag, used by the CLI error object and the C API.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::SelfLoop { .. } => "self_loop",
            Error::NonPositiveWeight { .. } => "non_positive_weight",
            Error::UnknownNode(_) => "unknown_node",
            Error::QueriesDisconnected => "queries_disconnected",
            Error::DisconnectedInput => "disconnected_input",
            Error::EmptyGraph => "empty_graph",
            Error::SingletonCommunity => "singleton_community",
            Error::DanglingNode => "dangling_node",
            Error::ProtectedNode(_) => "protected_node",
            Error::NoKCoreCommunity { .. } => "no_kcore_community",
            Error::QueriesSplitAcrossCores { .. } => "queries_split_across_cores",
            Error::ComponentTooLarge { .. } => "component_too_large",
            Error::NotApplicable => "not_applicable",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Io(_) => "io",
        }
    }
}
