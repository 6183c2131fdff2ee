//! Community search by density modularity.
//!
//! Given an undirected graph and a set of query nodes, the searchers here
//! return a connected subgraph containing the queries that scores highly
//! under density modularity — a goodness function that divides the usual
//! modularity contrast by the community size instead of the edge count,
//! which keeps results small and dense instead of letting whole unrelated
//! regions ride along.
//!
//! The crate provides:
//!
//! * [`graph`]: CSR graph storage, edge-list ingestion, BFS layers, and
//!   articulation nodes.
//! * [`modularity`]: the scoring functions, including the removal gain and
//!   the density ratio used during peeling.
//! * [`search`]: the greedy top-down framework with two instantiations,
//!   NCA (articulation-based) and FPA (distance-layer peeling with
//!   optional layer pruning).
//! * [`baselines`]: k-core and highest-core searchers plus an exhaustive
//!   exact maximizer for small components.
//! * [`generate`]: seeded synthetic graphs with ground truth.
//! * [`metrics`]: NMI/ARI/F-score accuracy against ground truth.
//!
//! ```
//! use dmcs_core::{generate::ring_of_cliques, graph::NodeSet, search::fpa};
//!
//! let (graph, truth) = ring_of_cliques(30, 6).unwrap();
//! let result = fpa(&graph, &NodeSet::singleton(2), true).unwrap();
//! assert_eq!(result.community, truth.communities[0]);
//! ```

pub mod baselines;
pub mod error;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod modularity;
pub mod records;
pub mod search;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, NodeSet};
pub use search::{Algorithm, SearchResult};
