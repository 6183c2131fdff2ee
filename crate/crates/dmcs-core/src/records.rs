//! JSON records emitted by the CLI. Field order is fixed by the struct
//! definitions, so identical runs serialize identically except for the
//! wall-time field.

use serde::{Deserialize, Serialize};

use crate::search::Algorithm;

pub const SCHEMA_VERSION: u32 = 1;

/// One search invocation: inputs, flags, and the community found.
/// Node ids are external ids.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub schema: u32,
    pub graph: String,
    pub algorithm: Algorithm,
    pub query: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pruning: Option<bool>,
    pub community: Vec<u64>,
    pub size: usize,
    pub dm: f64,
    pub cm: f64,
    pub best_iteration: usize,
    pub removals: usize,
    pub wall_time_ms: f64,
}

/// Evaluation of a run against a ground-truth file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub schema: u32,
    pub nmi: f64,
    pub ari: f64,
    pub fscore: f64,
    pub matched_truth: usize,
}

/// Graph summary for the stats command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsRecord {
    pub schema: u32,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    /// Pairs of (degree, node count), ascending by degree.
    pub degree_histogram: Vec<(u32, u64)>,
    /// Double-sweep BFS lower bound on the diameter of the largest
    /// component; absent for empty graphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter_estimate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Machine-readable error envelope printed on failures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}
