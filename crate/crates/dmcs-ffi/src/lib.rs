//! C ABI over the community search library: opaque handles, status codes,
//! and a thread-local last-error message. All node ids crossing the
//! boundary are external (file) ids as `uint64_t`.
//!
//! The generated header lands in `include/dmcs.h` at build time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::os::raw::c_char;

use dmcs_core::baselines::{exact_dmcs, highest_core_search, kcore_search};
use dmcs_core::error::Error;
use dmcs_core::graph::{Graph, NodeId, NodeSet};
use dmcs_core::search::{fpa, nca, SearchResult};

/// Opaque graph handle; create with `dmcs_graph_load` or
/// `dmcs_graph_parse`, release with `dmcs_graph_free`.
pub struct DmcsGraph {
    inner: Graph,
}

/// Opaque search result; release with `dmcs_result_free`.
pub struct DmcsResult {
    community: Vec<u64>,
    dm: f64,
    cm: f64,
    best_iteration: usize,
    removals: usize,
}

/// Status codes returned by every fallible call. Zero means success;
/// `dmcs_last_error` describes the most recent failure on this thread.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmcsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    UnknownNode = 6,
    QueriesDisconnected = 7,
    Infeasible = 8,
    TooLarge = 9,
    BufferTooSmall = 10,
}

/// Search algorithm selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmcsAlgorithm {
    Fpa = 0,
    FpaNoPruning = 1,
    Nca = 2,
    Kcore = 3,
    Highcore = 4,
    Exact = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(err: &Error) -> DmcsStatus {
    set_last_error(&err.to_string());
    match err {
        Error::Parse { .. } | Error::SelfLoop { .. } | Error::NonPositiveWeight { .. } => {
            DmcsStatus::Parse
        }
        Error::UnknownNode(_) => DmcsStatus::UnknownNode,
        Error::QueriesDisconnected | Error::DisconnectedInput => DmcsStatus::QueriesDisconnected,
        Error::NoKCoreCommunity { .. }
        | Error::QueriesSplitAcrossCores { .. }
        | Error::NotApplicable => DmcsStatus::Infeasible,
        Error::ComponentTooLarge { .. } => DmcsStatus::TooLarge,
        Error::Io(_) => DmcsStatus::Io,
        Error::EmptyGraph
        | Error::SingletonCommunity
        | Error::DanglingNode
        | Error::ProtectedNode(_)
        | Error::InvalidParameter(_) => DmcsStatus::InvalidArgument,
    }
}

fn null_argument() -> DmcsStatus {
    set_last_error("null pointer argument");
    DmcsStatus::NullArgument
}

/// Copies the most recent error message for this thread into `buffer` and
/// returns the full message length in bytes (excluding the terminator).
/// Passing a null buffer or zero capacity just queries the length.
///
/// # Safety
/// `buffer`, when non-null, must point to at least `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn dmcs_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buffer.is_null() && capacity > 0 {
            let copy_len = bytes.len().min(capacity);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, copy_len);
            // Guarantee termination even when truncated.
            *buffer.add(copy_len - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Loads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dmcs_graph_load(
    path: *const c_char,
    weighted: bool,
    out: *mut *mut DmcsGraph,
) -> DmcsStatus {
    if path.is_null() || out.is_null() {
        return null_argument();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_last_error("path is not valid UTF-8");
        return DmcsStatus::InvalidUtf8;
    };
    let file = match File::open(path) {
        Ok(file) => file,
        Err(err) => return fail(&Error::Io(err)),
    };
    match Graph::from_edge_list(BufReader::new(file), weighted) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(DmcsGraph { inner: graph }));
            DmcsStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Parses an edge list held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dmcs_graph_parse(
    text: *const c_char,
    weighted: bool,
    out: *mut *mut DmcsGraph,
) -> DmcsStatus {
    if text.is_null() || out.is_null() {
        return null_argument();
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_last_error("edge list is not valid UTF-8");
        return DmcsStatus::InvalidUtf8;
    };
    match Graph::from_edge_list(text.as_bytes(), weighted) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(DmcsGraph { inner: graph }));
            DmcsStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Releases a graph handle; accepts null.
///
/// # Safety
/// `graph` must have come from `dmcs_graph_load`/`dmcs_graph_parse`.
#[no_mangle]
pub unsafe extern "C" fn dmcs_graph_free(graph: *mut DmcsGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_graph_node_count(graph: *const DmcsGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.node_count() as u64)
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_graph_edge_count(graph: *const DmcsGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.edge_count() as u64)
}

/// Runs a community search. `k` is only read for `Kcore`; `node_limit`
/// (0 = default 16) only for `Exact`. Queries are external ids.
///
/// # Safety
/// `graph` must be a live handle, `queries` must point to `query_count`
/// ids, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dmcs_search(
    graph: *const DmcsGraph,
    queries: *const u64,
    query_count: usize,
    algorithm: DmcsAlgorithm,
    k: u32,
    node_limit: usize,
    out: *mut *mut DmcsResult,
) -> DmcsStatus {
    if graph.is_null() || queries.is_null() || out.is_null() || query_count == 0 {
        return null_argument();
    }
    let g = &(*graph).inner;
    let external = std::slice::from_raw_parts(queries, query_count);
    let mut internal: Vec<NodeId> = Vec::with_capacity(query_count);
    for &ext in external {
        match g.internal_id(ext) {
            Some(v) => internal.push(v),
            None => return fail(&Error::UnknownNode(ext)),
        }
    }
    let query = NodeSet::from_vec(internal);
    let limit = if node_limit == 0 { 16 } else { node_limit };
    let searched: Result<SearchResult, Error> = match algorithm {
        DmcsAlgorithm::Fpa => fpa(g, &query, true),
        DmcsAlgorithm::FpaNoPruning => fpa(g, &query, false),
        DmcsAlgorithm::Nca => nca(g, &query),
        DmcsAlgorithm::Kcore => kcore_search(g, &query, k),
        DmcsAlgorithm::Highcore => highest_core_search(g, &query),
        DmcsAlgorithm::Exact => exact_dmcs(g, &query, limit),
    };
    match searched {
        Ok(result) => {
            let community = result.community.iter().map(|v| g.external_id(v)).collect();
            *out = Box::into_raw(Box::new(DmcsResult {
                community,
                dm: result.dm,
                cm: result.cm,
                best_iteration: result.best_iteration,
                removals: result.removals,
            }));
            DmcsStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Number of nodes in the community, or 0 for a null handle.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_size(result: *const DmcsResult) -> usize {
    result.as_ref().map_or(0, |r| r.community.len())
}

/// Copies the community's external node ids (ascending) into `buffer`.
///
/// # Safety
/// `result` must be a live handle and `buffer` must hold `capacity` ids.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_nodes(
    result: *const DmcsResult,
    buffer: *mut u64,
    capacity: usize,
) -> DmcsStatus {
    let Some(r) = result.as_ref() else {
        return null_argument();
    };
    if buffer.is_null() {
        return null_argument();
    }
    if capacity < r.community.len() {
        set_last_error("buffer capacity below community size");
        return DmcsStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(r.community.as_ptr(), buffer, r.community.len());
    DmcsStatus::Ok
}

/// Density modularity of the community (NaN for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_dm(result: *const DmcsResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.dm)
}

/// Classic modularity of the community (NaN for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_cm(result: *const DmcsResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.cm)
}

/// Index of the best intermediate subgraph (number of removals applied).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_best_iteration(result: *const DmcsResult) -> usize {
    result.as_ref().map_or(0, |r| r.best_iteration)
}

/// Total nodes removed during the search.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_removals(result: *const DmcsResult) -> usize {
    result.as_ref().map_or(0, |r| r.removals)
}

/// Releases a result handle; accepts null.
///
/// # Safety
/// `result` must have come from `dmcs_search`.
#[no_mangle]
pub unsafe extern "C" fn dmcs_result_free(result: *mut DmcsResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
