//! The top-down greedy search framework and its two instantiations:
//!
//! * NCA recomputes articulation nodes every round and removes the
//!   non-articulation node with the largest removal gain.
//! * FPA peels BFS layers from the outside in, extracting nodes by density
//!   ratio; because the ratio of a node only changes when a neighbor is
//!   removed, each removal triggers O(deg) ordered-set re-keys and the whole
//!   peel stays log-linear.
//!
//! Both track the density modularity of every intermediate subgraph and
//! return the best one. Multiple query nodes are first joined into a
//! protected connector set along shortest paths from a pivot query.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{DistanceIndex, Graph, NodeId, NodeSet};
use crate::modularity::{classic_modularity, density_modularity, CommunityCounts, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nca,
    Fpa,
    Kcore,
    Highcore,
    Exact,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self {
            Algorithm::Nca => "nca",
            Algorithm::Fpa => "fpa",
            Algorithm::Kcore => "kcore",
            Algorithm::Highcore => "highcore",
            Algorithm::Exact => "exact",
        };
        f.write_str(tag)
    }
}

/// Outcome of one search: the chosen community with its scores, which
/// intermediate subgraph it was (by number of removals), and how many nodes
/// the search removed in total.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub community: NodeSet,
    pub dm: Score,
    pub cm: Score,
    pub algorithm: Algorithm,
    pub best_iteration: usize,
    pub removals: usize,
}

/// Mutable working subgraph during peeling.
///
/// Tracks the internal edge count, the fixed-degree sum, and per-node
/// internal degrees incrementally, so a removal costs O(deg). Protected
/// nodes (queries plus connectors) can never be removed.
#[derive(Clone)]
pub struct CommunityState<'g> {
    graph: &'g Graph,
    in_set: Vec<bool>,
    protected: Vec<bool>,
    internal_degree: Vec<u32>,
    size: usize,
    internal_edges: u64,
    degree_sum: u64,
}

impl<'g> CommunityState<'g> {
    pub fn new(graph: &'g Graph, members: &NodeSet, protected: &NodeSet) -> Result<Self> {
        if !protected.is_subset_of(members) {
            return Err(Error::invalid("protected nodes must be members"));
        }
        let n = graph.node_count();
        let mut in_set = vec![false; n];
        for v in members {
            in_set[v as usize] = true;
        }
        let mut protected_flags = vec![false; n];
        for v in protected {
            protected_flags[v as usize] = true;
        }
        let mut internal_degree = vec![0u32; n];
        let mut degree_sum = 0u64;
        let mut twice_internal = 0u64;
        for v in members {
            degree_sum += graph.degree(v) as u64;
            let k = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| in_set[u as usize])
                .count() as u32;
            internal_degree[v as usize] = k;
            twice_internal += k as u64;
        }
        Ok(CommunityState {
            graph,
            in_set,
            protected: protected_flags,
            internal_degree,
            size: members.len(),
            internal_edges: twice_internal / 2,
            degree_sum,
        })
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.in_set[v as usize]
    }

    pub fn is_protected(&self, v: NodeId) -> bool {
        self.protected[v as usize]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn internal_edges(&self) -> u64 {
        self.internal_edges
    }

    pub fn degree_sum(&self) -> u64 {
        self.degree_sum
    }

    /// Edges from v into the current member set.
    pub fn internal_degree(&self, v: NodeId) -> u32 {
        self.internal_degree[v as usize]
    }

    pub fn members(&self) -> NodeSet {
        (0..self.graph.node_count() as NodeId)
            .filter(|&v| self.in_set[v as usize])
            .collect()
    }

    pub fn counts(&self) -> CommunityCounts {
        CommunityCounts::new(
            self.size as u64,
            self.internal_edges as f64,
            self.degree_sum as f64,
            self.graph.edge_count() as f64,
        )
    }

    pub fn density_modularity(&self) -> Score {
        density_modularity(&self.counts()).expect("graph has edges and community is non-empty")
    }

    /// Removes a member, updating all counters in O(deg(v)).
    pub fn remove_node(&mut self, v: NodeId) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::invalid(format!("node {v} is not a member")));
        }
        if self.is_protected(v) {
            return Err(Error::ProtectedNode(v));
        }
        self.internal_edges -= self.internal_degree[v as usize] as u64;
        self.in_set[v as usize] = false;
        for &u in self.graph.neighbors(v) {
            if self.in_set[u as usize] {
                self.internal_degree[u as usize] -= 1;
            }
        }
        self.internal_degree[v as usize] = 0;
        self.degree_sum -= self.graph.degree(v) as u64;
        self.size -= 1;
        Ok(())
    }
}

/// Joins multiple query nodes into one connected protected set: shortest
/// paths from the pivot (lowest-id) query to every other query, merged.
/// BFS parents resolve to the lowest-id node of the previous level, so the
/// connector set is deterministic.
pub fn connect_queries(g: &Graph, q: &NodeSet) -> Result<NodeSet> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    g.connected_component_containing(q)?;
    if q.len() == 1 {
        return Ok(q.clone());
    }
    let pivot = q.first().unwrap();
    let n = g.node_count();
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut visited = vec![false; n];
    visited[pivot as usize] = true;
    let mut frontier = vec![pivot];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    parent[w as usize] = Some(u);
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    let mut keep = vec![false; n];
    for target in q {
        let mut v = target;
        while !keep[v as usize] {
            keep[v as usize] = true;
            match parent[v as usize] {
                Some(p) => v = p,
                None => break,
            }
        }
    }
    Ok((0..n as NodeId).filter(|&v| keep[v as usize]).collect())
}

/// Candidate ordering for the fast peel: density ratio descending, node id
/// ascending. Ratios are compared exactly by cross-multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ThetaKey {
    degree: u32,
    links: u32,
    node: NodeId,
}

impl ThetaKey {
    fn new(degree: u32, links: u32, node: NodeId) -> Self {
        debug_assert!(links > 0, "candidate must have a neighbor in S");
        ThetaKey {
            degree,
            links,
            node,
        }
    }
}

impl Ord for ThetaKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.degree as u64 * other.links as u64;
        let rhs = other.degree as u64 * self.links as u64;
        rhs.cmp(&lhs).then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for ThetaKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Non-articulation cancellation: repeatedly drop the removable node with
/// the largest gain, breaking ties toward nodes farther from the queries,
/// then toward lower ids. Returns the best intermediate, earliest on ties.
pub fn nca(g: &Graph, q: &NodeSet) -> Result<SearchResult> {
    Ok(nca_with_trace(g, q)?.0)
}

/// Like [`nca`] but also returns the removal order.
pub fn nca_with_trace(g: &Graph, q: &NodeSet) -> Result<(SearchResult, Vec<NodeId>)> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let component = g.connected_component_containing(q)?;
    let dindex = g.bfs_distances(q);
    let mut state = CommunityState::new(g, &component, q)?;
    let m = g.edge_count() as i128;

    let mut order: Vec<NodeId> = Vec::new();
    let mut best_dm = state.density_modularity();
    let mut best_iteration = 0usize;
    loop {
        let members = state.members();
        let articulation = g.articulation_nodes(&members)?;
        let mut chosen: Option<(i128, u32, NodeId)> = None;
        for v in &members {
            if state.is_protected(v) || articulation.contains(v) {
                continue;
            }
            let degree = g.degree(v) as i128;
            let links = state.internal_degree(v) as i128;
            let gain = -4 * m * links + 2 * state.degree_sum() as i128 * degree - degree * degree;
            let dist = dindex.distance(v).expect("members lie in the query component");
            let better = match chosen {
                None => true,
                Some((best_gain, best_dist, _)) => {
                    gain > best_gain || (gain == best_gain && dist > best_dist)
                }
            };
            if better {
                chosen = Some((gain, dist, v));
            }
        }
        let Some((_, _, v)) = chosen else { break };
        state.remove_node(v)?;
        order.push(v);
        let dm = state.density_modularity();
        if dm > best_dm {
            best_dm = dm;
            best_iteration = order.len();
        }
    }
    let result = rebuild_result(g, &component, &order, best_iteration, best_dm, Algorithm::Nca)?;
    Ok((result, order))
}

/// Fast peel: strip BFS layers outermost-first, peeling within the current
/// layer by density ratio. With `pruning` the whole-layer subgraphs are
/// scored first and fine-grained peeling runs only on the outermost layer
/// of the best one. Equal-scoring later states win, per the update rule.
pub fn fpa(g: &Graph, q: &NodeSet, pruning: bool) -> Result<SearchResult> {
    Ok(fpa_with_trace(g, q, pruning)?.0)
}

/// Like [`fpa`] but also returns the removal order.
pub fn fpa_with_trace(
    g: &Graph,
    q: &NodeSet,
    pruning: bool,
) -> Result<(SearchResult, Vec<NodeId>)> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let component = g.connected_component_containing(q)?;
    let protected = connect_queries(g, q)?;
    let dindex = g.bfs_distances(&protected);
    let mut state = CommunityState::new(g, &component, &protected)?;

    let mut order: Vec<NodeId> = Vec::new();
    let mut best_dm = state.density_modularity();
    let mut best_iteration = 0usize;
    let max_d = dindex.max_distance();

    let fine_layers: Vec<u32> = if pruning && max_d >= 1 {
        let strips = best_strip_count(&state, &dindex);
        for i in 0..strips {
            let layer = max_d - i as u32;
            for &v in dindex.layer(layer) {
                state.remove_node(v)?;
                order.push(v);
            }
        }
        best_dm = state.density_modularity();
        best_iteration = order.len();
        let keep_max = max_d - strips as u32;
        if keep_max >= 1 {
            vec![keep_max]
        } else {
            Vec::new()
        }
    } else {
        (1..=max_d).rev().collect()
    };

    for layer in fine_layers {
        peel_layer(
            g,
            &mut state,
            &dindex,
            layer,
            &mut order,
            &mut best_dm,
            &mut best_iteration,
        )?;
    }
    let result = rebuild_result(g, &component, &order, best_iteration, best_dm, Algorithm::Fpa)?;
    Ok((result, order))
}

/// Scores the nested subgraphs obtained by stripping whole outermost layers
/// and returns the one with the largest density modularity, preferring the
/// largest subgraph on ties. Fine-grained peeling then continues on the
/// outermost layer of the returned state.
pub fn layer_prune<'g>(
    mut state: CommunityState<'g>,
    dindex: &DistanceIndex,
) -> Result<CommunityState<'g>> {
    let strips = best_strip_count(&state, dindex);
    let max_d = dindex.max_distance();
    for i in 0..strips {
        let layer = max_d - i as u32;
        for &v in dindex.layer(layer) {
            state.remove_node(v)?;
        }
    }
    Ok(state)
}

fn best_strip_count(state: &CommunityState<'_>, dindex: &DistanceIndex) -> usize {
    let mut scratch = state.clone();
    let max_d = dindex.max_distance();
    let mut best_strips = 0usize;
    let mut best_dm = scratch.density_modularity();
    for i in 0..max_d as usize {
        let layer = max_d - i as u32;
        for &v in dindex.layer(layer) {
            scratch
                .remove_node(v)
                .expect("outer layers are unprotected members");
        }
        let dm = scratch.density_modularity();
        if dm > best_dm {
            best_dm = dm;
            best_strips = i + 1;
        }
    }
    best_strips
}

fn peel_layer(
    g: &Graph,
    state: &mut CommunityState<'_>,
    dindex: &DistanceIndex,
    layer: u32,
    order: &mut Vec<NodeId>,
    best_dm: &mut f64,
    best_iteration: &mut usize,
) -> Result<()> {
    let mut cand: BTreeSet<ThetaKey> = BTreeSet::new();
    for &v in dindex.layer(layer) {
        if !state.contains(v) {
            continue;
        }
        let links = state.internal_degree(v);
        if links == 0 {
            return Err(Error::DanglingNode);
        }
        cand.insert(ThetaKey::new(g.degree(v), links, v));
    }
    while let Some(key) = cand.pop_first() {
        let v = key.node;
        // Capture same-layer neighbors before their ratios change.
        let mut touched: Vec<NodeId> = Vec::new();
        for &u in g.neighbors(v) {
            if state.contains(u) && dindex.distance(u) == Some(layer) {
                let present =
                    cand.remove(&ThetaKey::new(g.degree(u), state.internal_degree(u), u));
                debug_assert!(present, "live same-layer neighbors stay in the candidate set");
                touched.push(u);
            }
        }
        state.remove_node(v)?;
        order.push(v);
        for u in touched {
            let links = state.internal_degree(u);
            debug_assert!(links > 0, "a shallower neighbor always remains");
            cand.insert(ThetaKey::new(g.degree(u), links, u));
        }
        let dm = state.density_modularity();
        if dm >= *best_dm {
            *best_dm = dm;
            *best_iteration = order.len();
        }
    }
    Ok(())
}

/// Reconstructs the best intermediate from the removal prefix and verifies
/// its scores from scratch.
fn rebuild_result(
    g: &Graph,
    component: &NodeSet,
    order: &[NodeId],
    best_iteration: usize,
    best_dm: f64,
    algorithm: Algorithm,
) -> Result<SearchResult> {
    let mut removed = vec![false; g.node_count()];
    for &v in &order[..best_iteration] {
        removed[v as usize] = true;
    }
    let community: NodeSet = component.iter().filter(|&v| !removed[v as usize]).collect();
    let counts = CommunityCounts::of(g, &community);
    let dm = density_modularity(&counts)?;
    let cm = classic_modularity(&counts)?;
    debug_assert_eq!(dm, best_dm, "incremental counters drifted from recount");
    Ok(SearchResult {
        community,
        dm,
        cm,
        algorithm,
        best_iteration,
        removals: order.len(),
    })
}

/// Builds a [`SearchResult`] for a community found by a non-peeling
/// searcher (used by the baseline algorithms).
pub(crate) fn result_from_set(
    g: &Graph,
    community: NodeSet,
    algorithm: Algorithm,
    removals: usize,
) -> Result<SearchResult> {
    let counts = CommunityCounts::of(g, &community);
    Ok(SearchResult {
        dm: density_modularity(&counts)?,
        cm: classic_modularity(&counts)?,
        community,
        algorithm,
        best_iteration: 0,
        removals,
    })
}
