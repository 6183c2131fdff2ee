//! Undirected simple graph in CSR form, plus the traversal primitives the
//! search algorithms are built on: connected components, multi-source BFS
//! layers, articulation nodes, and induced-subgraph counts.
//!
//! Node ids are dense `0..n` after ingestion; the original external ids are
//! kept in a bidirectional map. Neighbor lists are sorted so membership tests
//! are binary searches and every iteration order is deterministic.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense internal node id.
pub type NodeId = u32;

/// Sorted, duplicate-free set of internal node ids.
///
/// Iteration is always ascending, which keeps tie-breaks reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet {
    ids: Vec<NodeId>,
}

impl NodeSet {
    pub fn new() -> Self {
        NodeSet { ids: Vec::new() }
    }

    pub fn singleton(v: NodeId) -> Self {
        NodeSet { ids: vec![v] }
    }

    /// Sorts and deduplicates the input.
    pub fn from_vec(mut ids: Vec<NodeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        NodeSet { ids }
    }

    /// The caller guarantees `ids` is strictly ascending.
    pub fn from_sorted(ids: Vec<NodeId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        NodeSet { ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn first(&self) -> Option<NodeId> {
        self.ids.first().copied()
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, NodeId>> {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.ids[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.ids[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.ids[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.ids[i..]);
        out.extend_from_slice(&other.ids[j..]);
        NodeSet { ids: out }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let ids = self.iter().filter(|&v| other.contains(v)).collect();
        NodeSet { ids }
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<T: IntoIterator<Item = NodeId>>(iter: T) -> Self {
        NodeSet::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = NodeId;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, NodeId>>;
    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Minimum hop distances from a source set, partitioned into BFS layers.
///
/// `layer(0)` is the source set itself; unreachable nodes carry no distance
/// and appear in no layer.
#[derive(Debug, Clone)]
pub struct DistanceIndex {
    dist: Vec<Option<u32>>,
    layers: Vec<Vec<NodeId>>,
}

impl DistanceIndex {
    pub fn distance(&self, v: NodeId) -> Option<u32> {
        self.dist[v as usize]
    }

    /// Largest finite distance.
    pub fn max_distance(&self) -> u32 {
        (self.layers.len() - 1) as u32
    }

    /// Nodes at exactly distance `i`, ascending by id.
    pub fn layer(&self, i: u32) -> &[NodeId] {
        &self.layers[i as usize]
    }

    pub fn layers(&self) -> &[Vec<NodeId>] {
        &self.layers
    }
}

/// Edge totals of an induced subgraph `G[S]`.
///
/// `degree_sum` always uses degrees in the full graph, never in the induced
/// subgraph; the modularity formulas depend on that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedCounts {
    pub internal_edges: u64,
    pub internal_weight: f64,
    pub degree_sum: u64,
}

/// Immutable undirected simple graph.
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    /// Parallel to `neighbors`; present only for weighted graphs.
    weights: Option<Vec<f64>>,
    edge_count: usize,
    total_weight: f64,
    external_ids: Vec<u64>,
    external_index: HashMap<u64, NodeId>,
}

impl Graph {
    /// Builds a graph over nodes `0..n` with identity external ids.
    /// Duplicate edges are merged; self-loops are rejected.
    pub fn build(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        let weighted: Vec<(NodeId, NodeId, f64)> =
            edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::assemble(n, weighted, false, (0..n as u64).collect())
    }

    /// Like [`Graph::build`] but with per-edge weights (summed on duplicates).
    pub fn build_weighted(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Graph> {
        Self::assemble(n, edges.to_vec(), true, (0..n as u64).collect())
    }

    /// Parses whitespace-separated `u v [weight]` lines. Lines starting with
    /// `#` and blank lines are skipped. External ids are remapped to dense
    /// internal ids by ascending external id.
    pub fn from_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<Graph> {
        let mut raw: Vec<(u64, u64, f64)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut fields = text.split_whitespace();
            let u = parse_field::<u64>(fields.next(), lineno, "missing source id")?;
            let v = parse_field::<u64>(fields.next(), lineno, "missing target id")?;
            let w = match fields.next() {
                Some(tok) => tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid weight '{tok}'"),
                })?,
                None => 1.0,
            };
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "too many fields".into(),
                });
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            if weighted && (!w.is_finite() || w <= 0.0) {
                return Err(Error::NonPositiveWeight {
                    line: lineno,
                    weight: w,
                });
            }
            raw.push((u, v, if weighted { w } else { 1.0 }));
        }

        let mut external: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        external.sort_unstable();
        external.dedup();
        let index: HashMap<u64, NodeId> = external
            .iter()
            .enumerate()
            .map(|(i, &ext)| (ext, i as NodeId))
            .collect();
        let edges: Vec<(NodeId, NodeId, f64)> = raw
            .into_iter()
            .map(|(u, v, w)| (index[&u], index[&v], w))
            .collect();
        Self::assemble(external.len(), edges, weighted, external)
    }

    fn assemble(
        n: usize,
        edges: Vec<(NodeId, NodeId, f64)>,
        weighted: bool,
        external_ids: Vec<u64>,
    ) -> Result<Graph> {
        debug_assert_eq!(external_ids.len(), n);
        let mut normalized: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    node: external_ids[u as usize],
                });
            }
            if weighted && (!w.is_finite() || w <= 0.0) {
                return Err(Error::NonPositiveWeight { line: 0, weight: w });
            }
            normalized.push((u.min(v), u.max(v), w));
        }
        normalized.sort_unstable_by_key(|&(a, b, _)| (a, b));

        // Merge duplicates, summing weights.
        let mut merged: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(normalized.len());
        for (a, b, w) in normalized {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += w,
                _ => merged.push((a, b, w)),
            }
        }

        let mut degree = vec![0usize; n];
        for &(a, b, _) in &merged {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let m = merged.len();
        let mut neighbors = vec![0 as NodeId; 2 * m];
        let mut weight_col = vec![0f64; 2 * m];
        let mut cursor = offsets.clone();
        for &(a, b, w) in &merged {
            neighbors[cursor[a as usize]] = b;
            weight_col[cursor[a as usize]] = w;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            weight_col[cursor[b as usize]] = w;
            cursor[b as usize] += 1;
        }
        // Sort each adjacency slice by neighbor id, keeping weights aligned.
        for v in 0..n {
            let lo = offsets[v];
            let hi = offsets[v + 1];
            let mut pairs: Vec<(NodeId, f64)> = neighbors[lo..hi]
                .iter()
                .copied()
                .zip(weight_col[lo..hi].iter().copied())
                .collect();
            pairs.sort_unstable_by_key(|&(id, _)| id);
            for (i, (id, w)) in pairs.into_iter().enumerate() {
                neighbors[lo + i] = id;
                weight_col[lo + i] = w;
            }
        }

        let total_weight = if weighted {
            merged.iter().map(|&(_, _, w)| w).sum()
        } else {
            m as f64
        };
        let external_index = external_ids
            .iter()
            .enumerate()
            .map(|(i, &ext)| (ext, i as NodeId))
            .collect();
        Ok(Graph {
            offsets,
            neighbors,
            weights: weighted.then_some(weight_col),
            edge_count: m,
            total_weight,
            external_ids,
            external_index,
        })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges |E|.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of edge weights w_G; equals |E| for unweighted graphs.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn degree(&self, v: NodeId) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    /// Sum of adjacent edge weights; equals `degree` for unweighted graphs.
    pub fn weighted_degree(&self, v: NodeId) -> f64 {
        match &self.weights {
            Some(w) => w[self.offsets[v as usize]..self.offsets[v as usize + 1]]
                .iter()
                .sum(),
            None => self.degree(v) as f64,
        }
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Weights aligned with `neighbors(v)`; `None` for unweighted graphs.
    pub fn neighbor_weights(&self, v: NodeId) -> Option<&[f64]> {
        self.weights
            .as_ref()
            .map(|w| &w[self.offsets[v as usize]..self.offsets[v as usize + 1]])
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn external_id(&self, v: NodeId) -> u64 {
        self.external_ids[v as usize]
    }

    pub fn internal_id(&self, external: u64) -> Option<NodeId> {
        self.external_index.get(&external).copied()
    }

    fn check_nodes(&self, q: &NodeSet) -> Result<()> {
        for v in q {
            if v as usize >= self.node_count() {
                return Err(Error::UnknownNode(v as u64));
            }
        }
        Ok(())
    }

    /// The connected component containing every query node.
    /// Errors if the queries are spread over several components.
    pub fn connected_component_containing(&self, q: &NodeSet) -> Result<NodeSet> {
        if q.is_empty() {
            return Err(Error::invalid("query set is empty"));
        }
        self.check_nodes(q)?;
        let mut seen = vec![false; self.node_count()];
        let start = q.first().unwrap();
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        if q.iter().any(|v| !seen[v as usize]) {
            return Err(Error::QueriesDisconnected);
        }
        let ids = (0..self.node_count() as NodeId)
            .filter(|&v| seen[v as usize])
            .collect();
        Ok(NodeSet::from_sorted(ids))
    }

    /// Multi-source BFS: minimum hop distance from any source.
    pub fn bfs_distances(&self, sources: &NodeSet) -> DistanceIndex {
        assert!(!sources.is_empty(), "bfs_distances requires sources");
        let n = self.node_count();
        let mut dist: Vec<Option<u32>> = vec![None; n];
        let mut queue = VecDeque::with_capacity(sources.len());
        for s in sources {
            dist[s as usize] = Some(0);
            queue.push_back(s);
        }
        let mut max_d = 0u32;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            for &w in self.neighbors(u) {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(du + 1);
                    max_d = max_d.max(du + 1);
                    queue.push_back(w);
                }
            }
        }
        let mut layers: Vec<Vec<NodeId>> = vec![Vec::new(); max_d as usize + 1];
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                layers[*d as usize].push(v as NodeId);
            }
        }
        DistanceIndex { dist, layers }
    }

    /// Articulation nodes of the induced subgraph `G[s]`, via one iterative
    /// DFS with low-links. Errors if `G[s]` is not connected.
    pub fn articulation_nodes(&self, s: &NodeSet) -> Result<NodeSet> {
        if s.is_empty() {
            return Err(Error::DisconnectedInput);
        }
        self.check_nodes(s)?;
        let n = self.node_count();
        let mut in_s = vec![false; n];
        for v in s {
            in_s[v as usize] = true;
        }
        const UNSEEN: u32 = u32::MAX;
        let mut order = vec![UNSEEN; n];
        let mut low = vec![0u32; n];
        let mut is_articulation = vec![false; n];

        let root = s.first().unwrap();
        let mut timer = 0u32;
        order[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        let mut root_children = 0usize;

        struct Frame {
            node: NodeId,
            parent: NodeId,
            next: usize,
        }
        let mut stack = vec![Frame {
            node: root,
            parent: root,
            next: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            let v = frame.node;
            let nbrs = self.neighbors(v);
            if frame.next < nbrs.len() {
                let w = nbrs[frame.next];
                frame.next += 1;
                if !in_s[w as usize] {
                    continue;
                }
                if order[w as usize] == UNSEEN {
                    order[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push(Frame {
                        node: w,
                        parent: v,
                        next: 0,
                    });
                } else if w != frame.parent {
                    low[v as usize] = low[v as usize].min(order[w as usize]);
                }
            } else {
                let done = stack.pop().unwrap();
                if let Some(parent_frame) = stack.last() {
                    let p = parent_frame.node;
                    low[p as usize] = low[p as usize].min(low[done.node as usize]);
                    if p == root {
                        root_children += 1;
                    } else if low[done.node as usize] >= order[p as usize] {
                        is_articulation[p as usize] = true;
                    }
                }
            }
        }
        if timer as usize != s.len() {
            return Err(Error::DisconnectedInput);
        }
        if root_children >= 2 {
            is_articulation[root as usize] = true;
        }
        Ok(s.iter().filter(|&v| is_articulation[v as usize]).collect())
    }

    /// Internal edge count, internal weight, and full-graph degree sum of `G[s]`.
    pub fn induced_counts(&self, s: &NodeSet) -> InducedCounts {
        let mut internal_edges = 0u64;
        let mut internal_weight = 0f64;
        let mut degree_sum = 0u64;
        for v in s {
            degree_sum += self.degree(v) as u64;
            let nbrs = self.neighbors(v);
            for (i, &u) in nbrs.iter().enumerate() {
                if u > v && s.contains(u) {
                    internal_edges += 1;
                    internal_weight += self
                        .neighbor_weights(v)
                        .map_or(1.0, |weights| weights[i]);
                }
            }
        }
        InducedCounts {
            internal_edges,
            internal_weight,
            degree_sum,
        }
    }

    /// Number of connected components (isolated nodes included).
    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([start as NodeId]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.node_count())
            .field("edges", &self.edge_count)
            .field("weighted", &self.is_weighted())
            .finish()
    }
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    missing: &str,
) -> Result<T> {
    let tok = field.ok_or_else(|| Error::Parse {
        line,
        message: missing.into(),
    })?;
    tok.parse::<T>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid token '{tok}'"),
    })
}
