//! Comparison searchers: fixed-k core peeling, highest-order core, and an
//! exhaustive exact maximizer for desk-scale instances.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::modularity::{density_modularity, CommunityCounts};
use crate::search::{result_from_set, Algorithm, SearchResult};

/// Core numbers and the peeling order that produced them.
#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    pub coreness: Vec<u32>,
    pub order: Vec<NodeId>,
}

/// Bucket peeling: repeatedly remove a minimum-degree node.
pub fn core_decomposition(g: &Graph) -> CoreDecomposition {
    let n = g.node_count();
    let mut degree: Vec<u32> = (0..n as NodeId).map(|v| g.degree(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v] as usize].push(v as NodeId);
    }
    let mut removed = vec![false; n];
    let mut coreness = vec![0u32; n];
    let mut order = Vec::with_capacity(n);
    let mut current = 0u32;
    let mut cursor = 0usize;
    for _ in 0..n {
        // Find the lowest non-empty bucket at or below the live degrees.
        while cursor < buckets.len() && buckets[cursor].is_empty() {
            cursor += 1;
        }
        // Entries can be stale; skip nodes whose degree has since dropped.
        let v = loop {
            while cursor < buckets.len() && buckets[cursor].is_empty() {
                cursor += 1;
            }
            let v = buckets[cursor].pop().unwrap();
            if !removed[v as usize] && degree[v as usize] as usize == cursor {
                break v;
            }
        };
        current = current.max(cursor as u32);
        coreness[v as usize] = current;
        removed[v as usize] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                degree[u as usize] -= 1;
                buckets[degree[u as usize] as usize].push(u);
                if (degree[u as usize] as usize) < cursor {
                    cursor = degree[u as usize] as usize;
                }
            }
        }
    }
    CoreDecomposition { coreness, order }
}

/// Minimum degree of the induced subgraph `G[s]`, `None` when empty.
pub fn min_induced_degree(g: &Graph, s: &NodeSet) -> Option<u32> {
    s.iter()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| s.contains(u))
                .count() as u32
        })
        .min()
}

/// Iteratively deletes nodes of degree below `k`, then returns the surviving
/// connected component holding every query node.
pub fn kcore_search(g: &Graph, q: &NodeSet, k: u32) -> Result<SearchResult> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    g.connected_component_containing(q)?;

    let n = g.node_count();
    let mut degree: Vec<u32> = (0..n as NodeId).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<NodeId> = (0..n as NodeId).filter(|&v| degree[v as usize] < k).collect();
    for &v in &queue {
        removed[v as usize] = true;
    }
    let mut peeled = 0usize;
    while let Some(v) = queue.pop() {
        peeled += 1;
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                degree[u as usize] -= 1;
                if degree[u as usize] < k {
                    removed[u as usize] = true;
                    queue.push(u);
                }
            }
        }
    }
    if q.iter().any(|v| removed[v as usize]) {
        return Err(Error::NoKCoreCommunity { k });
    }

    // Component of the queries within the surviving subgraph.
    let start = q.first().unwrap();
    let mut seen = vec![false; n];
    seen[start as usize] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if !removed[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    if q.iter().any(|v| !seen[v as usize]) {
        return Err(Error::QueriesSplitAcrossCores { k });
    }
    let community: NodeSet = (0..n as NodeId).filter(|&v| seen[v as usize]).collect();
    result_from_set(g, community, Algorithm::Kcore, peeled)
}

/// Largest `k` for which a k-core community holds all queries; falls back to
/// the plain connected component when even k = 1 fails.
pub fn highest_core_search(g: &Graph, q: &NodeSet) -> Result<SearchResult> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let component = g.connected_component_containing(q)?;
    let decomposition = core_decomposition(g);
    let k_max = q
        .iter()
        .map(|v| decomposition.coreness[v as usize])
        .min()
        .unwrap();
    for k in (1..=k_max).rev() {
        match kcore_search(g, q, k) {
            Ok(mut result) => {
                result.algorithm = Algorithm::Highcore;
                return Ok(result);
            }
            Err(Error::NoKCoreCommunity { .. }) | Err(Error::QueriesSplitAcrossCores { .. }) => {}
            Err(other) => return Err(other),
        }
    }
    result_from_set(g, component, Algorithm::Highcore, 0)
}

/// Exact maximizer: enumerates every connected node set containing the
/// queries inside their component (refusing components larger than
/// `node_limit`) and returns the best-scoring one. Ties go to the smaller
/// set, then to the lexicographically smaller one.
pub fn exact_dmcs(g: &Graph, q: &NodeSet, node_limit: usize) -> Result<SearchResult> {
    if q.is_empty() {
        return Err(Error::invalid("query set is empty"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if node_limit > 64 {
        return Err(Error::invalid("exact search supports at most 64 nodes"));
    }
    let component = g.connected_component_containing(q)?;
    if component.len() > node_limit {
        return Err(Error::ComponentTooLarge {
            size: component.len(),
            limit: node_limit,
        });
    }

    let local = LocalSubgraph::new(g, &component);
    let root = local.index_of(q.first().unwrap());
    let query_mask: u64 = q.iter().map(|v| 1u64 << local.index_of(v)).sum();
    let m = g.edge_count() as f64;

    let mut best: Option<(f64, u32, u64)> = None;
    let mut visit = |mask: u64, internal: u64, degree_sum: u64| {
        if mask & query_mask != query_mask {
            return;
        }
        let size = mask.count_ones();
        let counts = CommunityCounts::new(size as u64, internal as f64, degree_sum as f64, m);
        let dm = density_modularity(&counts).expect("graph has edges");
        let better = match best {
            None => true,
            Some((best_dm, best_size, best_mask)) => {
                dm > best_dm
                    || (dm == best_dm
                        && (size < best_size
                            || (size == best_size && lex_smaller(mask, best_mask))))
            }
        };
        if better {
            best = Some((dm, size, mask));
        }
    };
    enumerate_from(
        &local.adjacency,
        1u64 << root,
        local.adjacency[root as usize],
        1u64 << root,
        local.adjacency[root as usize].count_ones() as u64,
        0,
        &mut visit,
    );

    let (_, _, mask) = best.expect("the component itself always qualifies");
    let community = local.to_node_set(mask);
    result_from_set(g, community, Algorithm::Exact, 0)
}

/// All connected node sets containing `root` within its component, for
/// cross-checking the oracle. The component must have at most 64 nodes.
pub fn enumerate_connected_subsets(g: &Graph, root: NodeId) -> Result<Vec<NodeSet>> {
    let component = g.connected_component_containing(&NodeSet::singleton(root))?;
    if component.len() > 64 {
        return Err(Error::ComponentTooLarge {
            size: component.len(),
            limit: 64,
        });
    }
    let local = LocalSubgraph::new(g, &component);
    let r = local.index_of(root);
    let mut out = Vec::new();
    let mut visit = |mask: u64, _: u64, _: u64| out.push(local.to_node_set(mask));
    enumerate_from(
        &local.adjacency,
        1u64 << r,
        local.adjacency[r as usize],
        1u64 << r,
        local.adjacency[r as usize].count_ones() as u64,
        0,
        &mut visit,
    );
    Ok(out)
}

/// Bitmask view of an induced component, indices following ascending ids.
/// Every neighbor of a component node is itself in the component, so the
/// popcount of an adjacency mask is the node's full-graph degree.
struct LocalSubgraph {
    nodes: Vec<NodeId>,
    adjacency: Vec<u64>,
}

impl LocalSubgraph {
    fn new(graph: &Graph, component: &NodeSet) -> Self {
        let nodes: Vec<NodeId> = component.as_slice().to_vec();
        let adjacency = nodes
            .iter()
            .map(|&v| {
                let mut mask = 0u64;
                for &u in graph.neighbors(v) {
                    if let Ok(i) = nodes.binary_search(&u) {
                        mask |= 1u64 << i;
                    }
                }
                mask
            })
            .collect();
        LocalSubgraph { nodes, adjacency }
    }

    fn index_of(&self, v: NodeId) -> u32 {
        self.nodes.binary_search(&v).expect("node in component") as u32
    }

    fn to_node_set(&self, mask: u64) -> NodeSet {
        let ids = (0..self.nodes.len())
            .filter(|&i| mask & (1u64 << i) != 0)
            .map(|i| self.nodes[i])
            .collect();
        NodeSet::from_sorted(ids)
    }
}

/// Frontier-expansion enumeration of connected supersets. Each call visits
/// `seed` and then branches on the frontier nodes in ascending order; after
/// a branch returns its node is banned, so every connected set is produced
/// exactly once. `internal` and `degree_sum` are carried incrementally.
fn enumerate_from<F: FnMut(u64, u64, u64)>(
    adjacency: &[u64],
    seed: u64,
    neighborhood: u64,
    banned: u64,
    degree_sum: u64,
    internal: u64,
    visit: &mut F,
) {
    visit(seed, internal, degree_sum);
    let mut frontier = neighborhood & !seed & !banned;
    let mut banned_here = banned;
    while frontier != 0 {
        let bit = frontier & frontier.wrapping_neg();
        frontier ^= bit;
        let v = bit.trailing_zeros() as usize;
        enumerate_from(
            adjacency,
            seed | bit,
            neighborhood | adjacency[v],
            banned_here,
            degree_sum + adjacency[v].count_ones() as u64,
            internal + (adjacency[v] & seed).count_ones() as u64,
            visit,
        );
        banned_here |= bit;
    }
}

/// Lexicographic order on the ascending id lists encoded by two equal-size
/// masks: the one owning the lowest differing bit starts with the smaller id.
fn lex_smaller(a: u64, b: u64) -> bool {
    debug_assert_eq!(a.count_ones(), b.count_ones());
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let lowest = diff & diff.wrapping_neg();
    a & lowest != 0
}
