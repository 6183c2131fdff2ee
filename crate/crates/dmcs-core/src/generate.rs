//! Deterministic synthetic graphs with ground-truth communities.
//!
//! The planted-partition stream is reproducible across platforms and
//! languages: a ChaCha8 generator seeded with `seed_from_u64(seed)` yields
//! one `u64` per node pair, pairs visited in ascending `(u, v)` order with
//! `u < v`, and the edge is kept iff `(draw >> 11) < floor(p * 2^53)`.

use std::io::{BufRead, Write};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

/// Disjoint (for generated data) or overlapping (for loaded data)
/// ground-truth communities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub communities: Vec<NodeSet>,
}

/// Generator selection, mirroring the CLI surface.
#[derive(Debug, Clone)]
pub enum GenConfig {
    RingOfCliques {
        num_cliques: u32,
        clique_size: u32,
    },
    PlantedPartition {
        nodes: u32,
        communities: u32,
        p_in: f64,
        p_out: f64,
        seed: u64,
    },
}

impl GenConfig {
    pub fn generate(&self) -> Result<(Graph, GroundTruth)> {
        match *self {
            GenConfig::RingOfCliques {
                num_cliques,
                clique_size,
            } => ring_of_cliques(num_cliques, clique_size),
            GenConfig::PlantedPartition {
                nodes,
                communities,
                p_in,
                p_out,
                seed,
            } => planted_partition(nodes, communities, p_in, p_out, seed),
        }
    }
}

/// `m` cliques of `s` nodes in a ring: node 0 of clique i links to node 1 of
/// clique i+1 (mod m). Edge count is m·s(s-1)/2 + m; the cliques are the
/// ground truth.
pub fn ring_of_cliques(num_cliques: u32, clique_size: u32) -> Result<(Graph, GroundTruth)> {
    if num_cliques < 3 {
        return Err(Error::invalid("ring of cliques needs at least 3 cliques"));
    }
    if clique_size < 3 {
        return Err(Error::invalid("cliques need at least 3 nodes"));
    }
    let n = (num_cliques * clique_size) as usize;
    let mut edges = Vec::with_capacity(
        n * (clique_size as usize - 1) / 2 + num_cliques as usize,
    );
    let mut communities = Vec::with_capacity(num_cliques as usize);
    for c in 0..num_cliques {
        let base = c * clique_size;
        for i in 0..clique_size {
            for j in (i + 1)..clique_size {
                edges.push((base + i, base + j));
            }
        }
        let next_base = ((c + 1) % num_cliques) * clique_size;
        edges.push((base, next_base + 1));
        communities.push(NodeSet::from_sorted((base..base + clique_size).collect()));
    }
    let graph = Graph::build(n, &edges)?;
    Ok((graph, GroundTruth { communities }))
}

/// Planted partition over `nodes` split into `communities` contiguous
/// blocks (the remainder spread one node each over the first blocks):
/// within-block pairs drawn with `p_in`, cross-block pairs with `p_out`.
pub fn planted_partition(
    nodes: u32,
    communities: u32,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(Graph, GroundTruth)> {
    if nodes == 0 {
        return Err(Error::invalid("graph needs at least one node"));
    }
    if communities == 0 || communities > nodes {
        return Err(Error::invalid(
            "community count must be between 1 and the node count",
        ));
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("{name} must lie in [0, 1]")));
        }
    }

    let base = nodes / communities;
    let remainder = nodes % communities;
    let mut block_of = Vec::with_capacity(nodes as usize);
    let mut truth = Vec::with_capacity(communities as usize);
    let mut next = 0u32;
    for b in 0..communities {
        let size = base + u32::from(b < remainder);
        truth.push(NodeSet::from_sorted((next..next + size).collect()));
        for _ in 0..size {
            block_of.push(b);
        }
        next += size;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep_in = bernoulli_threshold(p_in);
    let keep_out = bernoulli_threshold(p_out);
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in (u + 1)..nodes {
            let threshold = if block_of[u as usize] == block_of[v as usize] {
                keep_in
            } else {
                keep_out
            };
            if (rng.next_u64() >> 11) < threshold {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::build(nodes as usize, &edges)?;
    Ok((graph, GroundTruth { communities: truth }))
}

/// floor(p * 2^53); a 53-bit draw below it succeeds with probability p.
fn bernoulli_threshold(p: f64) -> u64 {
    (p * 9007199254740992.0) as u64
}

/// Writes an edge list, one `u v` pair per line in ascending order, using
/// external ids.
pub fn write_edge_list<W: Write>(mut writer: W, graph: &Graph) -> Result<()> {
    for v in 0..graph.node_count() as NodeId {
        for &u in graph.neighbors(v) {
            if u > v {
                writeln!(writer, "{} {}", graph.external_id(v), graph.external_id(u))?;
            }
        }
    }
    Ok(())
}

/// Writes ground truth, one community per line of space-separated external ids.
pub fn write_ground_truth<W: Write>(
    mut writer: W,
    truth: &GroundTruth,
    graph: &Graph,
) -> Result<()> {
    for community in &truth.communities {
        let line: Vec<String> = community
            .iter()
            .map(|v| graph.external_id(v).to_string())
            .collect();
        writeln!(writer, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads a ground-truth file: one community per line, space-separated
/// external ids; comment lines start with '#'.
pub fn read_ground_truth<R: BufRead>(reader: R) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let ids = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid node id '{tok}'"),
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        out.push(ids);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_counts_match() {
        let (g, truth) = ring_of_cliques(30, 6).unwrap();
        assert_eq!(g.node_count(), 180);
        assert_eq!(g.edge_count(), 480);
        assert_eq!(truth.communities.len(), 30);
        let (g, _) = ring_of_cliques(3, 3).unwrap();
        assert_eq!(g.node_count(), 9);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn ring_rejects_bad_parameters() {
        assert!(ring_of_cliques(3, 2).is_err());
        assert!(ring_of_cliques(2, 6).is_err());
    }

    #[test]
    fn ring_degree_profile() {
        // Every degree is s-1 or s, with exactly 2m nodes of degree s.
        let (g, _) = ring_of_cliques(5, 4).unwrap();
        let mut bumped = 0;
        for v in 0..g.node_count() as NodeId {
            let d = g.degree(v);
            assert!(d == 3 || d == 4);
            if d == 4 {
                bumped += 1;
            }
        }
        assert_eq!(bumped, 10);
    }

    #[test]
    fn planted_extreme_probabilities() {
        let (g, truth) = planted_partition(12, 3, 1.0, 0.0, 1).unwrap();
        // Disjoint cliques matching the blocks exactly.
        assert_eq!(g.edge_count(), 3 * 6);
        for block in &truth.communities {
            for u in block {
                for v in block {
                    if u < v {
                        assert!(g.has_edge(u, v));
                    }
                }
            }
        }
        let (g, _) = planted_partition(12, 3, 0.0, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn planted_is_reproducible() {
        let (a, _) = planted_partition(60, 4, 0.8, 0.02, 7).unwrap();
        let (b, _) = planted_partition(60, 4, 0.8, 0.02, 7).unwrap();
        let mut text_a = Vec::new();
        let mut text_b = Vec::new();
        write_edge_list(&mut text_a, &a).unwrap();
        write_edge_list(&mut text_b, &b).unwrap();
        assert_eq!(text_a, text_b);
        let (c, _) = planted_partition(60, 4, 0.8, 0.02, 8).unwrap();
        let mut text_c = Vec::new();
        write_edge_list(&mut text_c, &c).unwrap();
        assert_ne!(text_a, text_c);
    }

    #[test]
    fn planted_blocks_spread_remainder() {
        let (_, truth) = planted_partition(10, 4, 0.5, 0.1, 3).unwrap();
        let sizes: Vec<usize> = truth.communities.iter().map(NodeSet::len).collect();
        assert_eq!(sizes, vec![3, 3, 2, 2]);
    }

    #[test]
    fn planted_rejects_bad_parameters() {
        assert!(planted_partition(10, 0, 0.5, 0.1, 1).is_err());
        assert!(planted_partition(10, 11, 0.5, 0.1, 1).is_err());
        assert!(planted_partition(10, 2, 1.5, 0.1, 1).is_err());
        assert!(planted_partition(10, 2, 0.5, -0.1, 1).is_err());
    }

    #[test]
    fn planted_mixing_fraction_tracks_expectation() {
        // With g blocks of n/g nodes, the cross-edge fraction approximates
        // p_out(n - n/g) / (p_in(n/g - 1) + p_out(n - n/g)).
        let (n, g, p_in, p_out) = (200u32, 4u32, 0.5, 0.05);
        let block = (n / g) as f64;
        let expected = p_out * (n as f64 - block)
            / (p_in * (block - 1.0) + p_out * (n as f64 - block));
        let mut fractions = Vec::new();
        for seed in 0..10u64 {
            let (graph, truth) = planted_partition(n, g, p_in, p_out, seed).unwrap();
            let block_of: Vec<usize> = {
                let mut owner = vec![0usize; n as usize];
                for (b, community) in truth.communities.iter().enumerate() {
                    for v in community {
                        owner[v as usize] = b;
                    }
                }
                owner
            };
            let mut cross = 0u64;
            for v in 0..n {
                for &u in graph.neighbors(v) {
                    if u > v && block_of[v as usize] != block_of[u as usize] {
                        cross += 1;
                    }
                }
            }
            fractions.push(cross as f64 / graph.edge_count() as f64);
        }
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!(
            (mean - expected).abs() < 0.05,
            "mean cross fraction {mean} vs expected {expected}"
        );
    }

    #[test]
    fn config_dispatch_matches_direct_calls() {
        let (direct, _) = ring_of_cliques(4, 3).unwrap();
        let (via_config, _) = GenConfig::RingOfCliques {
            num_cliques: 4,
            clique_size: 3,
        }
        .generate()
        .unwrap();
        assert_eq!(direct.edge_count(), via_config.edge_count());

        let config = GenConfig::PlantedPartition {
            nodes: 40,
            communities: 4,
            p_in: 0.7,
            p_out: 0.05,
            seed: 13,
        };
        let (a, _) = config.generate().unwrap();
        let (b, _) = planted_partition(40, 4, 0.7, 0.05, 13).unwrap();
        assert_eq!(a.edge_count(), b.edge_count());
        assert!(GenConfig::PlantedPartition {
            nodes: 10,
            communities: 3,
            p_in: 2.0,
            p_out: 0.0,
            seed: 0,
        }
        .generate()
        .is_err());
    }

    #[test]
    fn ground_truth_round_trip() {
        let (g, truth) = ring_of_cliques(3, 3).unwrap();
        let mut buffer = Vec::new();
        write_ground_truth(&mut buffer, &truth, &g).unwrap();
        let read = read_ground_truth(buffer.as_slice()).unwrap();
        assert_eq!(read.len(), 3);
        assert_eq!(read[0], vec![0, 1, 2]);
        assert_eq!(read[2], vec![6, 7, 8]);
    }

    #[test]
    fn edge_list_round_trip() {
        let (g, _) = planted_partition(30, 3, 0.6, 0.05, 11).unwrap();
        let mut buffer = Vec::new();
        write_edge_list(&mut buffer, &g).unwrap();
        let reloaded = Graph::from_edge_list(buffer.as_slice(), false).unwrap();
        assert_eq!(reloaded.node_count(), g.node_count());
        assert_eq!(reloaded.edge_count(), g.edge_count());
        for v in 0..g.node_count() as NodeId {
            assert_eq!(g.neighbors(v), reloaded.neighbors(v));
        }
    }
}
