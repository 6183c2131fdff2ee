//! Community goodness functions: classic modularity, density modularity
//! (unweighted and weighted), the one-node-removed variant, the removal
//! gain, and the density ratio used by the fast peeling search.
//!
//! Density modularity is evaluated in the canonical form
//! `l/|C| - d^2/(4m|C|)`; the factor-of-2 spelling is algebraically the
//! same and the tests pin both to one value.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

/// A dimensionless goodness value; finite for every valid input.
pub type Score = f64;

/// Aggregate counts of one community against its host graph.
///
/// For unweighted scoring `internal` is the internal edge count l_C,
/// `degree_sum` the full-graph degree sum d_C, and `total` the edge count
/// |E|. For weighted scoring they hold w_C, the adjacent-weight sums, and
/// w_G respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityCounts {
    pub size: u64,
    pub internal: f64,
    pub degree_sum: f64,
    pub total: f64,
}

impl CommunityCounts {
    pub fn new(size: u64, internal: f64, degree_sum: f64, total: f64) -> Self {
        CommunityCounts {
            size,
            internal,
            degree_sum,
            total,
        }
    }

    /// Unweighted counts of `G[s]`.
    pub fn of(g: &Graph, s: &NodeSet) -> Self {
        let counts = g.induced_counts(s);
        CommunityCounts {
            size: s.len() as u64,
            internal: counts.internal_edges as f64,
            degree_sum: counts.degree_sum as f64,
            total: g.edge_count() as f64,
        }
    }

    /// Weighted counts of `G[s]`: internal weight, adjacent-weight sums, w_G.
    pub fn of_weighted(g: &Graph, s: &NodeSet) -> Self {
        let counts = g.induced_counts(s);
        let degree_sum = s.iter().map(|v| g.weighted_degree(v)).sum();
        CommunityCounts {
            size: s.len() as u64,
            internal: counts.internal_weight,
            degree_sum,
            total: g.total_weight(),
        }
    }
}

/// Per-node stats relative to a community S: the full-graph degree d_v and
/// the number of edges from v into S.
#[derive(Debug, Clone, Copy)]
pub struct NodeStats {
    pub degree: f64,
    pub community_links: f64,
}

impl NodeStats {
    pub fn new(degree: f64, community_links: f64) -> Self {
        NodeStats {
            degree,
            community_links,
        }
    }
}

/// CM(G,C) = (1/2|E|) (2 l_C - d_C^2 / 2|E|).
pub fn classic_modularity(c: &CommunityCounts) -> Result<Score> {
    if c.total <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let two_m = 2.0 * c.total;
    Ok((2.0 * c.internal - c.degree_sum * c.degree_sum / two_m) / two_m)
}

/// DM(G,C) = l_C/|C| - d_C^2 / (4|E||C|).
pub fn density_modularity(c: &CommunityCounts) -> Result<Score> {
    if c.total <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    if c.size == 0 {
        return Err(Error::invalid("community is empty"));
    }
    let size = c.size as f64;
    Ok(c.internal / size - c.degree_sum * c.degree_sum / (4.0 * c.total * size))
}

/// Weighted form: DM(G,C) = (1/|C|) (w_C - d_C^2 / 4 w_G).
pub fn density_modularity_weighted(c: &CommunityCounts) -> Result<Score> {
    if c.total <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    if c.size == 0 {
        return Err(Error::invalid("community is empty"));
    }
    Ok((c.internal - c.degree_sum * c.degree_sum / (4.0 * c.total)) / c.size as f64)
}

/// Density modularity of S with node v taken out:
/// (l_S - k_vS)/(|S|-1) - (d_S - d_v)^2 / (4|E|(|S|-1)).
///
/// Evaluated over the common denominator so that the numerator stays an
/// exact integer: it equals (4|E| l_S - d_S^2) + Lambda_v^S, which makes
/// candidates with equal gain score bitwise-identically and keeps the
/// gain/updated-DM argmaxes in exact agreement.
pub fn updated_density_modularity(c: &CommunityCounts, v: &NodeStats) -> Result<Score> {
    if c.total <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    if c.size < 2 {
        return Err(Error::SingletonCommunity);
    }
    let remaining = (c.size - 1) as f64;
    let d = c.degree_sum - v.degree;
    let numerator = 4.0 * c.total * (c.internal - v.community_links) - d * d;
    Ok(numerator / (4.0 * c.total * remaining))
}

/// Removal gain Lambda_v^S = -4|E| k_vS + 2 d_S d_v - d_v^2.
///
/// Dropping the terms of the updated density modularity that are constant
/// across candidates leaves this expression, so ranking nodes by it agrees
/// with ranking by the updated density modularity.
pub fn dm_gain(c: &CommunityCounts, v: &NodeStats) -> Score {
    -4.0 * c.total * v.community_links + 2.0 * c.degree_sum * v.degree - v.degree * v.degree
}

/// Density ratio Theta_v^S = d_v / k_vS.
///
/// A node with no neighbor in S is disconnected from it and should have
/// been dropped with its component; surfacing that as an error exposes
/// framework bugs instead of masking them with infinities.
pub fn density_ratio(degree: u64, community_links: u64) -> Result<Score> {
    if community_links == 0 {
        return Err(Error::DanglingNode);
    }
    Ok(degree as f64 / community_links as f64)
}

/// CM and DM of S and of S ∪ S*, the union scored from explicit set
/// operations rather than the overlap algebra, so this doubles as an
/// independent check of that algebra.
#[derive(Debug, Clone, Copy)]
pub struct FreeRiderCheck {
    pub cm_s: Score,
    pub cm_union: Score,
    pub dm_s: Score,
    pub dm_union: Score,
}

pub fn free_rider_pair_check(g: &Graph, s: &NodeSet, s_star: &NodeSet) -> Result<FreeRiderCheck> {
    if s.is_empty() || s_star.is_empty() {
        return Err(Error::invalid("free-rider check needs non-empty sets"));
    }
    let union = s.union(s_star);
    let counts_s = CommunityCounts::of(g, s);
    let counts_union = CommunityCounts::of(g, &union);
    Ok(FreeRiderCheck {
        cm_s: classic_modularity(&counts_s)?,
        cm_union: classic_modularity(&counts_union)?,
        dm_s: density_modularity(&counts_s)?,
        dm_union: density_modularity(&counts_union)?,
    })
}
