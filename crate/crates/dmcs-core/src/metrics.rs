//! Accuracy of a found community against ground truth, via the binary
//! membership partition: every node is labeled in/out for the prediction
//! and for the truth, and the two labelings are compared with NMI, ARI,
//! and F-score.
//!
//! NMI uses natural logs and the average normalization 2·I/(H1+H2), with
//! degenerate zero-entropy partitions scored 1 when the partitions are
//! identical and 0 otherwise.

use crate::error::{Error, Result};
use crate::graph::NodeSet;

/// 2x2 membership contingency over n nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contingency {
    /// In both prediction and truth.
    pub both: u64,
    /// In the prediction only.
    pub pred_only: u64,
    /// In the truth only.
    pub truth_only: u64,
    /// In neither.
    pub neither: u64,
}

impl Contingency {
    pub fn total(&self) -> u64 {
        self.both + self.pred_only + self.truth_only + self.neither
    }

    /// The two binary partitions coincide (up to label swap).
    fn partitions_identical(&self) -> bool {
        (self.pred_only == 0 && self.truth_only == 0)
            || (self.both == 0 && self.neither == 0)
    }
}

/// Scores of one prediction against one ground-truth community, plus the
/// index of the truth it was matched with.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct EvalReport {
    pub nmi: f64,
    pub ari: f64,
    pub fscore: f64,
    pub matched_truth: usize,
}

/// Counts the 2x2 membership table of `pred` vs `truth` over `0..n`.
pub fn binarize(pred: &NodeSet, truth: &NodeSet, n: usize) -> Contingency {
    debug_assert!(pred.iter().all(|v| (v as usize) < n));
    debug_assert!(truth.iter().all(|v| (v as usize) < n));
    let both = pred.iter().filter(|&v| truth.contains(v)).count() as u64;
    let pred_only = pred.len() as u64 - both;
    let truth_only = truth.len() as u64 - both;
    let neither = n as u64 - both - pred_only - truth_only;
    Contingency {
        both,
        pred_only,
        truth_only,
        neither,
    }
}

fn entropy(parts: [u64; 2], n: f64) -> f64 {
    parts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information of the two binary partitions.
pub fn nmi(c: &Contingency) -> f64 {
    let n = c.total() as f64;
    if n == 0.0 {
        return 1.0;
    }
    let pred_sizes = [c.both + c.pred_only, c.truth_only + c.neither];
    let truth_sizes = [c.both + c.truth_only, c.pred_only + c.neither];
    if c.partitions_identical() {
        return 1.0;
    }
    let h_pred = entropy(pred_sizes, n);
    let h_truth = entropy(truth_sizes, n);
    if h_pred == 0.0 || h_truth == 0.0 {
        return 0.0;
    }
    let cells = [
        (c.both, pred_sizes[0], truth_sizes[0]),
        (c.pred_only, pred_sizes[0], truth_sizes[1]),
        (c.truth_only, pred_sizes[1], truth_sizes[0]),
        (c.neither, pred_sizes[1], truth_sizes[1]),
    ];
    let mut information = 0.0;
    for (joint, a, b) in cells {
        if joint > 0 {
            let joint = joint as f64;
            information += joint / n * ((n * joint) / (a as f64 * b as f64)).ln();
        }
    }
    // Rounding in the information sum can drift a hair outside [0, 1].
    (2.0 * information / (h_pred + h_truth)).clamp(0.0, 1.0)
}

fn choose2(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Pair-counting adjusted Rand index of the two binary partitions.
pub fn ari(c: &Contingency) -> f64 {
    let pred_sizes = [c.both + c.pred_only, c.truth_only + c.neither];
    let truth_sizes = [c.both + c.truth_only, c.pred_only + c.neither];
    let index = choose2(c.both) + choose2(c.pred_only) + choose2(c.truth_only) + choose2(c.neither);
    let sum_pred = choose2(pred_sizes[0]) + choose2(pred_sizes[1]);
    let sum_truth = choose2(truth_sizes[0]) + choose2(truth_sizes[1]);
    let total_pairs = choose2(c.total());
    if total_pairs == 0.0 {
        return 1.0;
    }
    let expected = sum_pred * sum_truth / total_pairs;
    let max_index = 0.5 * (sum_pred + sum_truth);
    if max_index == expected {
        // Both partitions are the all-in-one partition.
        return 1.0;
    }
    (index - expected) / (max_index - expected)
}

/// Harmonic mean of membership precision and recall; 0 when nothing overlaps.
pub fn fscore(c: &Contingency) -> f64 {
    if c.both == 0 {
        return 0.0;
    }
    let precision = c.both as f64 / (c.both + c.pred_only) as f64;
    let recall = c.both as f64 / (c.both + c.truth_only) as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Evaluates `pred` against one truth community.
pub fn evaluate(pred: &NodeSet, truth: &NodeSet, n: usize, truth_index: usize) -> EvalReport {
    let c = binarize(pred, truth, n);
    EvalReport {
        nmi: nmi(&c),
        ari: ari(&c),
        fscore: fscore(&c),
        matched_truth: truth_index,
    }
}

/// With overlapping ground truth, scores `pred` against every truth that
/// contains all query nodes and reports the best match: maximal NMI, ties
/// broken by maximal ARI, then by lowest index.
pub fn best_against_overlapping(
    pred: &NodeSet,
    truths: &[NodeSet],
    q: &NodeSet,
    n: usize,
) -> Result<EvalReport> {
    let mut best: Option<EvalReport> = None;
    for (index, truth) in truths.iter().enumerate() {
        if !q.is_subset_of(truth) {
            continue;
        }
        let report = evaluate(pred, truth, n, index);
        let better = match &best {
            None => true,
            Some(current) => {
                report.nmi > current.nmi
                    || (report.nmi == current.nmi && report.ari > current.ari)
            }
        };
        if better {
            best = Some(report);
        }
    }
    best.ok_or(Error::NotApplicable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> NodeSet {
        NodeSet::from_vec(ids.to_vec())
    }

    #[test]
    fn binarize_cases() {
        let c = binarize(&set(&[0, 1, 2]), &set(&[0, 1, 2]), 6);
        assert_eq!(
            c,
            Contingency { both: 3, pred_only: 0, truth_only: 0, neither: 3 }
        );
        let c = binarize(&set(&[0, 1]), &set(&[2, 3]), 6);
        assert_eq!(
            c,
            Contingency { both: 0, pred_only: 2, truth_only: 2, neither: 2 }
        );
        let c = binarize(&set(&[1, 2, 3]), &set(&[1, 2, 4]), 6);
        assert_eq!(
            c,
            Contingency { both: 2, pred_only: 1, truth_only: 1, neither: 2 }
        );
    }

    #[test]
    fn nmi_perfect_and_degenerate() {
        let c = binarize(&set(&[0, 1, 2]), &set(&[0, 1, 2]), 6);
        assert_eq!(nmi(&c), 1.0);
        // Unbalanced identical split where the raw formula rounds past 1.
        let big: NodeSet = (0..6).collect();
        let c = binarize(&big, &big, 180);
        assert_eq!(nmi(&c), 1.0);
        // Prediction covering all of V has zero entropy.
        let c = binarize(&set(&[0, 1, 2, 3, 4, 5]), &set(&[0, 1]), 6);
        assert_eq!(nmi(&c), 0.0);
        let c = binarize(&set(&[0, 1, 2, 3, 4, 5]), &set(&[0, 1, 2, 3, 4, 5]), 6);
        assert_eq!(nmi(&c), 1.0);
    }

    #[test]
    fn nmi_direct_sum() {
        // pred {1,2,3} vs truth {1,2,4} on n=6: evaluate the information sum
        // independently term by term.
        let c = binarize(&set(&[1, 2, 3]), &set(&[1, 2, 4]), 6);
        let expected = {
            let i = (2.0 / 3.0) * (4.0f64 / 3.0).ln() + (1.0 / 3.0) * (2.0f64 / 3.0).ln();
            i / 2.0f64.ln()
        };
        assert!((nmi(&c) - expected).abs() < 1e-12);
        assert!((nmi(&c) - 0.0817).abs() < 5e-5);
    }

    #[test]
    fn ari_known_values() {
        let c = binarize(&set(&[0, 1, 2]), &set(&[0, 1, 2]), 6);
        assert_eq!(ari(&c), 1.0);
        let c = binarize(&set(&[1, 2, 3]), &set(&[1, 2, 4]), 6);
        assert!((ari(&c) - (-1.0 / 9.0)).abs() < 1e-12);
        // Complement prediction: same binary partition, swapped labels.
        let c = binarize(&set(&[0, 1, 2]), &set(&[3, 4, 5]), 6);
        assert_eq!(ari(&c), 1.0);
    }

    #[test]
    fn ari_brute_force_pair_count() {
        // Count agreeing pairs over all 15 node pairs directly.
        let pred = set(&[1, 2, 3]);
        let truth = set(&[1, 2, 4]);
        let n = 6u32;
        let mut pair_counts = (0u64, 0u64, 0u64, 0u64); // (ss, sd, ds, dd)
        for u in 0..n {
            for v in (u + 1)..n {
                let same_pred = pred.contains(u) == pred.contains(v);
                let same_truth = truth.contains(u) == truth.contains(v);
                match (same_pred, same_truth) {
                    (true, true) => pair_counts.0 += 1,
                    (true, false) => pair_counts.1 += 1,
                    (false, true) => pair_counts.2 += 1,
                    (false, false) => pair_counts.3 += 1,
                }
            }
        }
        let (ss, sd, ds, dd) = pair_counts;
        let total = (ss + sd + ds + dd) as f64;
        let expected_index = ((ss + sd) as f64) * ((ss + ds) as f64) / total;
        let max_index = 0.5 * ((ss + sd) as f64 + (ss + ds) as f64);
        let reference = (ss as f64 - expected_index) / (max_index - expected_index);
        let c = binarize(&pred, &truth, 6);
        assert!((ari(&c) - reference).abs() < 1e-12);
    }

    #[test]
    fn fscore_cases() {
        let c = binarize(&set(&[0, 1, 2]), &set(&[0, 1, 2]), 6);
        assert_eq!(fscore(&c), 1.0);
        let c = binarize(&set(&[1, 2, 3]), &set(&[1, 2, 4]), 6);
        assert!((fscore(&c) - 2.0 / 3.0).abs() < 1e-12);
        let c = binarize(&set(&[0]), &set(&[5]), 6);
        assert_eq!(fscore(&c), 0.0);
    }

    #[test]
    fn best_match_selection() {
        let truths = vec![set(&[0, 1, 2]), set(&[0, 1, 2, 3]), set(&[0, 4, 5])];
        let q = NodeSet::singleton(0);
        // Exact match with truth 1.
        let report =
            best_against_overlapping(&set(&[0, 1, 2, 3]), &truths, &q, 8).unwrap();
        assert_eq!(report.matched_truth, 1);
        assert_eq!(report.nmi, 1.0);
        assert_eq!(report.ari, 1.0);
        assert_eq!(report.fscore, 1.0);
        // Straddling prediction matches the higher-NMI truth.
        let pred = set(&[0, 1, 2, 4]);
        let report = best_against_overlapping(&pred, &truths, &q, 8).unwrap();
        let direct: Vec<f64> = truths
            .iter()
            .map(|t| nmi(&binarize(&pred, t, 8)))
            .collect();
        let mut best_index = 0;
        for i in 1..direct.len() {
            if direct[i] > direct[best_index] {
                best_index = i;
            }
        }
        assert!(direct.iter().filter(|&&x| x == direct[best_index]).count() == 1);
        assert_eq!(report.matched_truth, best_index);
        // Symmetric straddle: identical scores against truths 0 and 2, so
        // the lowest index wins.
        let report = best_against_overlapping(&set(&[0, 1, 4]), &truths, &q, 8).unwrap();
        assert_eq!(report.matched_truth, 0);
    }

    #[test]
    fn no_eligible_truth_is_not_applicable() {
        let truths = vec![set(&[1, 2]), set(&[3, 4])];
        let err =
            best_against_overlapping(&set(&[0, 1]), &truths, &NodeSet::singleton(0), 6)
                .unwrap_err();
        assert!(matches!(err, Error::NotApplicable));
    }

    #[test]
    fn multi_query_eligibility() {
        let truths = vec![set(&[0, 1]), set(&[0, 1, 2, 3])];
        let q = set(&[0, 2]);
        let report = best_against_overlapping(&set(&[0, 2]), &truths, &q, 6).unwrap();
        assert_eq!(report.matched_truth, 1);
    }

    #[test]
    fn precision_never_drops_when_removing_false_positive() {
        let truth = set(&[0, 1, 2]);
        let pred = set(&[0, 1, 4, 5]);
        let slimmer = set(&[0, 1, 4]);
        let c_before = binarize(&pred, &truth, 8);
        let c_after = binarize(&slimmer, &truth, 8);
        let precision = |c: &Contingency| c.both as f64 / (c.both + c.pred_only) as f64;
        assert!(precision(&c_after) >= precision(&c_before));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn metrics_are_symmetric_and_bounded(
            n in 2u32..12,
            pred_bits in proptest::collection::vec(any::<bool>(), 12),
            truth_bits in proptest::collection::vec(any::<bool>(), 12),
        ) {
            let pred: NodeSet = (0..n).filter(|&v| pred_bits[v as usize]).collect();
            let truth: NodeSet = (0..n).filter(|&v| truth_bits[v as usize]).collect();
            let forward = binarize(&pred, &truth, n as usize);
            let backward = binarize(&truth, &pred, n as usize);
            prop_assert_eq!(nmi(&forward), nmi(&backward));
            prop_assert_eq!(ari(&forward), ari(&backward));
            prop_assert_eq!(fscore(&forward), fscore(&backward));
            prop_assert!((0.0..=1.0).contains(&nmi(&forward)));
            prop_assert!(ari(&forward) <= 1.0);
            prop_assert!((0.0..=1.0).contains(&fscore(&forward)));
            if pred == truth && !pred.is_empty() && pred.len() < n as usize {
                prop_assert_eq!(nmi(&forward), 1.0);
                prop_assert_eq!(ari(&forward), 1.0);
                prop_assert_eq!(fscore(&forward), 1.0);
            }
        }
    }
}
