//! Rank aggregation from reviewers' partial rankings.
//!
//! The production path is [`hierarchical_tiers`] followed by
//! [`full_ranking`]: papers that never lose a pairwise comparison form the
//! top tier, they are removed, and the peeling repeats on the rest until no
//! unbeaten paper remains.
//!
//! Reviewer orders may contain ties ([`TiedRanking`]), as happens when they
//! are read off pooled review scores. Tied papers are not compared.
//!
//! The spectral route ([`build_transition_matrix`] and
//! [`stationary_distribution`]) ranks by the stationary law of a random walk
//! that moves from a paper towards the papers that beat it. It is kept as a
//! validation oracle.

use std::collections::BTreeMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sgp::{ReviewerRanking, ScoreTable};
use crate::{PaperId, ReviewerId};

fn membership(active: &[PaperId]) -> Vec<bool> {
    let len = active.iter().copied().max().map_or(0, |m| m + 1);
    let mut mask = vec![false; len];
    for &p in active {
        mask[p] = true;
    }
    mask
}

fn is_member(mask: &[bool], p: PaperId) -> bool {
    mask.get(p).copied().unwrap_or(false)
}

/// Pairwise outcomes: `wins(i, j)` counts how often `i` was ranked above `j`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComparisonGraph {
    wins: BTreeMap<(PaperId, PaperId), u32>,
}

impl ComparisonGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, winner: PaperId, loser: PaperId) {
        self.record_many(winner, loser, 1);
    }

    pub fn record_many(&mut self, winner: PaperId, loser: PaperId, count: u32) {
        assert_ne!(winner, loser, "a paper cannot beat itself");
        if count > 0 {
            *self.wins.entry((winner, loser)).or_insert(0) += count;
        }
    }

    pub fn wins(&self, winner: PaperId, loser: PaperId) -> u32 {
        self.wins.get(&(winner, loser)).copied().unwrap_or(0)
    }

    /// Number of comparisons between `i` and `j`.
    pub fn comparisons(&self, i: PaperId, j: PaperId) -> u32 {
        self.wins(i, j) + self.wins(j, i)
    }

    pub fn total_comparisons(&self) -> u64 {
        self.wins.values().map(|&c| u64::from(c)).sum()
    }

    /// Non-zero `(winner, loser, count)` triples in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (PaperId, PaperId, u32)> + '_ {
        self.wins.iter().map(|(&(w, l), &c)| (w, l, c))
    }

    pub fn losses(&self, paper: PaperId) -> u32 {
        self.wins.iter().filter(|(&(_, l), _)| l == paper).map(|(_, &c)| c).sum()
    }
}

/// A reviewer's order with ties: `groups[0]` holds the papers placed first,
/// and papers sharing a group are not ranked against each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiedRanking {
    pub reviewer: ReviewerId,
    pub groups: Vec<Vec<PaperId>>,
}

impl TiedRanking {
    pub fn new(reviewer: ReviewerId, groups: Vec<Vec<PaperId>>) -> Self {
        Self { reviewer, groups }
    }

    /// Descending score; equal scores share a group (ascending paper id).
    pub fn from_scores(reviewer: ReviewerId, scores: &[(PaperId, f64)]) -> Self {
        let mut sorted = scores.to_vec();
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut groups: Vec<Vec<PaperId>> = Vec::new();
        let mut last = None;
        for (p, v) in sorted {
            match (groups.last_mut(), last) {
                (Some(g), Some(prev)) if prev == v => g.push(p),
                _ => groups.push(vec![p]),
            }
            last = Some(v);
        }
        Self { reviewer, groups }
    }

    pub fn n_papers(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

impl From<&ReviewerRanking> for TiedRanking {
    fn from(r: &ReviewerRanking) -> Self {
        Self {
            reviewer: r.reviewer,
            groups: r.order.iter().map(|&p| vec![p]).collect(),
        }
    }
}

/// One tied order per reviewer, read off the reviewer's scores.
pub fn tied_rankings_from_scores(scores: &ScoreTable) -> Vec<TiedRanking> {
    scores
        .entries
        .iter()
        .enumerate()
        .map(|(r, row)| TiedRanking::from_scores(r, row))
        .collect()
}

fn strict_to_tied(rankings: &[ReviewerRanking]) -> Vec<TiedRanking> {
    rankings.iter().map(TiedRanking::from).collect()
}

/// Expands each ranking, restricted to `active`, into its `R(R−1)/2` pairs.
pub fn extract_pairwise(rankings: &[ReviewerRanking], active: &[PaperId]) -> ComparisonGraph {
    extract_pairwise_tied(&strict_to_tied(rankings), active)
}

/// Records one win for every pair of active papers in different groups of
/// the same order.
pub fn extract_pairwise_tied(rankings: &[TiedRanking], active: &[PaperId]) -> ComparisonGraph {
    let mask = membership(active);
    let mut g = ComparisonGraph::new();
    for ranking in rankings {
        let kept: Vec<Vec<PaperId>> = ranking
            .groups
            .iter()
            .map(|grp| grp.iter().copied().filter(|&p| is_member(&mask, p)).collect::<Vec<_>>())
            .filter(|grp| !grp.is_empty())
            .collect();
        for (k, winners) in kept.iter().enumerate() {
            for losers in &kept[k + 1..] {
                for &w in winners {
                    for &l in losers {
                        g.record(w, l);
                    }
                }
            }
        }
    }
    g
}

/// Row-stochastic matrix over an ordered set of papers, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    papers: Vec<PaperId>,
    /// Off-diagonal entries `(column, probability)` per row, columns local.
    rows: Vec<Vec<(usize, f64)>>,
    diagonal: Vec<f64>,
}

impl TransitionMatrix {
    /// Builds a matrix from dense rows over papers `0..n`, checking that the
    /// entries are non-negative and each row sums to 1 within 1e-12.
    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let n = dense.len();
        let mut rows = Vec::with_capacity(n);
        let mut diagonal = Vec::with_capacity(n);
        for (i, row) in dense.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Argument(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return Err(Error::Argument(format!("row {i} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::Argument(format!("row {i} sums to {sum}")));
            }
            rows.push(row.iter().enumerate().filter(|&(j, &v)| j != i && v > 0.0).map(|(j, &v)| (j, v)).collect());
            diagonal.push(row[i]);
        }
        Ok(Self {
            papers: (0..n).collect(),
            rows,
            diagonal,
        })
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Paper id of each row.
    pub fn papers(&self) -> &[PaperId] {
        &self.papers
    }

    /// Entry at local row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diagonal[i]
        } else {
            self.rows[i].iter().find(|&&(c, _)| c == j).map_or(0.0, |&(_, v)| v)
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.diagonal[i] + self.rows[i].iter().map(|&(_, v)| v).sum::<f64>()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `x ↦ xP`.
    fn left_multiply(&self, x: &[f64], out: &mut [f64]) {
        for (o, (&xi, &d)) in out.iter_mut().zip(x.iter().zip(&self.diagonal)) {
            *o = xi * d;
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[j] += x[i] * v;
            }
        }
    }
}

/// `P_ij = wins(j, i) / (d_max · n_ij)` for `i ≠ j`, where `n_ij` counts the
/// comparisons between `i` and `j` and `d_max` is the largest number of
/// distinct opponents of any active paper. The diagonal takes the rest.
/// Rows follow `active` in the order given.
pub fn build_transition_matrix(g: &ComparisonGraph, active: &[PaperId]) -> TransitionMatrix {
    let mut local = BTreeMap::new();
    for (k, &p) in active.iter().enumerate() {
        local.insert(p, k);
    }
    let n = active.len();
    let mut opponents: Vec<BTreeMap<usize, (u32, u32)>> = vec![BTreeMap::new(); n];
    for (w, l, c) in g.iter() {
        if let (Some(&wi), Some(&li)) = (local.get(&w), local.get(&l)) {
            // (losses of the row paper to this opponent, total comparisons)
            let e = opponents[li].entry(wi).or_insert((0, 0));
            e.0 += c;
            e.1 += c;
            opponents[wi].entry(li).or_insert((0, 0)).1 += c;
        }
    }
    let d_max = opponents.iter().map(BTreeMap::len).max().unwrap_or(0).max(1) as f64;
    let mut rows = Vec::with_capacity(n);
    let mut diagonal = Vec::with_capacity(n);
    for opp in &opponents {
        let row: Vec<(usize, f64)> = opp
            .iter()
            .filter(|(_, &(lost, _))| lost > 0)
            .map(|(&j, &(lost, total))| (j, f64::from(lost) / (d_max * f64::from(total.max(1)))))
            .collect();
        diagonal.push(1.0 - row.iter().map(|&(_, v)| v).sum::<f64>());
        rows.push(row);
    }
    TransitionMatrix {
        papers: active.to_vec(),
        rows,
        diagonal,
    }
}

/// Largest closed communicating class (ties go to the class holding the
/// smallest index), as sorted local indices.
fn largest_closed_class(p: &TransitionMatrix) -> Vec<usize> {
    let mut graph = DiGraph::<(), ()>::with_capacity(p.len(), 0);
    let nodes: Vec<_> = (0..p.len()).map(|_| graph.add_node(())).collect();
    for (i, row) in p.rows.iter().enumerate() {
        for &(j, _) in row {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }
    let mut component = vec![0usize; p.len()];
    let sccs = tarjan_scc(&graph);
    for (c, scc) in sccs.iter().enumerate() {
        for n in scc {
            component[n.index()] = c;
        }
    }
    let mut best: Option<Vec<usize>> = None;
    for (c, scc) in sccs.iter().enumerate() {
        let closed = scc
            .iter()
            .all(|n| p.rows[n.index()].iter().all(|&(j, _)| component[j] == c));
        if !closed {
            continue;
        }
        let mut members: Vec<usize> = scc.iter().map(|n| n.index()).collect();
        members.sort_unstable();
        let better = match &best {
            None => true,
            Some(b) => members.len() > b.len() || (members.len() == b.len() && members[0] < b[0]),
        };
        if better {
            best = Some(members);
        }
    }
    best.unwrap_or_default()
}

/// Stationary distribution of `p` by power iteration on the lazy chain
/// `(I + P)/2`, which has the same fixed points but cannot oscillate.
///
/// Reducible chains are restricted to their largest closed class; every
/// other state gets probability 0. Converges when `‖πP − π‖₁ < tol`.
pub fn stationary_distribution(p: &TransitionMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = p.len();
    if n == 0 {
        return Err(Error::Argument("empty transition matrix".into()));
    }
    let class = largest_closed_class(p);
    let mut x = vec![0.0; n];
    let start = 1.0 / class.len() as f64;
    for &i in &class {
        x[i] = start;
    }
    let mut step = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        p.left_multiply(&x, &mut step);
        residual = step.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        if residual < tol {
            return Ok(normalized(step));
        }
        for (xi, &si) in x.iter_mut().zip(&step) {
            *xi = 0.5 * (*xi + si);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

/// Active papers with no recorded loss, ascending. Papers that were never
/// compared count as unbeaten.
pub fn find_never_losers(g: &ComparisonGraph, active: &[PaperId]) -> Vec<PaperId> {
    let mask = membership(active);
    let mut beaten = vec![false; mask.len()];
    for (w, l, c) in g.iter() {
        if c > 0 && is_member(&mask, w) && is_member(&mask, l) {
            beaten[l] = true;
        }
    }
    let mut out: Vec<PaperId> = active.iter().copied().filter(|&p| !beaten[p]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Ordered partition of papers into tiers, best tier first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierDecomposition {
    pub tiers: Vec<Vec<PaperId>>,
}

impl TierDecomposition {
    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn top_tier_size(&self) -> usize {
        self.tiers.first().map_or(0, Vec::len)
    }

    /// Tier index of every paper in `0..n`; `None` for papers not covered.
    pub fn tier_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (k, tier) in self.tiers.iter().enumerate() {
            for &p in tier {
                if p < n {
                    out[p] = Some(k);
                }
            }
        }
        out
    }
}

/// Repeatedly peels off the papers that never lose among those remaining.
/// When a round finds no such paper, everything left becomes the last tier.
pub fn hierarchical_tiers(rankings: &[ReviewerRanking], all_papers: &[PaperId]) -> TierDecomposition {
    hierarchical_tiers_tied(&strict_to_tied(rankings), all_papers)
}

/// [`hierarchical_tiers`] for orders with ties.
///
/// Losses are recounted from scratch each round: a paper's losses in one
/// order are the remaining papers in strictly earlier groups, which is what
/// [`extract_pairwise_tied`] followed by [`find_never_losers`] would report,
/// without materialising the pairs.
pub fn hierarchical_tiers_tied(rankings: &[TiedRanking], all_papers: &[PaperId]) -> TierDecomposition {
    let mut remaining = membership(all_papers);
    let mut left: Vec<PaperId> = all_papers.to_vec();
    left.sort_unstable();
    left.dedup();
    let mut losses = vec![0u32; remaining.len()];
    let tracked = |r: &TiedRanking, remaining: &[bool]| {
        r.groups.iter().filter(|g| g.iter().any(|&p| is_member(remaining, p))).count()
    };
    // Only orders spanning two groups of tracked papers can produce losses.
    let mut live: Vec<&TiedRanking> = rankings.iter().filter(|r| tracked(r, &remaining) >= 2).collect();

    let mut tiers = Vec::new();
    while !left.is_empty() {
        for &p in &left {
            losses[p] = 0;
        }
        for r in &live {
            let mut above = 0u32;
            for group in &r.groups {
                let mut here = 0u32;
                for &p in group {
                    if is_member(&remaining, p) {
                        losses[p] += above;
                        here += 1;
                    }
                }
                above += here;
            }
        }
        let (tier, rest): (Vec<PaperId>, Vec<PaperId>) = left.iter().partition(|&&p| losses[p] == 0);
        if tier.is_empty() {
            tiers.push(rest);
            break;
        }
        for &p in &tier {
            remaining[p] = false;
        }
        tiers.push(tier);
        left = rest;
        live.retain(|r| tracked(r, &remaining) >= 2);
    }
    TierDecomposition { tiers }
}

/// Total order of all papers: tier by tier, and within a tier by descending
/// `avg_scores`, ties broken by ascending paper id.
pub fn full_ranking(tiers: &TierDecomposition, avg_scores: &[f64]) -> Vec<PaperId> {
    let mut out = Vec::with_capacity(avg_scores.len());
    for tier in &tiers.tiers {
        let mut sorted = tier.clone();
        sorted.sort_by(|&a, &b| avg_scores[b].total_cmp(&avg_scores[a]).then(a.cmp(&b)));
        out.extend(sorted);
    }
    out
}

/// Kendall's tau-b between two score vectors (O(n²)).
pub fn kendall_tau(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "kendall_tau needs equal lengths");
    let (mut concordant, mut discordant, mut ties_a, mut ties_b) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let da = (a[i] - a[j]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            let db = (b[i] - b[j]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            match (da, db) {
                (0, 0) => {}
                (0, _) => ties_a += 1,
                (_, 0) => ties_b += 1,
                _ if da == db => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let n1 = (concordant + discordant + ties_a) as f64;
    let n2 = (concordant + discordant + ties_b) as f64;
    if n1 == 0.0 || n2 == 0.0 {
        return 0.0;
    }
    (concordant - discordant) as f64 / (n1 * n2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: PaperId = 0;
    const B: PaperId = 1;
    const C: PaperId = 2;

    fn ranking(reviewer: usize, order: &[PaperId]) -> ReviewerRanking {
        ReviewerRanking::new(reviewer, order.to_vec())
    }

    #[test]
    fn pairs_from_one_ranking() {
        let r = [ranking(0, &[A, B, C])];
        let g = extract_pairwise(&r, &[A, B, C]);
        assert_eq!(g.wins(A, B), 1);
        assert_eq!(g.wins(A, C), 1);
        assert_eq!(g.wins(B, C), 1);
        assert_eq!(g.total_comparisons(), 3);

        let g = extract_pairwise(&r, &[A, C]);
        assert_eq!(g.wins(A, C), 1);
        assert_eq!(g.total_comparisons(), 1);

        let g = extract_pairwise(&[ranking(0, &[B])], &[A, B, C]);
        assert_eq!(g.total_comparisons(), 0);
    }

    #[test]
    fn transition_entries_follow_loss_fractions() {
        let mut g = ComparisonGraph::new();
        g.record_many(B, A, 3);
        g.record_many(A, B, 1);
        let p = build_transition_matrix(&g, &[A, B]);
        // d_max = 1
        assert!((p.get(0, 1) - 0.75).abs() < 1e-15);
        assert!((p.get(1, 0) - 0.25).abs() < 1e-15);
        for i in 0..2 {
            assert!((p.row_sum(i) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_normalisation() {
        // A meets B and C; B and C meet only A, so d_max = 2.
        let mut g = ComparisonGraph::new();
        g.record_many(B, A, 3);
        g.record_many(A, B, 1);
        g.record(A, C);
        let p = build_transition_matrix(&g, &[A, B, C]);
        assert!((p.get(0, 1) - 0.75 / 2.0).abs() < 1e-15);
        assert!((p.get(1, 0) - 0.25 / 2.0).abs() < 1e-15);
        assert_eq!(p.get(0, 2), 0.0);
        assert_eq!(p.get(2, 0), 0.5);
    }

    #[test]
    fn isolated_paper_is_absorbing() {
        let mut g = ComparisonGraph::new();
        g.record(A, B);
        let p = build_transition_matrix(&g, &[A, B, C]);
        assert_eq!(p.to_dense()[2], vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn two_state_closed_form() {
        let (a, b) = (0.3, 0.05);
        let p = TransitionMatrix::from_dense(&[vec![1.0 - a, a], vec![b, 1.0 - b]]).unwrap();
        let pi = stationary_distribution(&p, 1e-13, 100_000).unwrap();
        assert!((pi[0] / pi[1] - b / a).abs() < 1e-10);
        assert!((pi[0] + pi[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_chain_still_converges() {
        let p = TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let pi = stationary_distribution(&p, 1e-12, 10_000).unwrap();
        assert!((pi[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_state() {
        let p = TransitionMatrix::from_dense(&[vec![1.0]]).unwrap();
        assert_eq!(stationary_distribution(&p, 1e-10, 10).unwrap(), vec![1.0]);
    }

    #[test]
    fn reducible_chain_uses_largest_closed_class() {
        // 0 drains into the closed pair {1, 2}; 3 is absorbing on its own.
        let p = TransitionMatrix::from_dense(&[
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.5, 0.5, 0.0],
            vec![0.0, 0.25, 0.75, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let pi = stationary_distribution(&p, 1e-12, 100_000).unwrap();
        assert_eq!(pi[0], 0.0);
        assert_eq!(pi[3], 0.0);
        assert!((pi[1] - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_reports_residual() {
        // the uniform start is already stationary for a symmetric chain
        let p = TransitionMatrix::from_dense(&[vec![0.999, 0.001], vec![0.001, 0.999]]).unwrap();
        assert!(stationary_distribution(&p, 1e-12, 1).is_ok());
        let skew = TransitionMatrix::from_dense(&[vec![0.999, 0.001], vec![0.5, 0.5]]).unwrap();
        match stationary_distribution(&skew, 1e-14, 3) {
            Err(Error::NoConvergence { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn from_dense_validates() {
        assert!(TransitionMatrix::from_dense(&[vec![0.5, 0.4], vec![0.0, 1.0]]).is_err());
        assert!(TransitionMatrix::from_dense(&[vec![1.5, -0.5], vec![0.0, 1.0]]).is_err());
        assert!(TransitionMatrix::from_dense(&[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn never_losers() {
        let chain = [ranking(0, &[A, B]), ranking(1, &[B, C])];
        let g = extract_pairwise(&chain, &[A, B, C]);
        assert_eq!(find_never_losers(&g, &[A, B, C]), vec![A]);

        let cycle = [ranking(0, &[A, B]), ranking(1, &[B, C]), ranking(2, &[C, A])];
        let g = extract_pairwise(&cycle, &[A, B, C]);
        assert!(find_never_losers(&g, &[A, B, C]).is_empty());

        let g = extract_pairwise(&chain, &[A, B, C, 3]);
        assert_eq!(find_never_losers(&g, &[A, B, C, 3]), vec![A, 3]);
    }

    #[test]
    fn tiers_of_a_chain_and_a_cycle() {
        let chain = [ranking(0, &[A, B]), ranking(1, &[B, C])];
        assert_eq!(hierarchical_tiers(&chain, &[A, B, C]).tiers, vec![vec![A], vec![B], vec![C]]);

        let cycle = [ranking(0, &[A, B]), ranking(1, &[B, C]), ranking(2, &[C, A])];
        assert_eq!(hierarchical_tiers(&cycle, &[A, B, C]).tiers, vec![vec![A, B, C]]);

        assert_eq!(hierarchical_tiers(&[], &[A, B, C]).tiers, vec![vec![A, B, C]]);
        assert!(hierarchical_tiers(&[], &[]).is_empty());
    }

    #[test]
    fn cycle_below_a_clear_winner() {
        let r = [ranking(0, &[3, A, B]), ranking(1, &[3, B, C]), ranking(2, &[C, A])];
        assert_eq!(hierarchical_tiers(&r, &[A, B, C, 3]).tiers, vec![vec![3], vec![A, B, C]]);
    }

    #[test]
    fn tied_order_from_scores() {
        let r = TiedRanking::from_scores(4, &[(B, 5.0), (A, 6.5), (C, 5.0), (3, 2.0)]);
        assert_eq!(r.reviewer, 4);
        assert_eq!(r.groups, vec![vec![A], vec![B, C], vec![3]]);
        assert_eq!(r.n_papers(), 4);
        assert!(TiedRanking::from_scores(0, &[]).groups.is_empty());
    }

    #[test]
    fn ties_are_not_comparisons() {
        let r = [TiedRanking::new(0, vec![vec![A, B], vec![C]])];
        let g = extract_pairwise_tied(&r, &[A, B, C]);
        assert_eq!(g.comparisons(A, B), 0);
        assert_eq!(g.wins(A, C), 1);
        assert_eq!(g.wins(B, C), 1);
        assert_eq!(find_never_losers(&g, &[A, B, C]), vec![A, B]);
        assert_eq!(hierarchical_tiers_tied(&r, &[A, B, C]).tiers, vec![vec![A, B], vec![C]]);
    }

    #[test]
    fn strict_rankings_match_singleton_groups() {
        let strict = [ranking(0, &[C, A, B]), ranking(1, &[B, 3])];
        let tied: Vec<TiedRanking> = strict.iter().map(TiedRanking::from).collect();
        let all = [A, B, C, 3];
        assert_eq!(extract_pairwise(&strict, &all), extract_pairwise_tied(&tied, &all));
        assert_eq!(hierarchical_tiers(&strict, &all), hierarchical_tiers_tied(&tied, &all));
    }

    #[test]
    fn full_ranking_orders_within_tiers() {
        let singles = TierDecomposition { tiers: vec![vec![A], vec![B], vec![C]] };
        assert_eq!(full_ranking(&singles, &[1.0, 9.0, 5.0]), vec![A, B, C]);

        let one = TierDecomposition { tiers: vec![vec![A, B, C]] };
        assert_eq!(full_ranking(&one, &[2.0, 5.0, 4.0]), vec![B, C, A]);
        assert_eq!(full_ranking(&one, &[4.0, 4.0, 4.0]), vec![A, B, C]);
        assert_eq!(full_ranking(&one, &[3.0, 4.0, 4.0]), vec![B, C, A]);
    }

    #[test]
    fn kendall_tau_extremes() {
        assert_eq!(kendall_tau(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), 1.0);
        assert_eq!(kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0);
        // one discordant pair out of three
        assert!((kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]) - 1.0 / 3.0).abs() < 1e-15);
    }
}
