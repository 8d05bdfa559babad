//! The four paper-quality estimators compared by the benchmark.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conference::Conference;
use crate::error::{Error, Result};
use crate::isotonic::{check_blend, isotonic_project_indexed};
use crate::rank::{full_ranking, hierarchical_tiers_tied, tied_rankings_from_scores, TiedRanking, TierDecomposition};
use crate::sgp::{ReviewerRanking, ScoreTable, SimulatedReviews};
use crate::{AuthorId, PaperId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Mean of the reviewers' scores.
    Average,
    /// Average calibrated against the tier ranking built from reviewer rankings.
    ReviewerRanking,
    /// Average calibrated against authors' rankings of their own papers.
    AuthorRanking,
    /// Reviewer calibration followed by author calibration.
    Combined,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Average,
        Method::ReviewerRanking,
        Method::AuthorRanking,
        Method::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Average => "average",
            Method::ReviewerRanking => "reviewer_ranking",
            Method::AuthorRanking => "author_ranking",
            Method::Combined => "combined",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Average => "1. Average Scores (Benchmark)",
            Method::ReviewerRanking => "2. Use Rankings from Reviewers",
            Method::AuthorRanking => "3. Use Rankings from Authors",
            Method::Combined => "4. Combine 2 and 3",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the reviewer calibration compares papers by.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonSource {
    /// Each reviewer's final scores: papers pooled to the same score are tied.
    #[default]
    Scores,
    /// Each reviewer's strict sampled ranking.
    Rankings,
}

impl ComparisonSource {
    pub fn orders(self, reviews: &SimulatedReviews) -> Vec<TiedRanking> {
        match self {
            ComparisonSource::Scores => tied_rankings_from_scores(&reviews.final_scores),
            ComparisonSource::Rankings => reviews.rankings.iter().map(TiedRanking::from).collect(),
        }
    }
}

impl FromStr for ComparisonSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scores" => Ok(ComparisonSource::Scores),
            "rankings" => Ok(ComparisonSource::Rankings),
            _ => Err(Error::Config(format!("unknown comparison source {s:?}"))),
        }
    }
}

/// Weights on the isotonic fit for the two calibration stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlendWeights {
    pub reviewer: f64,
    pub author: f64,
}

impl Default for BlendWeights {
    fn default() -> Self {
        Self {
            reviewer: 0.5,
            author: 1.0,
        }
    }
}

pub fn avg_scores(scores: &ScoreTable, conf: &Conference) -> Result<Vec<f64>> {
    let n = conf.n_papers();
    let mut sum = vec![0.0; n];
    let mut count = vec![0u32; n];
    for row in &scores.entries {
        for &(p, s) in row {
            if p >= n {
                return Err(Error::Argument(format!("score for unknown paper {p}")));
            }
            sum[p] += s;
            count[p] += 1;
        }
    }
    if let Some(p) = count.iter().position(|&c| c == 0) {
        return Err(Error::Argument(format!("paper {p} has no reviews")));
    }
    Ok(sum.iter().zip(&count).map(|(s, &c)| s / f64::from(c)).collect())
}

/// Tier ranking from reviewer orders, then the isotonic projection of `avg`
/// onto it, blended with `avg`. Also returns the tiers.
pub fn calibrate_reviewer_tied(
    avg: &[f64],
    orders: &[TiedRanking],
    blend: f64,
) -> Result<(Vec<f64>, TierDecomposition)> {
    check_blend(blend)?;
    let papers: Vec<PaperId> = (0..avg.len()).collect();
    let tiers = hierarchical_tiers_tied(orders, &papers);
    let order = full_ranking(&tiers, avg);
    let calibrated = isotonic_project_indexed(avg, &order, blend)?;
    Ok((calibrated, tiers))
}

pub fn calibrate_reviewer(avg: &[f64], rankings: &[ReviewerRanking], blend: f64) -> Result<Vec<f64>> {
    let orders: Vec<TiedRanking> = rankings.iter().map(TiedRanking::from).collect();
    calibrate_reviewer_tied(avg, &orders, blend).map(|(v, _)| v)
}

/// One author's claim on a disjoint set of papers, best paper first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Owner {
    pub author: AuthorId,
    pub papers: Vec<PaperId>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OwnerPartition {
    pub owners: Vec<Owner>,
}

impl OwnerPartition {
    pub fn owned_papers(&self) -> usize {
        self.owners.iter().map(|o| o.papers.len()).sum()
    }
}

/// Turns overlapping author rankings into disjoint total orders.
///
/// Authors are visited by descending submission count (ties: ascending id)
/// and claim every paper not yet claimed; authors left with fewer than two
/// papers are dropped. Each owner's papers are sorted by descending true
/// score, since authors are assumed to know their papers' true order.
pub fn build_owner_partition(conf: &Conference) -> OwnerPartition {
    let mut authors: Vec<AuthorId> = (0..conf.n_authors()).collect();
    authors.sort_by(|&a, &b| conf.authorship[b].len().cmp(&conf.authorship[a].len()).then(a.cmp(&b)));
    let mut claimed = vec![false; conf.n_papers()];
    let mut owners = Vec::new();
    for a in authors {
        if conf.authorship[a].len() < 2 {
            break;
        }
        let mut papers: Vec<PaperId> = conf.authorship[a].iter().copied().filter(|&p| !claimed[p]).collect();
        if papers.len() < 2 {
            continue;
        }
        for &p in &papers {
            claimed[p] = true;
        }
        papers.sort_by(|&x, &y| conf.true_scores[y].total_cmp(&conf.true_scores[x]).then(x.cmp(&y)));
        owners.push(Owner { author: a, papers });
    }
    OwnerPartition { owners }
}

/// Replaces each owner's papers with the projection of their scores onto the
/// owner's order, blended with the input by `blend`. Unowned papers pass
/// through untouched.
pub fn calibrate_author_blended(scores: &[f64], owners: &OwnerPartition, blend: f64) -> Result<Vec<f64>> {
    check_blend(blend)?;
    let mut out = scores.to_vec();
    for owner in &owners.owners {
        if let Some(&p) = owner.papers.iter().find(|&&p| p >= scores.len()) {
            return Err(Error::Argument(format!("owner {} lists unknown paper {p}", owner.author)));
        }
        let local: Vec<f64> = owner.papers.iter().map(|&p| scores[p]).collect();
        let order: Vec<usize> = (0..local.len()).collect();
        let fitted = isotonic_project_indexed(&local, &order, blend)?;
        for (&p, v) in owner.papers.iter().zip(fitted) {
            out[p] = v;
        }
    }
    Ok(out)
}

/// Full projection onto the owners' orders.
pub fn calibrate_author(scores: &[f64], owners: &OwnerPartition) -> Result<Vec<f64>> {
    calibrate_author_blended(scores, owners, 1.0)
}

pub fn calibrate_combined(
    avg: &[f64],
    rankings: &[ReviewerRanking],
    owners: &OwnerPartition,
    weights: BlendWeights,
) -> Result<Vec<f64>> {
    let reviewer = calibrate_reviewer(avg, rankings, weights.reviewer)?;
    calibrate_author_blended(&reviewer, owners, weights.author)
}

pub fn rmse(est: &[f64], truth: &[f64]) -> Result<f64> {
    if est.len() != truth.len() {
        return Err(Error::Argument(format!(
            "{} estimates for {} true scores",
            est.len(),
            truth.len()
        )));
    }
    if est.is_empty() {
        return Ok(0.0);
    }
    let sq: f64 = est.iter().zip(truth).map(|(e, t)| (e - t).powi(2)).sum();
    Ok((sq / est.len() as f64).sqrt())
}

/// All four estimates for one simulated score table, plus the tiers used by
/// the reviewer calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimates {
    pub average: Vec<f64>,
    pub reviewer: Vec<f64>,
    pub author: Vec<f64>,
    pub combined: Vec<f64>,
    pub tiers: TierDecomposition,
}

impl Estimates {
    pub fn get(&self, method: Method) -> &[f64] {
        match method {
            Method::Average => &self.average,
            Method::ReviewerRanking => &self.reviewer,
            Method::AuthorRanking => &self.author,
            Method::Combined => &self.combined,
        }
    }

    /// RMSE of each method, in [`Method::ALL`] order.
    pub fn rmse(&self, truth: &[f64]) -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (slot, m) in out.iter_mut().zip(Method::ALL) {
            *slot = rmse(self.get(m), truth)?;
        }
        Ok(out)
    }
}

/// Runs every method on `final_scores`, with `orders` feeding the reviewer
/// calibration.
pub fn estimate_all(
    final_scores: &ScoreTable,
    orders: &[TiedRanking],
    conf: &Conference,
    owners: &OwnerPartition,
    weights: BlendWeights,
) -> Result<Estimates> {
    let average = avg_scores(final_scores, conf)?;
    let (reviewer, tiers) = calibrate_reviewer_tied(&average, orders, weights.reviewer)?;
    let author = calibrate_author_blended(&average, owners, weights.author)?;
    let combined = calibrate_author_blended(&reviewer, owners, weights.author)?;
    Ok(Estimates {
        average,
        reviewer,
        author,
        combined,
        tiers,
    })
}

/// Writes `paper_id,method,estimate` rows for every method.
pub fn estimates_to_csv(estimates: &Estimates) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["paper_id", "method", "estimate"]).expect("in-memory write");
    for m in Method::ALL {
        for (p, v) in estimates.get(m).iter().enumerate() {
            w.write_record([p.to_string(), m.name().to_string(), v.to_string()])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
