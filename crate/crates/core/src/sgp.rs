//! Reviewer score-generating process.
//!
//! Each reviewer draws a biased, noisy raw score per assigned paper, samples
//! a Plackett-Luce ranking of their batch from the papers' true quality, and
//! reports the least-squares projection of the raw scores onto that ranking.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::conference::Conference;
use crate::error::{Error, Result};
use crate::isotonic::{check_permutation, project_along};
use crate::seeds::{Purpose, SeedStream};
use crate::{PaperId, ReviewerId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReviewerParams {
    pub bias: f64,
    /// Standard deviation of the raw-score noise.
    pub noise_sd: f64,
}

/// Reviewer population settings compared in the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseCase {
    Base,
    NoBias,
    NoVariance,
    BigBias,
    BigVariance,
}

impl NoiseCase {
    pub const ALL: [NoiseCase; 5] = [
        NoiseCase::Base,
        NoiseCase::NoBias,
        NoiseCase::NoVariance,
        NoiseCase::BigBias,
        NoiseCase::BigVariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseCase::Base => "Base",
            NoiseCase::NoBias => "NoBias",
            NoiseCase::NoVariance => "NoVariance",
            NoiseCase::BigBias => "BigBias",
            NoiseCase::BigVariance => "BigVariance",
        }
    }

    /// Biases are Uniform(−h, h).
    pub fn bias_halfwidth(self) -> f64 {
        match self {
            NoiseCase::NoBias => 0.0,
            NoiseCase::BigBias => 3.0,
            _ => 2.0,
        }
    }

    /// Noise standard deviations are Gamma(shape, scale); scale 0 means no noise.
    pub fn gamma_shape(self) -> f64 {
        1.0
    }

    pub fn gamma_scale(self) -> f64 {
        match self {
            NoiseCase::NoVariance => 0.0,
            NoiseCase::BigVariance => 1.5,
            _ => 1.0,
        }
    }

    /// Stable stream index; independent of the order cases are listed in.
    pub(crate) fn stream_index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for NoiseCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseCase {
    type Err = Error;

    /// Case-insensitive; `-`, `_` and spaces are ignored and `Var` is
    /// accepted for `Variance`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "base" => Ok(NoiseCase::Base),
            "nobias" => Ok(NoiseCase::NoBias),
            "novariance" | "novar" => Ok(NoiseCase::NoVariance),
            "bigbias" => Ok(NoiseCase::BigBias),
            "bigvariance" | "bigvar" => Ok(NoiseCase::BigVariance),
            _ => Err(Error::Config(format!("unknown noise case {s:?}"))),
        }
    }
}

impl Serialize for NoiseCase {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for NoiseCase {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sparse (reviewer, paper) → score table. Row `r` holds `(paper, score)`
/// pairs in the same order as the reviewer's assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub entries: Vec<Vec<(PaperId, f64)>>,
}

impl ScoreTable {
    pub fn n_reviewers(&self) -> usize {
        self.entries.len()
    }

    pub fn reviewer(&self, r: ReviewerId) -> &[(PaperId, f64)] {
        &self.entries[r]
    }

    pub fn get(&self, r: ReviewerId, paper: PaperId) -> Option<f64> {
        self.entries
            .get(r)?
            .iter()
            .find(|(p, _)| *p == paper)
            .map(|&(_, s)| s)
    }

    /// Adds `c` to every score.
    pub fn shifted(&self, c: f64) -> ScoreTable {
        ScoreTable {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|&(p, s)| (p, s + c)).collect())
                .collect(),
        }
    }

    /// True when the support is exactly the conference's assignment.
    pub fn matches_assignment(&self, conf: &Conference) -> bool {
        self.entries.len() == conf.n_reviewers()
            && self
                .entries
                .iter()
                .zip(&conf.assignment)
                .all(|(row, papers)| row.len() == papers.len() && row.iter().zip(papers).all(|(e, p)| e.0 == *p))
    }
}

/// A reviewer's ranking of their batch, best paper first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewerRanking {
    pub reviewer: ReviewerId,
    pub order: Vec<PaperId>,
}

impl ReviewerRanking {
    pub fn new(reviewer: ReviewerId, order: Vec<PaperId>) -> Self {
        Self { reviewer, order }
    }
}

/// Everything one run of the score-generating process produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedReviews {
    pub params: Vec<ReviewerParams>,
    pub raw: ScoreTable,
    pub final_scores: ScoreTable,
    pub rankings: Vec<ReviewerRanking>,
}

pub fn gen_reviewer_params<R: Rng + ?Sized>(case: NoiseCase, n_reviewers: usize, rng: &mut R) -> Vec<ReviewerParams> {
    let h = case.bias_halfwidth();
    let bias = (h > 0.0).then(|| Uniform::new(-h, h));
    let scale = case.gamma_scale();
    let noise = (scale > 0.0).then(|| Gamma::new(case.gamma_shape(), scale).expect("positive gamma parameters"));
    (0..n_reviewers)
        .map(|_| ReviewerParams {
            bias: bias.map_or(0.0, |d| d.sample(rng)),
            noise_sd: noise.map_or(0.0, |d| d.sample(rng)),
        })
        .collect()
}

fn raw_row<R: Rng + ?Sized>(conf: &Conference, papers: &[PaperId], params: ReviewerParams, rng: &mut R) -> Vec<(PaperId, f64)> {
    papers
        .iter()
        .map(|&p| {
            let mean = conf.true_scores[p] + params.bias;
            let score = if params.noise_sd == 0.0 {
                mean
            } else {
                Normal::new(mean, params.noise_sd).expect("finite noise").sample(rng)
            };
            (p, score)
        })
        .collect()
}

/// Raw scores `θ*ᵢ + b_r + σ_r·ε`. Reviewer `r` draws from stream
/// `(RawScores, r)` of `seeds`.
pub fn raw_scores(conf: &Conference, params: &[ReviewerParams], seeds: &SeedStream) -> Result<ScoreTable> {
    if params.len() != conf.n_reviewers() {
        return Err(Error::Argument(format!(
            "{} reviewer parameter sets for {} reviewers",
            params.len(),
            conf.n_reviewers()
        )));
    }
    if let Some(r) = params.iter().position(|p| !(p.noise_sd >= 0.0) || !p.bias.is_finite()) {
        return Err(Error::Argument(format!("reviewer {r} has invalid parameters")));
    }
    let entries = map_reviewers(conf.n_reviewers(), |r| {
        raw_row(conf, &conf.assignment[r], params[r], &mut seeds.rng(Purpose::RawScores, r as u64))
    });
    Ok(ScoreTable { entries })
}

fn shifted_weights(theta: &[f64]) -> Vec<f64> {
    let max = theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    theta.iter().map(|&t| (t - max).exp()).collect()
}

/// Plackett-Luce probability of observing `perm` (best first; entries index
/// into `theta`).
pub fn pl_ranking_prob(theta: &[f64], perm: &[usize]) -> Result<f64> {
    if theta.is_empty() {
        return Err(Error::Argument("Plackett-Luce needs at least one item".into()));
    }
    check_permutation(perm, theta.len())?;
    let w = shifted_weights(theta);
    let mut remaining: f64 = perm.iter().map(|&i| w[i]).sum();
    let mut prob = 1.0;
    for (k, &i) in perm.iter().enumerate() {
        if k + 1 == perm.len() {
            break;
        }
        prob *= w[i] / remaining;
        // Recompute rather than subtract so the tail stays exact.
        remaining = perm[k + 1..].iter().map(|&j| w[j]).sum();
    }
    Ok(prob)
}

/// Draws a ranking of `0..theta.len()` by repeatedly picking the next item
/// with probability proportional to `exp(θ)` among those left.
pub fn sample_pl_ranking<R: Rng + ?Sized>(theta: &[f64], rng: &mut R) -> Vec<usize> {
    let w = shifted_weights(theta);
    let mut left: Vec<usize> = (0..theta.len()).collect();
    let mut order = Vec::with_capacity(theta.len());
    while left.len() > 1 {
        let total: f64 = left.iter().map(|&i| w[i]).sum();
        let mut u = rng.gen::<f64>() * total;
        let mut pick = left.len() - 1;
        for (k, &i) in left.iter().enumerate() {
            if u < w[i] {
                pick = k;
                break;
            }
            u -= w[i];
        }
        order.push(left.remove(pick));
    }
    order.extend(left);
    order
}

/// Least-squares projection of `raw` onto `raw[perm[0]] ≥ raw[perm[1]] ≥ …`.
pub fn project_scores_to_ranking(raw: &[f64], perm: &[usize]) -> Result<Vec<f64>> {
    project_along(raw, perm)
}

/// Runs the full process for one noise case. Reviewer parameters come from
/// stream `(ReviewerParams, 0)`; reviewer `r` uses `(RawScores, r)` and
/// `(Ranking, r)`, so the result does not depend on scheduling.
pub fn generate_final_scores(conf: &Conference, case: NoiseCase, seeds: &SeedStream) -> Result<SimulatedReviews> {
    let params = gen_reviewer_params(case, conf.n_reviewers(), &mut seeds.rng(Purpose::ReviewerParams, 0));
    let raw = raw_scores(conf, &params, seeds)?;
    let per_reviewer = map_reviewers(conf.n_reviewers(), |r| {
        let row = raw.reviewer(r);
        let theta: Vec<f64> = row.iter().map(|&(p, _)| conf.true_scores[p]).collect();
        let local = sample_pl_ranking(&theta, &mut seeds.rng(Purpose::Ranking, r as u64));
        let scores: Vec<f64> = row.iter().map(|&(_, s)| s).collect();
        let projected = project_scores_to_ranking(&scores, &local).expect("sampled ranking is a permutation");
        let final_row: Vec<(PaperId, f64)> = row.iter().zip(projected).map(|(&(p, _), s)| (p, s)).collect();
        let order = local.iter().map(|&k| row[k].0).collect();
        (final_row, ReviewerRanking::new(r, order))
    });
    let (entries, rankings) = per_reviewer.into_iter().unzip();
    Ok(SimulatedReviews {
        params,
        raw,
        final_scores: ScoreTable { entries },
        rankings,
    })
}

#[cfg(feature = "parallel")]
fn map_reviewers<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_reviewers<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}
