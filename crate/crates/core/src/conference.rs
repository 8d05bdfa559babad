//! Synthetic conference generation: papers, latent quality, authorship and
//! reviewer assignment.
//!
//! Defaults are calibrated to the ICML 2023 summary counts: 6,538
//! submissions, 18,535 authors of whom 4,505 / 508 / 74 / 26 submitted at
//! least 2 / 5 / 10 / 15 papers, and 3 or 4 reviewers per paper.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::{Purpose, SeedStream};
use crate::{AuthorId, PaperId, ReviewerId};

/// Finite distribution over positive integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    pub values: Vec<u32>,
    pub weights: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(values: Vec<u32>, weights: Vec<f64>) -> Self {
        Self { values, weights }
    }

    pub fn uniform(values: Vec<u32>) -> Self {
        let weights = vec![1.0; values.len()];
        Self { values, weights }
    }

    pub fn point(value: u32) -> Self {
        Self::uniform(vec![value])
    }

    pub fn min(&self) -> u32 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.weights.iter().sum();
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| f64::from(v) * w)
            .sum::<f64>()
            / total
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.values.is_empty() || self.values.len() != self.weights.len() {
            return Err(Error::Config(format!(
                "{name}: need matching non-empty values and weights"
            )));
        }
        if self.values.contains(&0) {
            return Err(Error::Config(format!("{name}: support must be positive integers")));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || self.weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Config(format!("{name}: weights must be non-negative with a positive sum")));
        }
        Ok(())
    }

    fn sampler(&self) -> Sampler<'_> {
        Sampler {
            values: &self.values,
            index: WeightedIndex::new(&self.weights).expect("validated weights"),
        }
    }
}

struct Sampler<'a> {
    values: &'a [u32],
    index: WeightedIndex<f64>,
}

impl Sampler<'_> {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.values[self.index.sample(rng)]
    }
}

/// "`count` authors have at least `threshold` papers."
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailTarget {
    pub threshold: u32,
    pub count: usize,
}

impl TailTarget {
    pub const fn new(threshold: u32, count: usize) -> Self {
        Self { threshold, count }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub n_papers: usize,
    pub n_authors: usize,
    /// Sorted by threshold; counts refer to `n_authors`.
    pub author_multiplicity_targets: Vec<TailTarget>,
    pub max_papers_per_author: u32,
    pub authors_per_paper_dist: DiscreteDist,
    /// In [0, 1]. 0 spreads authors of several papers uniformly over papers;
    /// larger values concentrate them on the same submissions.
    pub prolific_clustering: f64,
    pub reviewers_per_paper_dist: DiscreteDist,
    pub reviewer_capacity_dist: DiscreteDist,
    /// Reviewer pool is grown until total capacity reaches this multiple of
    /// the number of review slots. Ignored when `n_reviewers` is set.
    pub capacity_slack: f64,
    /// Fixed reviewer pool size, if any.
    pub n_reviewers: Option<usize>,
    pub true_score_mean: f64,
    pub true_score_sd: f64,
    pub max_matching_retries: usize,
    pub master_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n_papers: 6538,
            n_authors: 18535,
            author_multiplicity_targets: vec![
                TailTarget::new(2, 4505),
                TailTarget::new(5, 508),
                TailTarget::new(10, 74),
                TailTarget::new(15, 26),
            ],
            max_papers_per_author: 32,
            authors_per_paper_dist: DiscreteDist::new(
                (1..=8).collect(),
                vec![0.03, 0.10, 0.19, 0.22, 0.19, 0.13, 0.08, 0.06],
            ),
            prolific_clustering: 0.9,
            reviewers_per_paper_dist: DiscreteDist::uniform(vec![3, 4]),
            reviewer_capacity_dist: DiscreteDist::new(vec![3, 4, 5, 6], vec![0.1, 0.3, 0.3, 0.3]),
            capacity_slack: 1.05,
            n_reviewers: None,
            true_score_mean: 5.0,
            true_score_sd: 1.9,
            max_matching_retries: 20,
            master_seed: 0,
        }
    }
}

impl GenConfig {
    /// Default calibration scaled to `n_papers` submissions: the author pool
    /// and the multiplicity counts shrink or grow proportionally.
    pub fn scaled(n_papers: usize) -> Self {
        let base = Self::default();
        let ratio = n_papers as f64 / base.n_papers as f64;
        let scale = |c: usize| (c as f64 * ratio).round() as usize;
        Self {
            n_papers,
            n_authors: scale(base.n_authors).max(1),
            author_multiplicity_targets: base
                .author_multiplicity_targets
                .iter()
                .map(|t| TailTarget::new(t.threshold, scale(t.count)))
                .collect(),
            ..base
        }
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_papers == 0 {
            return Err(Error::Config("n_papers must be at least 1".into()));
        }
        if self.n_authors == 0 {
            return Err(Error::Config("n_authors must be at least 1".into()));
        }
        if !(self.true_score_sd > 0.0 && self.true_score_sd.is_finite()) || !self.true_score_mean.is_finite() {
            return Err(Error::Config("true_score_sd must be positive and the mean finite".into()));
        }
        self.authors_per_paper_dist.validate("authors_per_paper_dist")?;
        self.reviewers_per_paper_dist.validate("reviewers_per_paper_dist")?;
        self.reviewer_capacity_dist.validate("reviewer_capacity_dist")?;
        if !(0.0..=1.0).contains(&self.prolific_clustering) {
            return Err(Error::Config(format!(
                "prolific_clustering {} outside [0, 1]",
                self.prolific_clustering
            )));
        }
        if !(self.capacity_slack > 0.0 && self.capacity_slack.is_finite()) {
            return Err(Error::Config("capacity_slack must be positive".into()));
        }
        if self.n_reviewers == Some(0) {
            return Err(Error::Config("n_reviewers must be at least 1".into()));
        }

        let targets = &self.author_multiplicity_targets;
        for t in targets {
            if t.threshold < 2 {
                return Err(Error::Config(format!("multiplicity threshold {} must be at least 2", t.threshold)));
            }
            if t.threshold > self.max_papers_per_author {
                return Err(Error::Config(format!(
                    "multiplicity threshold {} exceeds max_papers_per_author {}",
                    t.threshold, self.max_papers_per_author
                )));
            }
        }
        for pair in targets.windows(2) {
            if pair[1].threshold <= pair[0].threshold {
                return Err(Error::Config("multiplicity targets must be sorted by strictly increasing threshold".into()));
            }
            if pair[1].count > pair[0].count {
                return Err(Error::Config(format!(
                    "infeasible multiplicity targets: {} authors with >= {} papers but only {} with >= {}",
                    pair[1].count, pair[1].threshold, pair[0].count, pair[0].threshold
                )));
            }
        }
        if let Some(first) = targets.first() {
            if first.count > self.n_authors {
                return Err(Error::Config(format!(
                    "{} authors with >= {} papers but only {} authors in total",
                    first.count, first.threshold, self.n_authors
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conference {
    /// Latent quality θ* of each paper.
    pub true_scores: Vec<f64>,
    /// Papers of each author, ascending.
    pub authorship: Vec<Vec<PaperId>>,
    /// Papers assigned to each reviewer, ascending.
    pub assignment: Vec<Vec<PaperId>>,
    /// Reviewers of each paper, ascending.
    pub reverse_assignment: Vec<Vec<ReviewerId>>,
}

impl Conference {
    pub fn n_papers(&self) -> usize {
        self.true_scores.len()
    }

    pub fn n_reviewers(&self) -> usize {
        self.assignment.len()
    }

    pub fn n_authors(&self) -> usize {
        self.authorship.len()
    }

    /// Builds the conference from explicit parts, deriving the reverse
    /// assignment and checking every structural invariant.
    pub fn from_parts(
        true_scores: Vec<f64>,
        authorship: Vec<Vec<PaperId>>,
        mut assignment: Vec<Vec<PaperId>>,
    ) -> Result<Self> {
        for papers in &mut assignment {
            papers.sort_unstable();
        }
        let mut reverse_assignment = vec![Vec::new(); true_scores.len()];
        for (r, papers) in assignment.iter().enumerate() {
            for &p in papers {
                if p >= true_scores.len() {
                    return Err(Error::Argument(format!("reviewer {r} assigned unknown paper {p}")));
                }
                reverse_assignment[p].push(r);
            }
        }
        let conf = Self {
            true_scores,
            authorship,
            assignment,
            reverse_assignment,
        };
        conf.validate()?;
        Ok(conf)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_papers();
        let mut has_author = vec![false; n];
        for (a, papers) in self.authorship.iter().enumerate() {
            if papers.is_empty() {
                return Err(Error::Argument(format!("author {a} has no papers")));
            }
            for &p in papers {
                if p >= n {
                    return Err(Error::Argument(format!("author {a} lists unknown paper {p}")));
                }
                has_author[p] = true;
            }
            if papers.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Argument(format!("author {a} lists a paper twice or out of order")));
            }
        }
        if let Some(p) = has_author.iter().position(|&h| !h) {
            return Err(Error::Argument(format!("paper {p} has no author")));
        }
        let mut slots = 0usize;
        for (r, papers) in self.assignment.iter().enumerate() {
            if papers.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Argument(format!("reviewer {r} holds a paper twice")));
            }
            slots += papers.len();
        }
        if self.reverse_assignment.len() != n {
            return Err(Error::Argument("reverse assignment length mismatch".into()));
        }
        let mut reverse_slots = 0usize;
        for (p, reviewers) in self.reverse_assignment.iter().enumerate() {
            if reviewers.is_empty() {
                return Err(Error::Argument(format!("paper {p} has no reviewer")));
            }
            for &r in reviewers {
                if self.assignment.get(r).map_or(true, |ps| ps.binary_search(&p).is_err()) {
                    return Err(Error::Argument(format!("reverse assignment lists reviewer {r} for paper {p}")));
                }
            }
            reverse_slots += reviewers.len();
        }
        if slots != reverse_slots {
            return Err(Error::Argument("assignment and reverse assignment disagree".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("conference serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let conf: Self = serde_json::from_str(text).map_err(|e| Error::Argument(format!("conference JSON: {e}")))?;
        conf.validate()?;
        Ok(conf)
    }
}

/// Exponent of the discrete power law `p(m) ∝ m^-α` on
/// `[t₁, max]` whose conditional tail fractions `P(m ≥ tₖ | m ≥ t₁)` best
/// match the targets in log space. Falls back to 2 when fewer than two
/// targets constrain the shape.
pub fn fit_power_law_exponent(targets: &[TailTarget], max: u32) -> f64 {
    let usable: Vec<&TailTarget> = targets.iter().filter(|t| t.count > 0).collect();
    if usable.len() < 2 {
        return 2.0;
    }
    let lo = usable[0].threshold;
    let base = usable[0].count as f64;
    let loss = |alpha: f64| {
        let mass: Vec<f64> = (lo..=max).map(|m| f64::from(m).powf(-alpha)).collect();
        let total: f64 = mass.iter().sum();
        usable[1..]
            .iter()
            .map(|t| {
                let tail: f64 = mass[(t.threshold - lo) as usize..].iter().sum::<f64>() / total;
                let target = t.count as f64 / base;
                (tail.ln() - target.ln()).powi(2)
            })
            .sum::<f64>()
    };
    // Coarse scan then golden-section refinement.
    let grid: Vec<f64> = (0..=120).map(|k| 0.05 * k as f64).collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| loss(*a).total_cmp(&loss(*b)))
        .unwrap_or(2.0);
    let (mut a, mut b) = ((best - 0.05).max(0.0), best + 0.05);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if loss(c) < loss(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Papers-per-author counts for `config.n_authors` authors.
///
/// The number of authors in each bracket `[tₖ, tₖ₊₁)` is fixed exactly by
/// the tail targets; within a bracket the count follows a truncated
/// discrete power law with a fitted exponent. Authors below the first
/// threshold have exactly one paper. The result is shuffled.
pub fn sample_author_multiplicities<R: Rng + ?Sized>(config: &GenConfig, rng: &mut R) -> Result<Vec<u32>> {
    config.validate()?;
    let targets = &config.author_multiplicity_targets;
    let max = config.max_papers_per_author;
    let alpha = fit_power_law_exponent(targets, max);

    let mut counts = Vec::with_capacity(config.n_authors);
    let n_multi = targets.first().map_or(0, |t| t.count);
    counts.resize(config.n_authors - n_multi, 1u32);
    for (k, target) in targets.iter().enumerate() {
        let (upper, next_count) = match targets.get(k + 1) {
            Some(next) => (next.threshold - 1, next.count),
            None => (max, 0),
        };
        let in_bracket = target.count - next_count;
        if in_bracket == 0 {
            continue;
        }
        let support: Vec<u32> = (target.threshold..=upper).collect();
        let weights: Vec<f64> = support.iter().map(|&m| f64::from(m).powf(-alpha)).collect();
        let dist = DiscreteDist::new(support, weights);
        let sampler = dist.sampler();
        counts.extend((0..in_bracket).map(|_| sampler.sample(rng)));
    }
    counts.shuffle(rng);
    Ok(counts)
}

/// `n` i.i.d. Normal(mean, sd) draws.
pub fn gen_true_scores<R: Rng + ?Sized>(n: usize, mean: f64, sd: f64, rng: &mut R) -> Result<Vec<f64>> {
    let normal = Normal::new(mean, sd).map_err(|e| Error::Argument(format!("true score distribution: {e}")))?;
    Ok((0..n).map(|_| normal.sample(rng)).collect())
}

/// Nudges per-paper sizes up or down (within `[lo, hi]`) until they sum to
/// `target`, spreading the adjustments over randomly chosen papers.
fn rebalance_sizes<R: Rng + ?Sized>(sizes: &mut [u32], target: usize, lo: u32, hi: u32, rng: &mut R) -> Result<()> {
    let n = sizes.len();
    if target < n * lo as usize || target > n * hi as usize {
        return Err(Error::Generation(format!(
            "{target} authorship slots cannot be spread over {n} papers with {lo}..={hi} authors each"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let total: usize = sizes.iter().map(|&s| s as usize).sum();
        if total == target {
            return Ok(());
        }
        order.shuffle(rng);
        let mut remaining = total.abs_diff(target);
        for &i in &order {
            if remaining == 0 {
                break;
            }
            if total < target && sizes[i] < hi {
                sizes[i] += 1;
                remaining -= 1;
            } else if total > target && sizes[i] > lo {
                sizes[i] -= 1;
                remaining -= 1;
            }
        }
    }
}

fn build_authorship<R: Rng + ?Sized>(config: &GenConfig, multiplicities: &[u32], rng: &mut R) -> Result<Vec<Vec<PaperId>>> {
    let n = config.n_papers;
    let dist = &config.authors_per_paper_dist;
    let sampler = dist.sampler();
    let mut sizes: Vec<u32> = (0..n).map(|_| sampler.sample(rng)).collect();
    let total: usize = multiplicities.iter().map(|&m| m as usize).sum();
    rebalance_sizes(&mut sizes, total, dist.min(), dist.max(), rng)?;

    if let Some((a, &m)) = multiplicities.iter().enumerate().find(|(_, &m)| m as usize > n) {
        return Err(Error::Generation(format!("author {a} needs {m} distinct papers but only {n} exist")));
    }

    // Authors with several papers are dealt first, onto paper slots ranked by
    // a mix of per-paper affinity and per-slot noise; duplicates are then
    // swapped away.
    let mut prolific: Vec<AuthorId> = Vec::new();
    let mut single: Vec<AuthorId> = Vec::new();
    for (a, &m) in multiplicities.iter().enumerate() {
        let bucket = if m > 1 { &mut prolific } else { &mut single };
        bucket.extend(std::iter::repeat(a).take(m as usize));
    }
    prolific.shuffle(rng);
    single.shuffle(rng);
    let mut slots = prolific;
    slots.extend(single);

    let c = config.prolific_clustering;
    let affinity: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut keyed: Vec<(f64, PaperId)> = Vec::with_capacity(slots.len());
    for (p, &s) in sizes.iter().enumerate() {
        for _ in 0..s {
            keyed.push((c * affinity[p] + (1.0 - c) * rng.gen::<f64>(), p));
        }
    }
    keyed.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let paper_of_slot: Vec<PaperId> = keyed.into_iter().map(|(_, p)| p).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &p) in paper_of_slot.iter().enumerate() {
        members[p].push(i);
    }

    let on_paper = |slots: &[AuthorId], p: PaperId, a: AuthorId, skip: usize| {
        members[p].iter().any(|&q| q != skip && slots[q] == a)
    };
    const MAX_SWAP_TRIES: usize = 100_000;
    for i in 0..slots.len() {
        let p = paper_of_slot[i];
        if !on_paper(&slots, p, slots[i], i) {
            continue;
        }
        let mut fixed = false;
        for _ in 0..MAX_SWAP_TRIES {
            let j = rng.gen_range(0..slots.len());
            let q = paper_of_slot[j];
            if q == p {
                continue;
            }
            let (a, b) = (slots[i], slots[j]);
            if !on_paper(&slots, p, b, i) && !on_paper(&slots, q, a, j) {
                slots.swap(i, j);
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::Generation(format!("could not place author {} on distinct papers", slots[i])));
        }
    }

    let mut authorship = vec![Vec::new(); multiplicities.len()];
    for (i, &a) in slots.iter().enumerate() {
        authorship[a].push(paper_of_slot[i]);
    }
    for papers in &mut authorship {
        papers.sort_unstable();
    }
    Ok(authorship)
}

fn try_match<R: Rng + ?Sized>(paper_slots: &mut [PaperId], capacity: &[u32], rng: &mut R) -> Option<Vec<Vec<PaperId>>> {
    paper_slots.shuffle(rng);
    let mut open: Vec<ReviewerId> = capacity
        .iter()
        .enumerate()
        .flat_map(|(r, &c)| std::iter::repeat(r).take(c as usize))
        .collect();
    let mut held: Vec<Vec<PaperId>> = vec![Vec::new(); capacity.len()];
    const RANDOM_PICKS: usize = 32;
    for &p in paper_slots.iter() {
        let mut chosen = None;
        for _ in 0..RANDOM_PICKS {
            let k = rng.gen_range(0..open.len());
            if !held[open[k]].contains(&p) {
                chosen = Some(k);
                break;
            }
        }
        if chosen.is_none() {
            let start = rng.gen_range(0..open.len());
            chosen = (0..open.len())
                .map(|o| (start + o) % open.len())
                .find(|&k| !held[open[k]].contains(&p));
        }
        let k = chosen?;
        held[open.swap_remove(k)].push(p);
    }
    Some(held)
}

fn build_assignment<R: Rng + ?Sized>(config: &GenConfig, rng: &mut R) -> Result<Vec<Vec<PaperId>>> {
    let per_paper = config.reviewers_per_paper_dist.sampler();
    let loads: Vec<u32> = (0..config.n_papers).map(|_| per_paper.sample(rng)).collect();
    let mut paper_slots: Vec<PaperId> = loads
        .iter()
        .enumerate()
        .flat_map(|(p, &k)| std::iter::repeat(p).take(k as usize))
        .collect();
    let n_slots = paper_slots.len();

    let cap_sampler = config.reviewer_capacity_dist.sampler();
    let capacity: Vec<u32> = match config.n_reviewers {
        Some(n) => (0..n).map(|_| cap_sampler.sample(rng)).collect(),
        None => {
            let needed = (config.capacity_slack * n_slots as f64).ceil() as usize;
            let mut caps = Vec::new();
            let mut total = 0usize;
            while total < needed || caps.len() < config.reviewers_per_paper_dist.max() as usize {
                let c = cap_sampler.sample(rng);
                total += c as usize;
                caps.push(c);
            }
            caps
        }
    };
    let total_capacity: usize = capacity.iter().map(|&c| c as usize).sum();
    if total_capacity < n_slots {
        return Err(Error::Generation(format!(
            "reviewer capacity {total_capacity} is short of the {n_slots} review slots by {}",
            n_slots - total_capacity
        )));
    }
    let max_load = loads.iter().copied().max().unwrap_or(0) as usize;
    if capacity.len() < max_load {
        return Err(Error::Generation(format!(
            "a paper needs {max_load} distinct reviewers but only {} exist",
            capacity.len()
        )));
    }

    for _ in 0..config.max_matching_retries.max(1) {
        if let Some(mut held) = try_match(&mut paper_slots, &capacity, rng) {
            held.retain(|papers| !papers.is_empty());
            for papers in &mut held {
                papers.sort_unstable();
            }
            return Ok(held);
        }
    }
    Err(Error::Generation(format!(
        "reviewer matching hit a dead end {} times",
        config.max_matching_retries.max(1)
    )))
}

/// Generates a full synthetic conference from `config` and its
/// `master_seed`. Reviewers left without papers are dropped.
pub fn gen_conference(config: &GenConfig) -> Result<Conference> {
    config.validate()?;
    let seeds = SeedStream::new(config.master_seed).child(Purpose::Conference, 0);
    let true_scores = gen_true_scores(
        config.n_papers,
        config.true_score_mean,
        config.true_score_sd,
        &mut seeds.rng(Purpose::TrueScores, 0),
    )?;
    let multiplicities = sample_author_multiplicities(config, &mut seeds.rng(Purpose::AuthorMultiplicity, 0))?;
    let authorship = build_authorship(config, &multiplicities, &mut seeds.rng(Purpose::Authorship, 0))?;
    let assignment = build_assignment(config, &mut seeds.rng(Purpose::Assignment, 0))?;
    Conference::from_parts(true_scores, authorship, assignment)
}

/// Fraction of entries that are at least `threshold`.
pub fn tail_fraction(counts: &[u32], threshold: u32) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    counts.iter().filter(|&&c| c >= threshold).count() as f64 / counts.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub(crate) fn tiny_config() -> GenConfig {
        GenConfig {
            n_papers: 1,
            n_authors: 1,
            author_multiplicity_targets: vec![],
            authors_per_paper_dist: DiscreteDist::point(1),
            reviewers_per_paper_dist: DiscreteDist::point(1),
            reviewer_capacity_dist: DiscreteDist::point(1),
            n_reviewers: Some(1),
            ..GenConfig::default()
        }
    }

    #[test]
    fn default_multiplicities_hit_the_tail_counts() {
        let config = GenConfig::default();
        let m = sample_author_multiplicities(&config, &mut rng(1)).unwrap();
        assert_eq!(m.len(), 18535);
        let f2 = tail_fraction(&m, 2);
        assert!((0.22..=0.27).contains(&f2), "{f2}");
        assert_eq!(m.iter().filter(|&&c| c >= 2).count(), 4505);
        assert_eq!(m.iter().filter(|&&c| c >= 5).count(), 508);
        assert_eq!(m.iter().filter(|&&c| c >= 10).count(), 74);
        assert_eq!(m.iter().filter(|&&c| c >= 15).count(), 26);
        assert!(m.iter().all(|&c| (1..=32).contains(&c)));
    }

    #[test]
    fn no_targets_means_single_paper_authors() {
        let config = GenConfig {
            n_authors: 50,
            author_multiplicity_targets: vec![],
            ..GenConfig::default()
        };
        let m = sample_author_multiplicities(&config, &mut rng(2)).unwrap();
        assert_eq!(m, vec![1; 50]);
    }

    #[test]
    fn two_of_four_authors_above_threshold() {
        let config = GenConfig {
            n_authors: 4,
            author_multiplicity_targets: vec![TailTarget::new(2, 2)],
            ..GenConfig::default()
        };
        let mut r = rng(3);
        for _ in 0..10_000 {
            let m = sample_author_multiplicities(&config, &mut r).unwrap();
            assert_eq!(m.len(), 4);
            assert_eq!(tail_fraction(&m, 2), 0.5);
            assert_eq!(m.iter().filter(|&&c| c == 1).count(), 2);
        }
    }

    #[test]
    fn infeasible_targets_are_config_errors() {
        let increasing = GenConfig {
            author_multiplicity_targets: vec![TailTarget::new(2, 10), TailTarget::new(5, 20)],
            ..GenConfig::default()
        };
        assert!(matches!(sample_author_multiplicities(&increasing, &mut rng(0)), Err(Error::Config(_))));
        let unsorted = GenConfig {
            author_multiplicity_targets: vec![TailTarget::new(5, 10), TailTarget::new(2, 5)],
            ..GenConfig::default()
        };
        assert!(unsorted.validate().is_err());
        let too_many = GenConfig {
            n_authors: 3,
            author_multiplicity_targets: vec![TailTarget::new(2, 4)],
            ..GenConfig::default()
        };
        assert!(too_many.validate().is_err());
    }

    #[test]
    fn power_law_fit_reproduces_default_ratios() {
        let config = GenConfig::default();
        let alpha = fit_power_law_exponent(&config.author_multiplicity_targets, 32);
        assert!((1.0..4.0).contains(&alpha), "{alpha}");
    }

    #[test]
    fn true_scores_degenerate_and_empty() {
        assert!(gen_true_scores(0, 5.0, 1.0, &mut rng(0)).unwrap().is_empty());
        let flat = gen_true_scores(100, 5.0, 0.0, &mut rng(0)).unwrap();
        assert!(flat.iter().all(|&v| v == 5.0));
        assert_eq!(gen_true_scores(6538, 5.0, 1.0, &mut rng(0)).unwrap().len(), 6538);
    }

    #[test]
    fn true_score_mean_converges() {
        let v = gen_true_scores(1_000_000, 5.0, 1.0, &mut rng(9)).unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        // 3·sd/√n = 0.003; the looser 0.01 bound is the stated acceptance window
        assert!((mean - 5.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn minimal_conference() {
        let conf = gen_conference(&tiny_config()).unwrap();
        assert_eq!(conf.n_papers(), 1);
        assert_eq!(conf.authorship, vec![vec![0]]);
        assert_eq!(conf.assignment, vec![vec![0]]);
        assert_eq!(conf.reverse_assignment, vec![vec![0]]);
    }

    #[test]
    fn capacity_deficit_is_reported() {
        let config = GenConfig {
            n_papers: 10,
            n_authors: 10,
            author_multiplicity_targets: vec![],
            authors_per_paper_dist: DiscreteDist::point(1),
            reviewers_per_paper_dist: DiscreteDist::point(3),
            reviewer_capacity_dist: DiscreteDist::point(2),
            n_reviewers: Some(5),
            ..GenConfig::default()
        };
        let err = gen_conference(&config).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
        assert!(err.to_string().contains("by 20"), "{err}");
    }

    #[test]
    fn small_conference_is_valid_and_deterministic() {
        let config = GenConfig::scaled(400).with_seed(11);
        let a = gen_conference(&config).unwrap();
        let b = gen_conference(&config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        a.validate().unwrap();
        for reviewers in &a.reverse_assignment {
            assert!((3..=4).contains(&reviewers.len()));
        }
        let c = gen_conference(&config.clone().with_seed(12)).unwrap();
        assert_ne!(a.true_scores, c.true_scores);
    }

    #[test]
    fn json_round_trip() {
        let conf = gen_conference(&GenConfig::scaled(120).with_seed(5)).unwrap();
        assert_eq!(Conference::from_json(&conf.to_json()).unwrap(), conf);
    }

    #[test]
    fn gen_config_json_accepts_partial_documents() {
        let config: GenConfig = serde_json::from_str(r#"{"n_papers": 100, "master_seed": 3}"#).unwrap();
        assert_eq!(config.n_papers, 100);
        assert_eq!(config.master_seed, 3);
        assert_eq!(config.n_authors, 18535);
    }
}
