//! Weighted least-squares isotonic regression (pool adjacent violators).
//!
//! Used twice in the toolkit: by the score-generating process, where a
//! reviewer's raw scores are projected onto the ranking they sampled, and by
//! the calibration estimators, where averaged scores are projected onto a
//! ranking of papers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Required monotonicity of the fitted values along the index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotonicProblem {
    pub values: Vec<f64>,
    /// Per-value weights; `None` means unit weights.
    pub weights: Option<Vec<f64>>,
    pub direction: Direction,
}

impl IsotonicProblem {
    pub fn new(values: Vec<f64>, direction: Direction) -> Self {
        Self {
            values,
            weights: None,
            direction,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    fn validate(&self) -> Result<()> {
        if let Some(w) = &self.weights {
            if w.len() != self.values.len() {
                return Err(Error::Argument(format!(
                    "{} weights for {} values",
                    w.len(),
                    self.values.len()
                )));
            }
            if let Some((i, &wi)) = w.iter().enumerate().find(|(_, &wi)| !(wi > 0.0 && wi.is_finite())) {
                return Err(Error::Argument(format!("weight {i} is {wi}, must be positive and finite")));
            }
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("value {i} is not finite")));
        }
        Ok(())
    }
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn absorb(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Debug, Clone, Copy)]
struct Block {
    weighted_sum: CompensatedSum,
    weight: f64,
    len: usize,
    // Singleton blocks report their input value untouched, so feasible
    // inputs come back bit-identical regardless of weights.
    single: f64,
}

impl Block {
    fn new(value: f64, weight: f64) -> Self {
        let mut weighted_sum = CompensatedSum::default();
        weighted_sum.add(value * weight);
        Self {
            weighted_sum,
            weight,
            len: 1,
            single: value,
        }
    }

    fn value(&self) -> f64 {
        if self.len == 1 {
            self.single
        } else {
            self.weighted_sum.total() / self.weight
        }
    }

    fn merge(&mut self, other: Block) {
        self.weighted_sum.absorb(other.weighted_sum);
        self.weight += other.weight;
        self.len += other.len;
    }
}

/// Solves `min Σ wᵢ (xᵢ − yᵢ)²` subject to `x` being monotone in the
/// requested direction. Runs in O(n).
pub fn isotonic_fit(problem: &IsotonicProblem) -> Result<Vec<f64>> {
    problem.validate()?;
    let values = &problem.values;
    let weight_of = |i: usize| problem.weights.as_ref().map_or(1.0, |w| w[i]);
    // `true` when a block followed by a block of value `next` breaks the order.
    let violates = |prev: f64, next: f64| match problem.direction {
        Direction::NonDecreasing => prev > next,
        Direction::NonIncreasing => prev < next,
    };

    let mut blocks: Vec<Block> = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        blocks.push(Block::new(v, weight_of(i)));
        while blocks.len() >= 2 {
            let k = blocks.len();
            let last = blocks[k - 1];
            let prev = &mut blocks[k - 2];
            if !violates(prev.value(), last.value()) {
                break;
            }
            prev.merge(last);
            blocks.pop();
        }
    }

    let mut out = Vec::with_capacity(values.len());
    for block in &blocks {
        let v = block.value();
        out.extend(std::iter::repeat(v).take(block.len));
    }
    Ok(out)
}

/// Checks that `order` is a permutation of `0..n`.
pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::Argument(format!(
            "ordering has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Argument(format!("ordering is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Projects `scores[order[0]] ≥ scores[order[1]] ≥ …` with unit weights and
/// scatters the fit back to the original positions.
pub(crate) fn project_along(scores: &[f64], order: &[usize]) -> Result<Vec<f64>> {
    check_permutation(order, scores.len())?;
    let gathered = order.iter().map(|&i| scores[i]).collect();
    let fitted = isotonic_fit(&IsotonicProblem::new(gathered, Direction::NonIncreasing))?;
    let mut out = vec![0.0; scores.len()];
    for (&i, v) in order.iter().zip(fitted) {
        out[i] = v;
    }
    Ok(out)
}

/// Projects `scores` onto the set of vectors that are non-increasing along
/// `order` (best first), then returns `blend · fitted + (1 − blend) · scores`.
pub fn isotonic_project_indexed(scores: &[f64], order: &[usize], blend: f64) -> Result<Vec<f64>> {
    check_blend(blend)?;
    let fitted = project_along(scores, order)?;
    Ok(scores
        .iter()
        .zip(fitted)
        .map(|(&s, f)| s + blend * (f - s))
        .collect())
}

pub(crate) fn check_blend(blend: f64) -> Result<()> {
    if (0.0..=1.0).contains(&blend) {
        Ok(())
    } else {
        Err(Error::Argument(format!("blend {blend} outside [0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fit(values: &[f64], direction: Direction) -> Vec<f64> {
        isotonic_fit(&IsotonicProblem::new(values.to_vec(), direction)).unwrap()
    }

    #[test]
    fn feasible_input_is_returned_unchanged() {
        assert_eq!(fit(&[3.0, 2.0, 1.0], Direction::NonIncreasing), vec![3.0, 2.0, 1.0]);
        let p = IsotonicProblem::new(vec![0.7, 0.3, 0.1], Direction::NonIncreasing)
            .with_weights(vec![3.0, 7.0, 0.1]);
        assert_eq!(isotonic_fit(&p).unwrap(), vec![0.7, 0.3, 0.1]);
    }

    #[test]
    fn fully_reversed_input_pools_to_the_mean() {
        assert_eq!(fit(&[1.0, 2.0, 3.0], Direction::NonIncreasing), vec![2.0, 2.0, 2.0]);
        assert_eq!(fit(&[1.0, 3.0, 2.0], Direction::NonIncreasing), vec![2.0, 2.0, 2.0]);
        assert_eq!(fit(&[3.0, 2.0, 1.0], Direction::NonDecreasing), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn weighted_pool_uses_weighted_mean() {
        let p = IsotonicProblem::new(vec![1.0, 4.0], Direction::NonIncreasing).with_weights(vec![3.0, 1.0]);
        assert_eq!(isotonic_fit(&p).unwrap(), vec![1.75, 1.75]);
    }

    #[test]
    fn empty_input_gives_empty_output() {
        assert!(fit(&[], Direction::NonIncreasing).is_empty());
    }

    #[test]
    fn bad_weights_are_rejected() {
        for w in [0.0, -1.0, f64::NAN] {
            let p = IsotonicProblem::new(vec![1.0, 2.0], Direction::NonIncreasing).with_weights(vec![1.0, w]);
            assert!(matches!(isotonic_fit(&p), Err(Error::Argument(_))));
        }
        let p = IsotonicProblem::new(vec![1.0, 2.0], Direction::NonIncreasing).with_weights(vec![1.0]);
        assert!(isotonic_fit(&p).is_err());
    }

    #[test]
    fn indexed_projection_and_blend() {
        // order says index 0 ranks above index 1
        assert_eq!(isotonic_project_indexed(&[1.0, 3.0], &[0, 1], 0.5).unwrap(), vec![1.5, 2.5]);
        assert_eq!(isotonic_project_indexed(&[1.0, 3.0], &[0, 1], 1.0).unwrap(), vec![2.0, 2.0]);
        assert_eq!(isotonic_project_indexed(&[1.0, 3.0], &[0, 1], 0.0).unwrap(), vec![1.0, 3.0]);
        // already consistent when index 1 is ranked first
        for blend in [0.0, 0.3, 0.5, 1.0] {
            assert_eq!(isotonic_project_indexed(&[1.0, 3.0], &[1, 0], blend).unwrap(), vec![1.0, 3.0]);
        }
    }

    #[test]
    fn indexed_projection_rejects_bad_arguments() {
        assert!(isotonic_project_indexed(&[1.0, 3.0], &[0, 1], 1.5).is_err());
        assert!(isotonic_project_indexed(&[1.0, 3.0], &[0, 1], -0.1).is_err());
        assert!(isotonic_project_indexed(&[1.0, 3.0], &[0, 0], 0.5).is_err());
        assert!(isotonic_project_indexed(&[1.0, 3.0], &[0], 0.5).is_err());
        assert!(isotonic_project_indexed(&[1.0, 3.0], &[0, 2], 0.5).is_err());
    }

    fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0f64..10.0, n),
                prop::collection::vec(0.05f64..5.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn output_is_monotone_and_preserves_weighted_total((y, w) in instance()) {
            let x = isotonic_fit(&IsotonicProblem::new(y.clone(), Direction::NonIncreasing).with_weights(w.clone())).unwrap();
            for pair in x.windows(2) {
                prop_assert!(pair[0] >= pair[1] - 1e-12);
            }
            let tx: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            let ty: f64 = y.iter().zip(&w).map(|(a, b)| a * b).sum();
            prop_assert!((tx - ty).abs() <= 1e-9 * ty.abs().max(1.0));
        }

        #[test]
        fn fit_is_idempotent((y, w) in instance()) {
            let p = IsotonicProblem::new(y, Direction::NonDecreasing).with_weights(w.clone());
            let once = isotonic_fit(&p).unwrap();
            let twice = isotonic_fit(&IsotonicProblem::new(once.clone(), Direction::NonDecreasing).with_weights(w)).unwrap();
            for (a, b) in once.iter().zip(&twice) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn fit_is_translation_equivariant((y, w) in instance(), c in -50.0f64..50.0) {
            let base = isotonic_fit(&IsotonicProblem::new(y.clone(), Direction::NonIncreasing).with_weights(w.clone())).unwrap();
            let shifted: Vec<f64> = y.iter().map(|v| v + c).collect();
            let moved = isotonic_fit(&IsotonicProblem::new(shifted, Direction::NonIncreasing).with_weights(w)).unwrap();
            for (a, b) in base.iter().zip(&moved) {
                prop_assert!((a + c - b).abs() <= 1e-9);
            }
        }
    }
}
