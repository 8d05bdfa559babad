//! Slow reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Weighted least-squares monotone fit by exhaustive search over every
/// split of `0..n` into contiguous blocks. The optimum is piecewise constant
/// with each piece equal to its weighted mean, so the best feasible split is
/// the answer.
pub fn brute_isotonic(values: &[f64], weights: &[f64], non_increasing: bool) -> Vec<f64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut fit = vec![0.0; n];
        let mut start = 0;
        let mut means = Vec::new();
        for end in 1..=n {
            let cut = end == n || mask & (1 << (end - 1)) != 0;
            if !cut {
                continue;
            }
            let w: f64 = weights[start..end].iter().sum();
            let m = values[start..end].iter().zip(&weights[start..end]).map(|(v, w)| v * w).sum::<f64>() / w;
            fit[start..end].iter_mut().for_each(|x| *x = m);
            means.push(m);
            start = end;
        }
        let feasible = means.windows(2).all(|p| if non_increasing { p[0] >= p[1] } else { p[0] <= p[1] });
        if !feasible {
            continue;
        }
        let loss: f64 = fit.iter().zip(values).zip(weights).map(|((f, v), w)| w * (f - v).powi(2)).sum();
        if best.as_ref().map_or(true, |(b, _)| loss < *b) {
            best = Some((loss, fit));
        }
    }
    best.expect("the single-block split is always feasible").1
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Plackett-Luce probability as a plain product of choice probabilities.
pub fn pl_prob(theta: &[f64], perm: &[usize]) -> f64 {
    let w: Vec<f64> = theta.iter().map(|t| t.exp()).collect();
    let mut p = 1.0;
    for k in 0..perm.len() {
        let rest: f64 = perm[k..].iter().map(|&i| w[i]).sum();
        p *= w[perm[k]] / rest;
    }
    p
}

/// Tier peeling written directly from its definition: in each round, a
/// paper is beaten if some order places another remaining paper in a
/// strictly earlier group.
pub fn naive_tiers(orders: &[Vec<Vec<usize>>], papers: &[usize]) -> Vec<Vec<usize>> {
    let mut left: BTreeSet<usize> = papers.iter().copied().collect();
    let mut tiers = Vec::new();
    while !left.is_empty() {
        let mut beaten = BTreeSet::new();
        for groups in orders {
            let live: Vec<Vec<usize>> = groups
                .iter()
                .map(|g| g.iter().copied().filter(|p| left.contains(p)).collect::<Vec<_>>())
                .filter(|g| !g.is_empty())
                .collect();
            for later in live.iter().skip(1) {
                beaten.extend(later.iter().copied());
            }
        }
        let tier: Vec<usize> = left.iter().copied().filter(|p| !beaten.contains(p)).collect();
        if tier.is_empty() {
            tiers.push(left.iter().copied().collect());
            break;
        }
        for p in &tier {
            left.remove(p);
        }
        tiers.push(tier);
    }
    tiers
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
