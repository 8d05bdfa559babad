//! Browser bindings for a few toolkit operations. Every export takes plain
//! numbers or strings and returns a JSON string, or throws a string error.

use review_calib::estimators::Method;
use review_calib::experiment::{prepare, run_cell};
use review_calib::sgp::{pl_ranking_prob, sample_pl_ranking};
use review_calib::{isotonic_project_indexed, ComparisonSource, ExperimentConfig, GenConfig, NoiseCase, Purpose, SeedStream};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_PL_ITEMS: usize = 6;
const MAX_DRAWS: usize = 1_000_000;
const MAX_DEMO_PAPERS: usize = 3000;

type Out = Result<String, String>;

fn to_json<T: Serialize>(value: &T) -> Out {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn js(result: Out) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e))
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split([',', ' ', '\n', '\t'])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("{t:?} is not a number")))
        .collect()
}

#[derive(Serialize)]
struct Projection {
    scores: Vec<f64>,
    order: Vec<usize>,
    projected: Vec<f64>,
}

/// Projects `scores` onto the order "first listed is best" given by `order`
/// (0-based indices), moving a fraction `blend` of the way.
pub fn project(scores: &str, order: &str, blend: f64) -> Out {
    let scores = parse_numbers(scores)?;
    let order: Vec<usize> = parse_numbers(order)?
        .into_iter()
        .map(|x| if x >= 0.0 && x.fract() == 0.0 { Ok(x as usize) } else { Err(format!("bad index {x}")) })
        .collect::<Result<_, _>>()?;
    let projected = isotonic_project_indexed(&scores, &order, blend).map_err(|e| e.to_string())?;
    to_json(&Projection { scores, order, projected })
}

#[derive(Serialize)]
struct RankingRow {
    ranking: Vec<usize>,
    probability: f64,
    frequency: f64,
}

#[derive(Serialize)]
struct PlSummary {
    rows: Vec<RankingRow>,
    total_probability: f64,
    draws: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Exact Plackett-Luce probabilities of every ranking of `theta` next to the
/// frequencies seen in `draws` sampled rankings.
pub fn plackett_luce(theta: &str, draws: usize, seed: u64) -> Out {
    let theta = parse_numbers(theta)?;
    if theta.is_empty() || theta.len() > MAX_PL_ITEMS {
        return Err(format!("give between 1 and {MAX_PL_ITEMS} qualities"));
    }
    if draws > MAX_DRAWS {
        return Err(format!("at most {MAX_DRAWS} draws"));
    }
    let perms = permutations(theta.len());
    let mut counts = vec![0usize; perms.len()];
    let mut rng = SeedStream::new(seed).rng(Purpose::Demo, 0);
    for _ in 0..draws {
        let drawn = sample_pl_ranking(&theta, &mut rng);
        let k = perms.binary_search(&drawn).expect("sampled a permutation");
        counts[k] += 1;
    }
    let rows: Vec<RankingRow> = perms
        .into_iter()
        .zip(counts)
        .map(|(ranking, c)| {
            let probability = pl_ranking_prob(&theta, &ranking).map_err(|e| e.to_string())?;
            let frequency = if draws == 0 { 0.0 } else { c as f64 / draws as f64 };
            Ok(RankingRow { ranking, probability, frequency })
        })
        .collect::<Result<_, String>>()?;
    let total_probability = rows.iter().map(|r| r.probability).sum();
    to_json(&PlSummary { rows, total_probability, draws })
}

#[derive(Serialize)]
struct MethodRmse {
    method: &'static str,
    rmse: f64,
}

#[derive(Serialize)]
struct ConferenceRun {
    papers: usize,
    reviewers: usize,
    owned_papers: usize,
    case: &'static str,
    methods: Vec<MethodRmse>,
    top_tier_size: usize,
    n_tiers: usize,
}

/// One simulated conference of `n_papers` under a noise case, scored by all
/// four methods.
pub fn simulate(n_papers: usize, case: &str, blend: f64, comparisons: &str, seed: u64) -> Out {
    if !(20..=MAX_DEMO_PAPERS).contains(&n_papers) {
        return Err(format!("papers must be between 20 and {MAX_DEMO_PAPERS}"));
    }
    let case: NoiseCase = case.parse().map_err(|e: review_calib::Error| e.to_string())?;
    let config = ExperimentConfig {
        gen: GenConfig::scaled(n_papers),
        cases: vec![case],
        repetitions: 1,
        blend,
        comparisons: comparisons.parse::<ComparisonSource>().map_err(|e| e.to_string())?,
        master_seed: seed,
        ..ExperimentConfig::default()
    };
    let prepared = prepare(&config).map_err(|e| e.to_string())?;
    let cell = run_cell(&prepared, &config, case, 0).map_err(|e| e.to_string())?;
    to_json(&ConferenceRun {
        papers: prepared.conference.n_papers(),
        reviewers: prepared.conference.n_reviewers(),
        owned_papers: prepared.owners.owned_papers(),
        case: case.name(),
        methods: Method::ALL
            .into_iter()
            .zip(cell.rmse)
            .map(|(m, rmse)| MethodRmse { method: m.label(), rmse })
            .collect(),
        top_tier_size: cell.top_tier_size,
        n_tiers: cell.n_tiers,
    })
}

#[wasm_bindgen(js_name = project)]
pub fn project_js(scores: &str, order: &str, blend: f64) -> Result<String, JsValue> {
    js(project(scores, order, blend))
}

#[wasm_bindgen(js_name = plackettLuce)]
pub fn plackett_luce_js(theta: &str, draws: u32, seed: u32) -> Result<String, JsValue> {
    js(plackett_luce(theta, draws as usize, seed as u64))
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(n_papers: u32, case: &str, blend: f64, comparisons: &str, seed: u32) -> Result<String, JsValue> {
    js(simulate(n_papers as usize, case, blend, comparisons, seed as u64))
}
