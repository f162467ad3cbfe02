//! Browser bindings for the protocol workbench demo page.
//!
//! Three operations back the page's panels: the workload comparison curves,
//! the permutation-recovery probability bounds, and live set-elimination
//! attack traces. Inputs are clamped to sane ranges rather than rejected so
//! sliders cannot crash the page; everything is deterministic in the seed.

use hipsim_core::adversary::{recover_basic_secret, ExtractionModel};
use hipsim_core::analysis::{
    recovery_probability_bounds, workload_basic, workload_enhanced, workload_practical,
};
use hipsim_core::feature_model::{FeatureSet, FeatureUniverse, Question};
use hipsim_core::protocols::{basic_round, BasicConfig};
use hipsim_core::rng::stream_from_seed;
use rand::Rng as _;
use wasm_bindgen::prelude::wasm_bindgen;

/// Adversary workload of the three schemes as the group size grows.
///
/// Returns rows flattened as `[L, basic, enhanced, practical]` for
/// `L = 2..=group_max`, with the enhanced scheme answering half the group
/// (rounded up). `universe_n` drives the basic/enhanced columns,
/// `word_count` and `x` the practical one.
#[wasm_bindgen]
pub fn workload_curves(universe_n: f64, word_count: u32, x: f64, group_max: u32) -> Vec<f64> {
    let universe_n = universe_n.clamp(2.0, 1e9);
    let word_count = word_count.clamp(4, 10_000_000) as u64;
    let x = x.clamp(0.01, 0.99);
    let group_max = group_max.clamp(2, 64);
    let mut out = Vec::with_capacity((group_max as usize - 1) * 4);
    for group in 2..=group_max {
        out.push(group as f64);
        out.push(workload_basic(universe_n));
        out.push(workload_enhanced(universe_n, group, group.div_ceil(2)));
        out.push(workload_practical(word_count, x, group));
    }
    out
}

/// Closed-form bounds on full permutation recovery after `k` observed
/// rounds, flattened as `[k, lower, upper]` for `k = 1..=rounds_max`.
#[wasm_bindgen]
pub fn recovery_bound_curves(group_size: u32, assigned: u32, rounds_max: u32) -> Vec<f64> {
    let group_size = group_size.clamp(1, 16);
    let assigned = assigned.clamp(1, group_size);
    let rounds_max = rounds_max.clamp(1, 40);
    let mut out = Vec::with_capacity(rounds_max as usize * 3);
    for rounds in 1..=rounds_max {
        let b = recovery_probability_bounds(rounds, group_size, assigned)
            .expect("clamped parameters are valid");
        out.push(rounds as f64);
        out.push(b.lower);
        out.push(b.upper);
    }
    out
}

/// One set-elimination attack against a fresh honest session: the candidate
/// count after each examined picture, ending at 1 when the secret feature is
/// cornered. `extraction_pct` below 100 lets the simulated attacker miss
/// features and sometimes lose the secret entirely.
#[wasm_bindgen]
pub fn elimination_trace(universe_n: u32, extraction_pct: u32, seed: u32) -> Vec<u32> {
    let n = universe_n.clamp(4, 1 << 16);
    let p = (extraction_pct.clamp(1, 100) as f64) / 100.0;
    let universe = FeatureUniverse::new(n).expect("clamped universe is valid");
    let mut rng = stream_from_seed(seed as u64);
    let secret = rng.gen_range(1..=n);
    let cfg = BasicConfig::new(universe, Question::single(secret), 1, 1)
        .expect("single-feature secret is valid");
    let budget = 4 * (n as f64).log2().ceil() as u32 + 100;
    let rounds: Vec<(FeatureSet, bool)> = (0..budget)
        .map(|_| basic_round(&cfg, &mut rng).expect("single-feature conditioning succeeds"))
        .collect();
    let model = ExtractionModel::new(p).expect("clamped probability is valid");
    let attack = recover_basic_secret(universe, rounds, model, &mut rng);
    attack.trace.iter().map(|step| step.survivor_count).collect()
}
