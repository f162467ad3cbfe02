//! Closed-form workload and probability formulas, plus the Monte Carlo
//! estimators that check them.

mod estimate;
mod sweep;

pub use estimate::{estimate, EstimatorParams, EstimatorReport, Scheme, ESTIMATOR_NAMES};
pub use sweep::{sweep, SweepFigure, SweepGrid};

use crate::error::{Error, Result};

/// Two-sided closed-form bounds on the probability that the column-matching
/// attack recovers the full permutation string from `rounds` observed
/// iterations of a group of `group_size` pictures with `assigned` answered
/// slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Bounds on full-permutation recovery probability.
///
/// With `a = 1 - 2^-k`, `L` positions and `l` of them assigned:
/// lower = (a^(L-1) * l/L + a^L * (1 - l/L))^L, upper = (1 - 2^-k * (1 - l/L))^L.
/// An assigned column always matches its own answer column, and each of the
/// other columns collides with probability `2^-k`; the bounds raise the
/// single-position success probabilities to the `L`-th power.
pub fn recovery_probability_bounds(
    rounds: u32,
    group_size: u32,
    assigned: u32,
) -> Result<ProbabilityBounds> {
    if group_size == 0 || assigned == 0 || assigned > group_size {
        return Err(Error::InvalidParam(format!(
            "assigned slots {assigned} outside 1..={group_size}"
        )));
    }
    let group = group_size as f64;
    let frac = assigned as f64 / group;
    let collide = 0.5f64.powi(rounds as i32);
    let avoid = 1.0 - collide;
    let lower =
        (avoid.powi(group_size as i32 - 1) * frac + avoid.powi(group_size as i32) * (1.0 - frac))
            .powi(group_size as i32);
    let upper = (1.0 - collide * (1.0 - frac)).powi(group_size as i32);
    Ok(ProbabilityBounds { lower, upper })
}

/// Expected adversary work to strip the basic scheme's secret:
/// `log2 n` pictures examined at `n/2` membership checks each.
pub fn workload_basic(n: f64) -> f64 {
    assert!(n >= 2.0, "universe too small");
    n / 2.0 * n.log2()
}

/// Expected adversary work against the enhanced scheme: the path hunt
/// multiplies the basic cost by `(L^2 + 1) / (l + 1)`.
pub fn workload_enhanced(n: f64, group_size: u32, assigned: u32) -> f64 {
    assert!(assigned >= 1 && assigned <= group_size, "assigned outside 1..=group");
    let l2 = (group_size as f64).powi(2);
    (l2 + 1.0) / (assigned as f64 + 1.0) * workload_basic(n)
}

/// Expected adversary work against the practical scheme with a dictionary of
/// `word_count` words and overlap fraction `x`: the enhanced formula with one
/// assigned slot, over the reduced word-feature universe `ceil(x * N)`.
pub fn workload_practical(word_count: u64, x: f64, group_size: u32) -> f64 {
    assert!(word_count >= 4, "dictionary too small");
    assert!(x > 0.0 && x < 1.0, "overlap fraction outside (0, 1)");
    let n = (x * word_count as f64).ceil();
    let l2 = (group_size as f64).powi(2);
    (l2 + 1.0) / 2.0 * (n / 2.0) * n.log2()
}

/// Expected size of the intersection of `t` independently drawn pictures:
/// each feature survives all `t` fair inclusion coins, so `n / 2^t`.
pub fn expected_intersection(n: u64, t: u32) -> f64 {
    assert!(n >= 1 && t >= 1, "need n >= 1 and t >= 1");
    n as f64 / 2f64.powi(t as i32)
}

/// Probability that the enhanced-scheme path hunt stops at exactly the
/// `i`-th sampled pairing (1-based), drawing uniformly without replacement
/// from `L^2` pairings of which `l` are correct.
pub fn stopping_probability(i: u32, group_size: u32, assigned: u32) -> Result<f64> {
    if group_size == 0 || assigned == 0 || assigned > group_size {
        return Err(Error::InvalidParam(format!(
            "assigned slots {assigned} outside 1..={group_size}"
        )));
    }
    let pairings = (group_size as u64 * group_size as u64) as f64;
    let wrong = pairings - assigned as f64;
    let last = wrong as u64 + 1;
    if i < 1 || i as u64 > last {
        return Err(Error::InvalidParam(format!("path index {i} outside 1..={last}")));
    }
    let mut p = assigned as f64 / pairings;
    for m in 0..(i as u64 - 1) {
        p *= (wrong - m as f64) / (pairings - 1.0 - m as f64);
    }
    Ok(p)
}
