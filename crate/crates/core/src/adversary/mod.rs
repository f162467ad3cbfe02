//! The passive eavesdropper.
//!
//! The adversary watches challenges and answer bits and tries to recover the
//! secrets. Its unit of cost is one feature-membership examination: fully
//! extracting a picture costs that picture's feature count, which is what
//! makes the attack expensive for a human even though the set arithmetic is
//! trivial for a machine.

mod elimination;
mod enhanced;
mod hypotheses;
mod permutation;

pub use elimination::{recover_basic_secret, BasicAttack, BasicElimination, BasicOutcome, Status};
pub use enhanced::{
    default_step_cap, recover_enhanced_secret, recover_enhanced_secret_replay, EnhancedAttack,
    EnhancedAttackOptions, EnhancedOutcome,
};
pub use hypotheses::{boolean_hypothesis_search, matrix_solve};
pub use permutation::{evaluate_answer_tables, recover_permutation, BitMatrix, SigmaGuess};

use crate::error::{Error, Result};
use crate::feature_model::FeatureSet;
use crate::rng::SimRng;
use rand::Rng;

/// Imperfect feature extraction: a human scanning a picture notices each
/// feature that is really there independently with probability `p`, and never
/// hallucinates absent ones. `p = 1` is the idealized perfect extractor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionModel {
    p: f64,
}

impl ExtractionModel {
    pub const PERFECT: ExtractionModel = ExtractionModel { p: 1.0 };

    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParam(format!("extraction probability {p} not in (0, 1]")));
        }
        Ok(Self { p })
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    pub fn is_perfect(&self) -> bool {
        self.p == 1.0
    }
}

/// Extract the features an adversary notices in `picture`.
pub fn extract(picture: &FeatureSet, model: ExtractionModel, rng: &mut SimRng) -> FeatureSet {
    if model.is_perfect() {
        return picture.clone();
    }
    let mut out = FeatureSet::empty(picture.universe());
    for f in picture.iter() {
        if rng.gen_bool(model.p) {
            out.insert(f).expect("feature from same universe");
        }
    }
    out
}

/// Probing a single remembered feature in one picture costs this many work
/// units (one membership examination), as opposed to a full extraction which
/// costs the picture's feature count.
pub const PROBE_COST: u64 = 1;

/// Closed-form success probability of the elimination attack when each
/// feature is extracted with probability `p`: the secret must survive
/// extraction on every answer-1 step, and about half of the `log2 n` steps
/// answer 1, giving `p^(log2(n)/2)`.
pub fn success_probability(p: f64, n: u64) -> f64 {
    assert!(p > 0.0 && p <= 1.0, "p={p} not in (0, 1]");
    assert!(n >= 2, "universe too small");
    p.powf((n as f64).log2() / 2.0)
}

/// Which (picture position, answer position) pairing a path explores,
/// both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathChoice {
    pub picture_pos: u32,
    pub answer_pos: u32,
}

/// One per-step record of an attack, for traces and plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u32,
    pub path: PathChoice,
    pub survivor_count: u32,
    pub work_units: u64,
}

impl TraceStep {
    /// `step|path_i|path_j|survivor_count|work_units`
    pub fn to_line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}",
            self.step, self.path.picture_pos, self.path.answer_pos, self.survivor_count,
            self.work_units
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::{sample_picture, FeatureUniverse};
    use crate::rng::stream_from_seed;

    #[test]
    fn perfect_extraction_is_identity() {
        let mut rng = stream_from_seed(20);
        let u = FeatureUniverse::new(128).unwrap();
        for _ in 0..50 {
            let p = sample_picture(u, &mut rng);
            assert_eq!(extract(&p, ExtractionModel::PERFECT, &mut rng), p);
        }
    }

    #[test]
    fn extraction_thins_binomially() {
        let mut rng = stream_from_seed(21);
        let u = FeatureUniverse::new(1000).unwrap();
        let full = FeatureSet::full(u);
        let model = ExtractionModel::new(0.5).unwrap();
        let total: u64 = (0..1000).map(|_| extract(&full, model, &mut rng).len() as u64).sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 500.0).abs() < 0.05 * 500.0, "mean={mean}");
    }

    #[test]
    fn extraction_never_invents_features() {
        let mut rng = stream_from_seed(22);
        let u = FeatureUniverse::new(64).unwrap();
        let model = ExtractionModel::new(0.3).unwrap();
        for _ in 0..100 {
            let p = sample_picture(u, &mut rng);
            let e = extract(&p, model, &mut rng);
            assert!(e.iter().all(|f| p.contains(f)));
        }
        let empty = FeatureSet::empty(u);
        assert!(extract(&empty, model, &mut rng).is_empty());
    }

    #[test]
    fn extraction_probability_validated() {
        assert!(ExtractionModel::new(0.0).is_err());
        assert!(ExtractionModel::new(1.1).is_err());
        assert!(ExtractionModel::new(1.0).unwrap().is_perfect());
    }

    #[test]
    fn success_probability_closed_form() {
        assert_eq!(success_probability(1.0, 77), 1.0);
        let v = success_probability(0.5, 1024);
        assert!((v - 0.03125).abs() < 1e-12); // 1/sqrt(1024)
        for n in [4u64, 64, 4096] {
            let want = 1.0 / (n as f64).sqrt();
            assert!((success_probability(0.5, n) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_line_format() {
        let t = TraceStep {
            step: 3,
            path: PathChoice { picture_pos: 2, answer_pos: 5 },
            survivor_count: 17,
            work_units: 421,
        };
        assert_eq!(t.to_line(), "3|2|5|17|421");
    }
}
