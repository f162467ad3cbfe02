//! Set-elimination recovery of the basic scheme's secret feature.
//!
//! Rounds before the first answer-1 round carry no usable starting set and
//! are skipped. The first answer-1 picture initializes the candidate set;
//! after that every answer-1 picture intersects it and every answer-0 picture
//! is subtracted from it. The candidate set never grows, and under perfect
//! extraction it always contains the true secret.

use crate::adversary::{extract, ExtractionModel, PathChoice, TraceStep};
use crate::feature_model::{FeatureId, FeatureSet, FeatureUniverse};
use crate::rng::SimRng;

/// What one observed round did to the elimination state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Still waiting for the first answer-1 round.
    Waiting,
    /// The round was examined; the candidate set now has this many members.
    Active { survivor_count: u32 },
}

/// Streaming elimination state. Feed observed `(picture, answer)` rounds one
/// at a time; `steps` counts pictures actually examined (the initializer
/// included) and `work_units` their total feature count.
#[derive(Debug, Clone)]
pub struct BasicElimination {
    model: ExtractionModel,
    survivors: Option<FeatureSet>,
    steps: u32,
    work_units: u64,
}

impl BasicElimination {
    pub fn new(model: ExtractionModel) -> Self {
        Self { model, survivors: None, steps: 0, work_units: 0 }
    }

    pub fn survivors(&self) -> Option<&FeatureSet> {
        self.survivors.as_ref()
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn work_units(&self) -> u64 {
        self.work_units
    }

    /// Process one observed round.
    pub fn feed(&mut self, picture: &FeatureSet, answer: bool, rng: &mut SimRng) -> Status {
        match &mut self.survivors {
            None => {
                if !answer {
                    return Status::Waiting;
                }
                self.steps = 1;
                self.work_units += picture.len() as u64;
                let extracted = extract(picture, self.model, rng);
                let count = extracted.len();
                self.survivors = Some(extracted);
                Status::Active { survivor_count: count }
            }
            Some(survivors) => {
                self.steps += 1;
                self.work_units += picture.len() as u64;
                let extracted = extract(picture, self.model, rng);
                if answer {
                    survivors.intersect_with(&extracted);
                } else {
                    survivors.subtract(&extracted);
                }
                Status::Active { survivor_count: survivors.len() }
            }
        }
    }
}

/// Result of a full basic-scheme attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicOutcome {
    /// Exactly one candidate survived.
    Recovered(FeatureId),
    /// The candidate set emptied (possible only with imperfect extraction).
    Eliminated,
    /// The stream ended with more than one candidate left (the full universe
    /// if no answer-1 round ever arrived).
    Undecided(FeatureSet),
}

#[derive(Debug, Clone)]
pub struct BasicAttack {
    pub outcome: BasicOutcome,
    /// Pictures examined, the initializing picture included.
    pub steps: u32,
    /// Total feature-membership examinations.
    pub work_units: u64,
    pub trace: Vec<TraceStep>,
}

impl BasicAttack {
    pub fn recovered(&self) -> Option<FeatureId> {
        match self.outcome {
            BasicOutcome::Recovered(f) => Some(f),
            _ => None,
        }
    }
}

/// Run the elimination over a finite stream of observed rounds, stopping at
/// the first singleton candidate set.
pub fn recover_basic_secret<I>(
    universe: FeatureUniverse,
    rounds: I,
    model: ExtractionModel,
    rng: &mut SimRng,
) -> BasicAttack
where
    I: IntoIterator<Item = (FeatureSet, bool)>,
{
    let mut elimination = BasicElimination::new(model);
    let mut trace = Vec::new();
    let path = PathChoice { picture_pos: 1, answer_pos: 1 };
    for (picture, answer) in rounds {
        let status = elimination.feed(&picture, answer, rng);
        let survivor_count = match status {
            Status::Waiting => continue,
            Status::Active { survivor_count } => survivor_count,
        };
        trace.push(TraceStep {
            step: elimination.steps,
            path,
            survivor_count,
            work_units: elimination.work_units,
        });
        if survivor_count <= 1 {
            break;
        }
    }
    let outcome = match elimination.survivors.take() {
        None => BasicOutcome::Undecided(FeatureSet::full(universe)),
        Some(s) => match s.len() {
            0 => BasicOutcome::Eliminated,
            1 => BasicOutcome::Recovered(s.sole_member().unwrap()),
            _ => BasicOutcome::Undecided(s),
        },
    };
    BasicAttack { outcome, steps: elimination.steps, work_units: elimination.work_units, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::{FeatureUniverse, Question};
    use crate::protocols::{basic_round, BasicConfig};
    use crate::rng::{stream_from_seed, trial_stream};

    fn u(n: u32) -> FeatureUniverse {
        FeatureUniverse::new(n).unwrap()
    }

    fn set(n: u32, fs: &[u32]) -> FeatureSet {
        FeatureSet::from_features(u(n), fs).unwrap()
    }

    #[test]
    fn hand_trace_two_rounds() {
        // {1,3} answered 1, then {1,2} answered 0: candidates {1,3} minus
        // {1,2} leaves {3} after two examined pictures.
        let mut rng = stream_from_seed(30);
        let rounds = vec![(set(4, &[1, 3]), true), (set(4, &[1, 2]), false)];
        let attack = recover_basic_secret(u(4), rounds, ExtractionModel::PERFECT, &mut rng);
        assert_eq!(attack.outcome, BasicOutcome::Recovered(3));
        assert_eq!(attack.steps, 2);
        assert_eq!(attack.work_units, 4);
    }

    #[test]
    fn leading_zero_rounds_are_skipped() {
        let mut rng = stream_from_seed(31);
        let rounds = vec![
            (set(4, &[2, 4]), false), // waiting: contributes nothing
            (set(4, &[1, 3]), true),
            (set(4, &[1, 2]), false),
        ];
        let attack = recover_basic_secret(u(4), rounds, ExtractionModel::PERFECT, &mut rng);
        assert_eq!(attack.outcome, BasicOutcome::Recovered(3));
        assert_eq!(attack.steps, 2, "skipped rounds are not steps");
    }

    #[test]
    fn empty_stream_is_undecided_with_zero_steps() {
        let mut rng = stream_from_seed(32);
        let attack =
            recover_basic_secret(u(8), Vec::new(), ExtractionModel::PERFECT, &mut rng);
        assert_eq!(attack.steps, 0);
        match attack.outcome {
            BasicOutcome::Undecided(s) => assert_eq!(s.len(), 8),
            other => panic!("expected undecided, got {other:?}"),
        }
    }

    fn honest_rounds(n: u32, secret: u32, count: usize, seed: u64) -> Vec<(FeatureSet, bool)> {
        let cfg = BasicConfig::new(u(n), Question::single(secret), 1, 1).unwrap();
        let mut rng = stream_from_seed(seed);
        (0..count).map(|_| basic_round(&cfg, &mut rng).unwrap()).collect()
    }

    #[test]
    fn recovers_the_true_secret_under_perfect_extraction() {
        for trial in 0..200u64 {
            let mut rng = trial_stream(33, trial);
            let secret = 1 + (trial % 64) as u32;
            let rounds = honest_rounds(64, secret, 100, trial.wrapping_mul(7) + 1);
            let attack = recover_basic_secret(u(64), rounds, ExtractionModel::PERFECT, &mut rng);
            assert_eq!(attack.outcome, BasicOutcome::Recovered(secret));
        }
    }

    #[test]
    fn survivors_shrink_monotonically_and_keep_the_secret() {
        for trial in 0..1000u64 {
            let mut attack_rng = trial_stream(34, trial);
            let secret = 1 + (trial % 32) as u32;
            let rounds = honest_rounds(1024.min(32 * (1 + trial as u32 % 32)), secret, 60, trial + 9);
            let mut elimination = BasicElimination::new(ExtractionModel::PERFECT);
            let mut last = u32::MAX;
            for (picture, answer) in rounds {
                if let Status::Active { survivor_count } =
                    elimination.feed(&picture, answer, &mut attack_rng)
                {
                    assert!(survivor_count <= last, "candidate set grew");
                    last = survivor_count;
                    let survivors = elimination.survivors().unwrap();
                    assert!(survivors.contains(secret), "secret dropped at step {}", elimination.steps());
                    if survivor_count == 1 {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn mean_survivor_count_follows_the_halving_law() {
        // After the initializing step the candidate set holds the secret plus
        // Binomial(n-1, 2^-t) extras, so its mean is (n-1)/2^t + 1. The
        // idealized n/2^t is accurate to 10% only through t = 6 at n = 1024;
        // the +1 from the surviving secret dominates beyond that.
        let n = 1024u32;
        let trials = 1000u64;
        let mut sums = [0u64; 9];
        for trial in 0..trials {
            let rounds = honest_rounds(n, 17, 40, trial + 71);
            let mut attack_rng = trial_stream(35, trial);
            let mut elimination = BasicElimination::new(ExtractionModel::PERFECT);
            let mut t = 0usize;
            for (picture, answer) in rounds {
                if let Status::Active { survivor_count } =
                    elimination.feed(&picture, answer, &mut attack_rng)
                {
                    t += 1;
                    sums[t] += survivor_count as u64;
                    if t == 8 {
                        break;
                    }
                }
            }
            assert_eq!(t, 8);
        }
        for t in 1..=8usize {
            let mean = sums[t] as f64 / trials as f64;
            let law = (n as f64 - 1.0) / 2f64.powi(t as i32) + 1.0;
            assert!((mean - law).abs() < 0.10 * law, "t={t}: mean={mean} law={law}");
            if t <= 6 {
                let idealized = n as f64 / 2f64.powi(t as i32);
                assert!(
                    (mean - idealized).abs() < 0.10 * idealized,
                    "t={t}: mean={mean} idealized={idealized}"
                );
            }
        }
    }

    #[test]
    fn work_units_track_picture_sizes() {
        let n = 256u32;
        let mut total_steps = 0u64;
        let mut total_work = 0u64;
        for trial in 0..300u64 {
            let mut rng = trial_stream(36, trial);
            let rounds = honest_rounds(n, 5, 120, trial + 13);
            let attack = recover_basic_secret(u(n), rounds, ExtractionModel::PERFECT, &mut rng);
            total_steps += attack.steps as u64;
            total_work += attack.work_units;
        }
        // each examined picture costs about n/2 work units
        let per_step = total_work as f64 / total_steps as f64;
        assert!((per_step - 128.0).abs() < 0.05 * 128.0, "per_step={per_step}");
    }
}
