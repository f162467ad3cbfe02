//! Secret-question recovery against the enhanced scheme.
//!
//! The eavesdropper does not know which answer position belongs to which
//! picture position, so it guesses a (picture, answer) pairing uniformly
//! without replacement from the `L * L` possibilities and runs the basic
//! elimination along that path. A wrong pairing feeds the elimination
//! effectively random bits, which keeps halving the candidate set just like a
//! right one would, so raw elimination alone cannot tell the paths apart:
//! a singleton reached on a wrong path is noise. The attacker therefore
//! verifies any candidate with cheap single-feature probes against further
//! rounds before accepting it; a noise candidate dies in a couple of probes,
//! while the true secret on the right path survives them all.
//!
//! A path is abandoned when its candidate set empties, when its candidate
//! fails verification, or when a step cap is reached. The cap must leave the
//! right path room to finish: the elimination needs `log2 n` pictures plus a
//! small tail, so the default cap is twice `ceil(log2 n)`.

use crate::adversary::{
    extract, ExtractionModel, PathChoice, TraceStep, PROBE_COST,
};
use crate::feature_model::{FeatureId, FeatureSet, FeatureUniverse};
use crate::protocols::TranscriptRound;
use crate::rng::SimRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Tuning knobs for [`recover_enhanced_secret`].
#[derive(Debug, Clone, Copy)]
pub struct EnhancedAttackOptions {
    /// Pictures examined per path before giving up; `None` uses
    /// [`default_step_cap`] for the universe.
    pub step_cap: Option<u32>,
    /// Consecutive consistent probe rounds required to accept a candidate.
    pub verify_rounds: u32,
}

impl Default for EnhancedAttackOptions {
    fn default() -> Self {
        Self { step_cap: None, verify_rounds: 16 }
    }
}

/// Default per-path step cap: `2 * ceil(log2 n)`.
pub fn default_step_cap(universe: FeatureUniverse) -> u32 {
    2 * (universe.size().max(2) as f64).log2().ceil() as u32
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnhancedOutcome {
    Recovered(FeatureId),
    /// Every pairing was tried (or the round source dried up) without a
    /// verified candidate.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct EnhancedAttack {
    pub outcome: EnhancedOutcome,
    /// Pairings examined, the successful one included.
    pub paths_tried: u32,
    /// Pictures fully extracted across all paths.
    pub total_steps: u32,
    /// Feature-membership examinations: full extractions plus probes.
    pub work_units: u64,
    pub trace: Vec<TraceStep>,
}

impl EnhancedAttack {
    pub fn recovered(&self) -> Option<FeatureId> {
        match self.outcome {
            EnhancedOutcome::Recovered(f) => Some(f),
            EnhancedOutcome::Exhausted => None,
        }
    }
}

struct PathState {
    survivors: Option<FeatureSet>,
    steps: u32,
}

enum PathEvent {
    Waiting,
    Survivors(u32),
}

fn feed_path(
    state: &mut PathState,
    picture: &FeatureSet,
    answer: bool,
    model: ExtractionModel,
    work_units: &mut u64,
    rng: &mut SimRng,
) -> PathEvent {
    match &mut state.survivors {
        None => {
            if !answer {
                return PathEvent::Waiting;
            }
            *work_units += picture.len() as u64;
            let extracted = extract(picture, model, rng);
            state.steps = 1;
            let count = extracted.len();
            state.survivors = Some(extracted);
            PathEvent::Survivors(count)
        }
        Some(survivors) => {
            *work_units += picture.len() as u64;
            state.steps += 1;
            let extracted = extract(picture, model, rng);
            if answer {
                survivors.intersect_with(&extracted);
            } else {
                survivors.subtract(&extracted);
            }
            PathEvent::Survivors(survivors.len())
        }
    }
}

/// Probe `candidate` against one observed round on path `(i, j)`: a single
/// membership examination, checked against the answer bit. Imperfect
/// extraction can miss a present feature here too.
fn probe_consistent(
    candidate: FeatureId,
    round: &TranscriptRound,
    path: PathChoice,
    model: ExtractionModel,
    rng: &mut SimRng,
) -> bool {
    let present = round.challenge.pictures[(path.picture_pos - 1) as usize].contains(candidate);
    let noticed = present && (model.is_perfect() || rng.gen_bool(model.probability()));
    noticed == round.answers[(path.answer_pos - 1) as usize]
}

/// Recover the secret feature from a stream of observed enhanced rounds.
///
/// `next_round` yields successive rounds of honest sessions; each path
/// consumes fresh rounds (extractions are not reused across paths — see
/// [`recover_enhanced_secret_replay`] for the memoized variant).
pub fn recover_enhanced_secret<F>(
    universe: FeatureUniverse,
    group_size: u32,
    mut next_round: F,
    model: ExtractionModel,
    rng: &mut SimRng,
    options: EnhancedAttackOptions,
) -> EnhancedAttack
where
    F: FnMut() -> Option<TranscriptRound>,
{
    let cap = options.step_cap.unwrap_or_else(|| default_step_cap(universe)).max(1);
    let mut paths: Vec<PathChoice> = (1..=group_size)
        .flat_map(|i| (1..=group_size).map(move |j| PathChoice { picture_pos: i, answer_pos: j }))
        .collect();
    paths.shuffle(rng);

    let mut total_steps = 0u32;
    let mut work_units = 0u64;
    let mut trace = Vec::new();
    for (path_idx, &path) in paths.iter().enumerate() {
        let mut state = PathState { survivors: None, steps: 0 };
        'path: loop {
            let Some(round) = next_round() else {
                return EnhancedAttack {
                    outcome: EnhancedOutcome::Exhausted,
                    paths_tried: path_idx as u32 + 1,
                    total_steps,
                    work_units,
                    trace,
                };
            };
            let picture = &round.challenge.pictures[(path.picture_pos - 1) as usize];
            let answer = round.answers[(path.answer_pos - 1) as usize];
            let count = match feed_path(&mut state, picture, answer, model, &mut work_units, rng)
            {
                PathEvent::Waiting => continue,
                PathEvent::Survivors(count) => count,
            };
            total_steps += 1;
            trace.push(TraceStep {
                step: total_steps,
                path,
                survivor_count: count,
                work_units,
            });
            if count == 1 {
                let candidate = state.survivors.as_ref().unwrap().sole_member().unwrap();
                let mut verified = true;
                for _ in 0..options.verify_rounds {
                    let Some(check) = next_round() else {
                        return EnhancedAttack {
                            outcome: EnhancedOutcome::Exhausted,
                            paths_tried: path_idx as u32 + 1,
                            total_steps,
                            work_units,
                            trace,
                        };
                    };
                    work_units += PROBE_COST;
                    if !probe_consistent(candidate, &check, path, model, rng) {
                        verified = false;
                        break;
                    }
                }
                if verified {
                    return EnhancedAttack {
                        outcome: EnhancedOutcome::Recovered(candidate),
                        paths_tried: path_idx as u32 + 1,
                        total_steps,
                        work_units,
                        trace,
                    };
                }
                break 'path; // candidate was noise, pairing refuted
            }
            if count == 0 || state.steps >= cap {
                break 'path;
            }
        }
    }
    EnhancedAttack {
        outcome: EnhancedOutcome::Exhausted,
        paths_tried: group_size * group_size,
        total_steps,
        work_units,
        trace,
    }
}

/// Memoized variant: works over a fixed recorded transcript, replaying it
/// from the start for every path and caching extractions per (round, picture
/// position), so a picture extracted for one path costs nothing when another
/// path revisits it. Steps count fresh extractions only.
pub fn recover_enhanced_secret_replay(
    universe: FeatureUniverse,
    rounds: &[TranscriptRound],
    model: ExtractionModel,
    rng: &mut SimRng,
    options: EnhancedAttackOptions,
) -> EnhancedAttack {
    let group_size = rounds.first().map(|r| r.challenge.pictures.len() as u32).unwrap_or(0);
    if group_size == 0 {
        return EnhancedAttack {
            outcome: EnhancedOutcome::Exhausted,
            paths_tried: 0,
            total_steps: 0,
            work_units: 0,
            trace: Vec::new(),
        };
    }
    let cap = options.step_cap.unwrap_or_else(|| default_step_cap(universe)).max(1);
    let mut paths: Vec<PathChoice> = (1..=group_size)
        .flat_map(|i| (1..=group_size).map(move |j| PathChoice { picture_pos: i, answer_pos: j }))
        .collect();
    paths.shuffle(rng);

    let mut cache: Vec<Option<FeatureSet>> = vec![None; rounds.len() * group_size as usize];
    let mut total_steps = 0u32;
    let mut work_units = 0u64;
    let mut trace = Vec::new();
    for (path_idx, &path) in paths.iter().enumerate() {
        let mut survivors: Option<FeatureSet> = None;
        let mut path_steps = 0u32;
        'path: for (round_idx, round) in rounds.iter().enumerate() {
            let picture = &round.challenge.pictures[(path.picture_pos - 1) as usize];
            let answer = round.answers[(path.answer_pos - 1) as usize];
            if survivors.is_none() && !answer {
                continue;
            }
            let slot = round_idx * group_size as usize + (path.picture_pos - 1) as usize;
            if cache[slot].is_none() {
                work_units += picture.len() as u64;
                total_steps += 1;
                cache[slot] = Some(extract(picture, model, rng));
            }
            let extracted = cache[slot].as_ref().unwrap();
            path_steps += 1;
            let count = match &mut survivors {
                None => {
                    survivors = Some(extracted.clone());
                    survivors.as_ref().unwrap().len()
                }
                Some(s) => {
                    if answer {
                        s.intersect_with(extracted);
                    } else {
                        s.subtract(extracted);
                    }
                    s.len()
                }
            };
            trace.push(TraceStep { step: total_steps, path, survivor_count: count, work_units });
            if count == 1 {
                let candidate = survivors.as_ref().unwrap().sole_member().unwrap();
                let mut verified = 0u32;
                for check in &rounds[round_idx + 1..] {
                    if verified == options.verify_rounds {
                        break;
                    }
                    work_units += PROBE_COST;
                    if !probe_consistent(candidate, check, path, model, rng) {
                        break 'path; // noise candidate
                    }
                    verified += 1;
                }
                if verified == options.verify_rounds {
                    return EnhancedAttack {
                        outcome: EnhancedOutcome::Recovered(candidate),
                        paths_tried: path_idx as u32 + 1,
                        total_steps,
                        work_units,
                        trace,
                    };
                }
                break 'path; // transcript too short to verify
            }
            if count == 0 || path_steps >= cap {
                break 'path;
            }
        }
    }
    EnhancedAttack {
        outcome: EnhancedOutcome::Exhausted,
        paths_tried: group_size * group_size,
        total_steps,
        work_units,
        trace,
    }
}
