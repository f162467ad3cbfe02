//! The enhanced scheme: a secret permutation string shuffles which pictures
//! the answer slots refer to, and unassigned slots are filled with coin
//! flips, so the answer sequence no longer labels the pictures in the clear.

use crate::error::{Error, Result};
use crate::feature_model::{
    sample_conditioned, sample_picture, FeatureUniverse, Question,
};
use crate::protocols::{Challenge, Verdict};
use crate::rng::SimRng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;

/// One slot of a permutation string: a picture label or a don't-care.
pub type PermutationSlot = Option<u32>;

/// The second secret of the enhanced scheme.
///
/// A string of `L` slots; slot `j` either names the picture label (1-based)
/// whose evaluation the user writes into answer position `j`, or is a
/// don't-care the user fills with a fair coin. Assigned labels are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationString {
    slots: Vec<PermutationSlot>,
}

impl PermutationString {
    pub fn new(slots: Vec<PermutationSlot>) -> Result<Self> {
        let group = slots.len() as u32;
        if group == 0 {
            return Err(Error::InvalidParam("permutation string cannot be empty".into()));
        }
        let mut seen = vec![false; group as usize + 1];
        let mut assigned = 0u32;
        for slot in slots.iter().flatten() {
            let label = *slot;
            if label < 1 || label > group {
                return Err(Error::InvalidParam(format!(
                    "picture label {label} outside 1..={group}"
                )));
            }
            if seen[label as usize] {
                return Err(Error::InvalidParam(format!("picture label {label} repeated")));
            }
            seen[label as usize] = true;
            assigned += 1;
        }
        if assigned == 0 {
            return Err(Error::InvalidParam("at least one slot must be assigned".into()));
        }
        Ok(Self { slots })
    }

    /// Uniformly random string with `assigned` answered slots out of `group`.
    pub fn random(group: u32, assigned: u32, rng: &mut SimRng) -> Result<Self> {
        if assigned == 0 || assigned > group {
            return Err(Error::InvalidParam(format!(
                "assigned slots {assigned} outside 1..={group}"
            )));
        }
        let mut labels: Vec<u32> = (1..=group).collect();
        labels.shuffle(rng);
        let mut positions: Vec<usize> = (0..group as usize).collect();
        positions.shuffle(rng);
        let mut slots = vec![None; group as usize];
        for (pos, label) in positions.into_iter().zip(labels).take(assigned as usize) {
            slots[pos] = Some(label);
        }
        Self::new(slots)
    }

    /// Parse the compact form used for strings up to length 10: `*` is a
    /// don't-care, digits `1`-`9` are labels, and `0` stands for label 10.
    pub fn parse(s: &str) -> Result<Self> {
        let slots = s
            .chars()
            .map(|c| match c {
                '*' => Ok(None),
                '0' => Ok(Some(10)),
                '1'..='9' => Ok(Some(c as u32 - '0' as u32)),
                other => Err(Error::InvalidParam(format!("bad permutation char {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(slots)
    }

    pub fn len(&self) -> u32 {
        self.slots.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of answered (non-don't-care) slots.
    pub fn assigned_count(&self) -> u32 {
        self.slots.iter().filter(|s| s.is_some()).count() as u32
    }

    pub fn slots(&self) -> &[PermutationSlot] {
        &self.slots
    }

    pub fn slot(&self, position: usize) -> PermutationSlot {
        self.slots[position]
    }

    /// Whether some slot names picture `label`.
    pub fn assigns_label(&self, label: u32) -> bool {
        self.slots.contains(&Some(label))
    }
}

impl fmt::Display for PermutationString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 10 {
            for slot in &self.slots {
                match slot {
                    None => write!(f, "*")?,
                    Some(10) => write!(f, "0")?,
                    Some(label) => write!(f, "{label}")?,
                }
            }
        } else {
            for (i, slot) in self.slots.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                match slot {
                    None => write!(f, "*")?,
                    Some(label) => write!(f, "{label}")?,
                }
            }
        }
        Ok(())
    }
}

/// Configuration of an enhanced-scheme session. The group size `L` and the
/// answered-slot count `l` are carried by the permutation string.
#[derive(Debug, Clone)]
pub struct EnhancedConfig {
    pub universe: FeatureUniverse,
    pub question: Question,
    pub sigma: PermutationString,
    pub rounds: u32,
}

impl EnhancedConfig {
    pub fn new(
        universe: FeatureUniverse,
        question: Question,
        sigma: PermutationString,
        rounds: u32,
    ) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParam("rounds must be >= 1".into()));
        }
        question.check_universe(universe)?;
        Ok(Self { universe, question, sigma, rounds })
    }

    /// Pictures per round (`L`).
    pub fn group_size(&self) -> u32 {
        self.sigma.len()
    }

    /// Answered slots per round (`l`).
    pub fn answered_slots(&self) -> u32 {
        self.sigma.assigned_count()
    }
}

/// Build one round's challenge of `L` pictures.
///
/// Pictures named by the permutation string are conditioned on a fresh fair
/// bit so the answered evaluations stay unbiased; unassigned pictures are
/// drawn unconditioned, since nothing about them is checked.
pub fn enhanced_challenge(
    cfg: &EnhancedConfig,
    iteration_index: u32,
    rng: &mut SimRng,
) -> Result<Challenge> {
    let group = cfg.group_size();
    let mut pictures = Vec::with_capacity(group as usize);
    for label in 1..=group {
        let picture = if cfg.sigma.assigns_label(label) {
            let bit: bool = rng.gen();
            sample_conditioned(&cfg.question, bit, cfg.universe, rng)?
        } else {
            sample_picture(cfg.universe, rng)
        };
        pictures.push(picture);
    }
    Ok(Challenge::new(pictures, iteration_index))
}

/// The honest user's answer string for one challenge: the question evaluated
/// on the named picture at each assigned slot, a fair coin at each
/// don't-care.
pub fn enhanced_answer(
    cfg: &EnhancedConfig,
    challenge: &Challenge,
    rng: &mut SimRng,
) -> Result<Vec<bool>> {
    let group = cfg.group_size() as usize;
    if challenge.pictures.len() != group {
        return Err(Error::LengthMismatch { expected: group, actual: challenge.pictures.len() });
    }
    cfg.sigma
        .slots()
        .iter()
        .map(|slot| match slot {
            Some(label) => cfg.question.evaluate(&challenge.pictures[(*label - 1) as usize]),
            None => Ok(rng.gen()),
        })
        .collect()
}

/// The bits the verifier expects at assigned slots (`None` at don't-cares).
pub fn enhanced_expected_bits(
    cfg: &EnhancedConfig,
    challenge: &Challenge,
) -> Result<Vec<Option<bool>>> {
    cfg.sigma
        .slots()
        .iter()
        .map(|slot| match slot {
            Some(label) => {
                cfg.question.evaluate(&challenge.pictures[(*label - 1) as usize]).map(Some)
            }
            None => Ok(None),
        })
        .collect()
}

/// Check a session: only the assigned slots are compared, don't-care slots
/// are ignored, and the total mismatch count over all `k * l` checked slots
/// must stay within `tolerated_errors`.
pub fn enhanced_verify(
    cfg: &EnhancedConfig,
    challenges: &[Challenge],
    user_bits: &[Vec<bool>],
    tolerated_errors: u32,
) -> Result<Verdict> {
    if challenges.len() != cfg.rounds as usize {
        return Err(Error::LengthMismatch { expected: cfg.rounds as usize, actual: challenges.len() });
    }
    if user_bits.len() != challenges.len() {
        return Err(Error::LengthMismatch { expected: challenges.len(), actual: user_bits.len() });
    }
    let group = cfg.group_size() as usize;
    let mut mismatches = 0u32;
    for (challenge, bits) in challenges.iter().zip(user_bits) {
        if bits.len() != group {
            return Err(Error::LengthMismatch { expected: group, actual: bits.len() });
        }
        for (expected, &got) in enhanced_expected_bits(cfg, challenge)?.iter().zip(bits) {
            if let Some(want) = expected {
                if *want != got {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(Verdict::from_mismatches(mismatches, tolerated_errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::FeatureSet;
    use crate::rng::stream_from_seed;

    fn u(n: u32) -> FeatureUniverse {
        FeatureUniverse::new(n).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let sigma = PermutationString::parse("**54*39**0").unwrap();
        assert_eq!(sigma.len(), 10);
        assert_eq!(sigma.assigned_count(), 5);
        assert_eq!(sigma.slot(9), Some(10)); // '0' stands for label 10
        assert_eq!(sigma.to_string(), "**54*39**0");
        assert!(PermutationString::parse("11*").is_err()); // repeated label
        assert!(PermutationString::parse("4*").is_err()); // label beyond group
        assert!(PermutationString::parse("***").is_err()); // nothing assigned
    }

    #[test]
    fn answer_follows_permutation_order() {
        // sigma = 2*43*: bits are (q(P2), coin, q(P4), q(P3), coin)
        let sigma = PermutationString::parse("2*43*").unwrap();
        let cfg = EnhancedConfig::new(u(8), Question::single(1), sigma, 1).unwrap();
        let mut pictures = Vec::new();
        for label in 1..=5u32 {
            // picture `label` contains feature 1 iff label is even
            let mut p = FeatureSet::empty(u(8));
            if label % 2 == 0 {
                p.insert(1).unwrap();
            }
            p.insert(label + 2).unwrap();
            pictures.push(p);
        }
        let challenge = Challenge::new(pictures, 1);
        let mut rng = stream_from_seed(4);
        let bits = enhanced_answer(&cfg, &challenge, &mut rng).unwrap();
        assert!(bits[0]); // q(P2)
        assert!(bits[2]); // q(P4)
        assert!(!bits[3]); // q(P3)
    }

    #[test]
    fn fully_assigned_string_leaves_no_randomness() {
        let sigma = PermutationString::parse("231").unwrap();
        let cfg = EnhancedConfig::new(u(16), Question::single(2), sigma, 1).unwrap();
        let mut rng = stream_from_seed(5);
        let challenge = enhanced_challenge(&cfg, 1, &mut rng).unwrap();
        let a = enhanced_answer(&cfg, &challenge, &mut rng).unwrap();
        let b = enhanced_answer(&cfg, &challenge, &mut rng).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dont_care_bits_are_fair() {
        let sigma = PermutationString::parse("1*").unwrap();
        let cfg = EnhancedConfig::new(u(16), Question::single(2), sigma, 1).unwrap();
        let mut rng = stream_from_seed(6);
        let mut ones = 0u32;
        let rounds = 10_000;
        for i in 0..rounds {
            let challenge = enhanced_challenge(&cfg, i, &mut rng).unwrap();
            let bits = enhanced_answer(&cfg, &challenge, &mut rng).unwrap();
            if bits[1] {
                ones += 1;
            }
        }
        let mean = ones as f64 / rounds as f64;
        assert!((mean - 0.5).abs() < 0.015, "mean={mean}");
    }

    #[test]
    fn verify_checks_only_assigned_slots() {
        let sigma = PermutationString::parse("2*1").unwrap();
        let cfg = EnhancedConfig::new(u(16), Question::single(2), sigma, 2).unwrap();
        let mut rng = stream_from_seed(7);
        let challenges: Vec<Challenge> = (0..2)
            .map(|i| enhanced_challenge(&cfg, i + 1, &mut rng).unwrap())
            .collect();
        let mut honest: Vec<Vec<bool>> = challenges
            .iter()
            .map(|c| enhanced_answer(&cfg, c, &mut rng).unwrap())
            .collect();
        assert_eq!(enhanced_verify(&cfg, &challenges, &honest, 0).unwrap(), Verdict::Accept);
        // flipping a don't-care slot never matters
        honest[0][1] = !honest[0][1];
        assert_eq!(enhanced_verify(&cfg, &challenges, &honest, 0).unwrap(), Verdict::Accept);
        // flipping an assigned slot does
        honest[1][0] = !honest[1][0];
        assert_eq!(enhanced_verify(&cfg, &challenges, &honest, 0).unwrap(), Verdict::Reject);
        assert_eq!(enhanced_verify(&cfg, &challenges, &honest, 1).unwrap(), Verdict::Accept);
    }

    #[test]
    fn random_answers_pass_one_round_at_rate_two_to_minus_l() {
        // k=1, l=5: acceptance 1/32 within ~3 standard errors over 1e5 trials
        let sigma = PermutationString::parse("52314").unwrap();
        let cfg = EnhancedConfig::new(u(16), Question::single(2), sigma, 1).unwrap();
        let mut rng = stream_from_seed(8);
        let trials = 100_000u32;
        let mut accepts = 0u32;
        for i in 0..trials {
            let challenge = enhanced_challenge(&cfg, i, &mut rng).unwrap();
            let bits: Vec<bool> = (0..5).map(|_| rand::Rng::gen(&mut rng)).collect();
            if enhanced_verify(&cfg, std::slice::from_ref(&challenge), &[bits], 0)
                .unwrap()
                .accepted()
            {
                accepts += 1;
            }
        }
        let rate = accepts as f64 / trials as f64;
        assert!((rate - 0.03125).abs() < 0.002, "rate={rate}");
    }

    #[test]
    fn random_string_respects_counts() {
        let mut rng = stream_from_seed(9);
        for _ in 0..100 {
            let sigma = PermutationString::random(7, 3, &mut rng).unwrap();
            assert_eq!(sigma.len(), 7);
            assert_eq!(sigma.assigned_count(), 3);
        }
        assert!(PermutationString::random(4, 0, &mut rng).is_err());
        assert!(PermutationString::random(4, 5, &mut rng).is_err());
    }
}
