//! The practical scheme: challenges are grids of word boxes generated from a
//! dictionary, and a small linear congruential recurrence shared as a secret
//! selects which box the user actually answers each round.

use crate::error::{Error, Result};
use crate::feature_model::{Dictionary, FeatureSet, Question};
use crate::protocols::{Challenge, Verdict};
use crate::rng::SimRng;
use rand::Rng;

/// Secret parameters of the box-selection recurrence
/// `x_i = (s * x_{i-1} + t) mod L` with public box count `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcgParams {
    mult: u64,
    incr: u64,
    x0: u64,
    modulus: u64,
}

impl LcgParams {
    /// Inputs at or above the modulus are reduced once, so any non-negative
    /// secrets are accepted.
    pub fn new(mult: u64, incr: u64, x0: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "box count must be >= 1");
        Self { mult: mult % modulus, incr: incr % modulus, x0: x0 % modulus, modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The reduced starting value.
    pub fn seed_value(&self) -> u64 {
        self.x0
    }

    /// One step of the recurrence. `x_prev` must already lie in `[0, L)`.
    pub fn next(&self, x_prev: u64) -> u64 {
        assert!(x_prev < self.modulus, "x_prev {x_prev} not reduced mod {}", self.modulus);
        ((self.mult as u128 * x_prev as u128 + self.incr as u128) % self.modulus as u128) as u64
    }
}

/// Configuration of a practical-scheme session.
#[derive(Debug, Clone)]
pub struct PracticalConfig {
    /// Secret question over word features.
    pub question: Question,
    /// Secret selector parameters.
    pub lcg: LcgParams,
    /// Words per box.
    pub words_per_box: u32,
    pub dictionary: Dictionary,
    pub rounds: u32,
}

impl PracticalConfig {
    pub fn new(
        question: Question,
        lcg: LcgParams,
        words_per_box: u32,
        dictionary: Dictionary,
        rounds: u32,
    ) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParam("rounds must be >= 1".into()));
        }
        if words_per_box == 0 {
            return Err(Error::InvalidParam("words_per_box must be >= 1".into()));
        }
        if words_per_box as usize > dictionary.word_count() {
            return Err(Error::InvalidParam(format!(
                "words_per_box {} exceeds dictionary size {}",
                words_per_box,
                dictionary.word_count()
            )));
        }
        question.check_universe(dictionary.universe())?;
        Ok(Self { question, lcg, words_per_box, dictionary, rounds })
    }

    /// Number of boxes per challenge (`L`).
    pub fn box_count(&self) -> u64 {
        self.lcg.modulus()
    }
}

/// Attempts at drawing a conditioned word box before giving up.
const BOX_ATTEMPTS: u32 = 64;

/// A box is the union of its words' feature sets; the question applies to
/// that union.
fn sample_box(cfg: &PracticalConfig, rng: &mut SimRng) -> FeatureSet {
    let count = cfg.dictionary.word_count();
    let mut union = FeatureSet::empty(cfg.dictionary.universe());
    let picked = rand::seq::index::sample(rng, count, cfg.words_per_box as usize);
    for idx in picked {
        union.union_with(&cfg.dictionary.word(idx).features);
    }
    union
}

fn sample_box_conditioned(
    cfg: &PracticalConfig,
    want: bool,
    rng: &mut SimRng,
) -> Result<FeatureSet> {
    for _ in 0..BOX_ATTEMPTS {
        let b = sample_box(cfg, rng);
        if cfg.question.evaluate(&b)? == want {
            return Ok(b);
        }
    }
    Err(Error::SamplingFailed { attempts: BOX_ATTEMPTS })
}

/// One server round.
///
/// Steps the recurrence to `x_i`, fills box `x_i` with words conditioned so
/// the question evaluates to a fresh secret bit, fills every other box with
/// unconditioned words, and returns the grid, the new selector state and the
/// expected answer bit. Boxes are indexed from 0, matching the arithmetic of
/// the recurrence.
pub fn practical_round(
    cfg: &PracticalConfig,
    x_prev: u64,
    iteration_index: u32,
    rng: &mut SimRng,
) -> Result<(Challenge, u64, bool)> {
    let x_i = cfg.lcg.next(x_prev);
    let server_bit: bool = rng.gen();
    let boxes = (0..cfg.box_count())
        .map(|b| {
            if b == x_i {
                sample_box_conditioned(cfg, server_bit, rng)
            } else {
                Ok(sample_box(cfg, rng))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Challenge::new(boxes, iteration_index), x_i, server_bit))
}

/// Accept iff the user's bits miss the expected ones in at most
/// `tolerated_errors` rounds.
pub fn practical_verify(
    cfg: &PracticalConfig,
    server_bits: &[bool],
    user_bits: &[bool],
    tolerated_errors: u32,
) -> Result<Verdict> {
    if server_bits.len() != cfg.rounds as usize {
        return Err(Error::LengthMismatch { expected: cfg.rounds as usize, actual: server_bits.len() });
    }
    if user_bits.len() != server_bits.len() {
        return Err(Error::LengthMismatch { expected: server_bits.len(), actual: user_bits.len() });
    }
    let mismatches = server_bits.iter().zip(user_bits).filter(|(s, u)| s != u).count() as u32;
    Ok(Verdict::from_mismatches(mismatches, tolerated_errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::build_dictionary;
    use crate::rng::stream_from_seed;

    #[test]
    fn recurrence_hand_traces() {
        // s=3, t=3, L=4, x0=5 reduces to 1; x1 = (3*1+3) mod 4 = 2
        let p = LcgParams::new(3, 3, 5, 4);
        assert_eq!(p.seed_value(), 1);
        assert_eq!(p.next(p.seed_value()), 2);

        // zero map
        let z = LcgParams::new(0, 0, 9, 7);
        assert_eq!(z.next(3), 0);

        // unit multiplier walks 1,2,3,... mod 11
        let w = LcgParams::new(1, 1, 0, 11);
        let mut x = w.seed_value();
        for expect in [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 0, 1] {
            x = w.next(x);
            assert_eq!(x, expect);
        }
    }

    #[test]
    fn outputs_stay_in_range() {
        let mut rng = stream_from_seed(10);
        for _ in 0..200 {
            let modulus = rand::Rng::gen_range(&mut rng, 1u64..50);
            let p = LcgParams::new(
                rand::Rng::gen(&mut rng),
                rand::Rng::gen(&mut rng),
                rand::Rng::gen(&mut rng),
                modulus,
            );
            let mut x = p.seed_value();
            for _ in 0..20 {
                x = p.next(x);
                assert!(x < modulus);
            }
        }
    }

    fn test_cfg(seed: u64, j: u32, q: Question) -> PracticalConfig {
        let mut rng = stream_from_seed(seed);
        let dictionary = build_dictionary(64, 0.5, &mut rng).unwrap();
        PracticalConfig::new(q, LcgParams::new(3, 3, 5, 4), j, dictionary, 4).unwrap()
    }

    #[test]
    fn first_round_targets_box_two() {
        let cfg = test_cfg(11, 2, Question::single(7));
        let mut rng = stream_from_seed(12);
        let (challenge, x1, bit) = practical_round(&cfg, cfg.lcg.seed_value(), 1, &mut rng).unwrap();
        assert_eq!(x1, 2);
        assert_eq!(challenge.pictures.len(), 4);
        // reading the selected box yields the server bit
        assert_eq!(cfg.question.evaluate(&challenge.pictures[2]).unwrap(), bit);
    }

    #[test]
    fn single_word_box_contains_feature_iff_bit_set() {
        let cfg = test_cfg(13, 1, Question::single(5));
        let mut rng = stream_from_seed(14);
        let mut x = cfg.lcg.seed_value();
        for i in 0..40 {
            let (challenge, x_i, bit) = practical_round(&cfg, x, i, &mut rng).unwrap();
            assert_eq!(challenge.pictures[x_i as usize].contains(5), bit);
            x = x_i;
        }
    }

    #[test]
    fn words_per_box_validated() {
        let mut rng = stream_from_seed(15);
        let dictionary = build_dictionary(4, 0.5, &mut rng).unwrap();
        assert!(PracticalConfig::new(
            Question::single(1),
            LcgParams::new(1, 1, 0, 3),
            5,
            dictionary,
            1
        )
        .is_err());
    }
}
