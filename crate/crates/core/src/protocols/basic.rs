//! The basic scheme: one picture per round, answered in the clear.

use crate::error::{Error, Result};
use crate::feature_model::{sample_conditioned, FeatureSet, FeatureUniverse, Question};
use crate::protocols::Verdict;
use crate::rng::SimRng;
use rand::Rng;

/// Configuration of a basic-scheme session.
#[derive(Debug, Clone)]
pub struct BasicConfig {
    pub universe: FeatureUniverse,
    /// The shared secret.
    pub question: Question,
    /// Iterations per session.
    pub rounds: u32,
    /// Pictures shown per screen; presentation only, no protocol effect.
    pub display_per_screen: u32,
}

impl BasicConfig {
    pub fn new(
        universe: FeatureUniverse,
        question: Question,
        rounds: u32,
        display_per_screen: u32,
    ) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParam("rounds must be >= 1".into()));
        }
        if display_per_screen == 0 {
            return Err(Error::InvalidParam("display_per_screen must be >= 1".into()));
        }
        question.check_universe(universe)?;
        Ok(Self { universe, question, rounds, display_per_screen })
    }
}

/// One server round: a uniform secret bit and a picture conditioned to
/// evaluate to it.
pub fn basic_round(cfg: &BasicConfig, rng: &mut SimRng) -> Result<(FeatureSet, bool)> {
    let bit: bool = rng.gen();
    let picture = sample_conditioned(&cfg.question, bit, cfg.universe, rng)?;
    Ok((picture, bit))
}

/// Accept iff the user's bits disagree with the server's in at most
/// `tolerated_errors` rounds. The strict rule is `tolerated_errors = 0`;
/// deployments allowing a couple of slips raise it.
pub fn basic_verify(
    cfg: &BasicConfig,
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
    use crate::rng::stream_from_seed;

    fn cfg(n: u32, k: u32, f: u32) -> BasicConfig {
        BasicConfig::new(FeatureUniverse::new(n).unwrap(), Question::single(f), k, 1).unwrap()
    }

    #[test]
    fn round_postcondition_holds() {
        let c = cfg(2, 1, 1);
        let mut rng = stream_from_seed(1);
        for _ in 0..200 {
            let (picture, bit) = basic_round(&c, &mut rng).unwrap();
            assert_eq!(c.question.evaluate(&picture).unwrap(), bit);
        }
    }

    #[test]
    fn server_bit_is_fair() {
        let c = cfg(16, 1, 3);
        let mut rng = stream_from_seed(2);
        let ones: u32 =
            (0..10_000).map(|_| basic_round(&c, &mut rng).unwrap().1 as u32).sum();
        let mean = ones as f64 / 1e4;
        assert!((mean - 0.5).abs() < 0.015, "mean={mean}");
    }

    #[test]
    fn zero_bit_round_excludes_secret_feature() {
        let c = cfg(4, 1, 3);
        let mut rng = stream_from_seed(3);
        for _ in 0..200 {
            let (picture, bit) = basic_round(&c, &mut rng).unwrap();
            if !bit {
                assert!(!picture.contains(3));
            }
        }
    }

    #[test]
    fn verify_hand_cases() {
        let c = cfg(4, 3, 1);
        let s = [true, false, true];
        assert_eq!(basic_verify(&c, &s, &[true, false, true], 0).unwrap(), Verdict::Accept);
        assert_eq!(basic_verify(&c, &s, &[true, true, true], 0).unwrap(), Verdict::Reject);
        assert_eq!(basic_verify(&c, &s, &[true, true, true], 1).unwrap(), Verdict::Accept);
        assert!(basic_verify(&c, &s, &[true], 0).is_err());
        assert!(basic_verify(&c, &[true], &[true], 0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(BasicConfig::new(
            FeatureUniverse::new(4).unwrap(),
            Question::single(9),
            1,
            1
        )
        .is_err());
        assert!(BasicConfig::new(FeatureUniverse::new(4).unwrap(), Question::single(1), 0, 1)
            .is_err());
    }
}
