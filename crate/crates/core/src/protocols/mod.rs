//! Server and honest-user sides of the identification schemes.
//!
//! Three schemes share one model: the server poses picture challenges, the
//! user answers bits derived from a secret question, and the verifier accepts
//! when the answered bits are right. The enhanced scheme shuffles which
//! pictures are answered through a secret permutation string; the practical
//! scheme selects a secret grid box per round with a small linear
//! congruential recurrence.

mod basic;
mod enhanced;
mod practical;
mod transcript;

pub use basic::{basic_round, basic_verify, BasicConfig};
pub use enhanced::{
    enhanced_answer, enhanced_challenge, enhanced_expected_bits, enhanced_verify, EnhancedConfig,
    PermutationSlot, PermutationString,
};
pub use practical::{practical_round, practical_verify, LcgParams, PracticalConfig};
pub use transcript::{Challenge, Transcript, TranscriptRound};

use crate::error::{Error, Result};
use crate::rng::SimRng;
use rand::Rng;

/// Accept/reject outcome of a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }

    /// Accept iff `mismatches <= tolerated`.
    fn from_mismatches(mismatches: u32, tolerated: u32) -> Self {
        if mismatches <= tolerated {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

/// How the simulated user produces its answer bits.
#[derive(Debug, Clone)]
pub enum UserStrategy {
    /// Computes answers from the shared secrets.
    Honest,
    /// Flips a fair coin for every answer bit.
    Random,
    /// Replays a fixed per-round bit script.
    Scripted(Vec<Vec<bool>>),
}

impl UserStrategy {
    fn scripted_bits(&self, round: usize, len: usize) -> Result<Vec<bool>> {
        match self {
            UserStrategy::Scripted(rows) => {
                let row = rows.get(round).ok_or(Error::LengthMismatch {
                    expected: round + 1,
                    actual: rows.len(),
                })?;
                if row.len() != len {
                    return Err(Error::LengthMismatch { expected: len, actual: row.len() });
                }
                Ok(row.clone())
            }
            _ => unreachable!("scripted_bits on non-scripted strategy"),
        }
    }
}

/// A full protocol configuration for [`run_session`].
#[derive(Debug, Clone)]
pub enum ProtocolConfig {
    Basic(BasicConfig),
    Enhanced(EnhancedConfig),
    Practical(PracticalConfig),
}

impl ProtocolConfig {
    pub fn rounds(&self) -> u32 {
        match self {
            ProtocolConfig::Basic(c) => c.rounds,
            ProtocolConfig::Enhanced(c) => c.rounds,
            ProtocolConfig::Practical(c) => c.rounds,
        }
    }
}

/// Run one authentication session and record what an eavesdropper sees.
///
/// The transcript holds every challenge and every user answer bit, in order;
/// an honest user is always accepted at `tolerated_errors = 0`.
pub fn run_session(
    config: &ProtocolConfig,
    strategy: &UserStrategy,
    tolerated_errors: u32,
    rng: &mut SimRng,
) -> Result<(Verdict, Transcript)> {
    match config {
        ProtocolConfig::Basic(cfg) => run_basic(cfg, strategy, tolerated_errors, rng),
        ProtocolConfig::Enhanced(cfg) => run_enhanced(cfg, strategy, tolerated_errors, rng),
        ProtocolConfig::Practical(cfg) => run_practical(cfg, strategy, tolerated_errors, rng),
    }
}

fn run_basic(
    cfg: &BasicConfig,
    strategy: &UserStrategy,
    tolerated_errors: u32,
    rng: &mut SimRng,
) -> Result<(Verdict, Transcript)> {
    let mut server_bits = Vec::with_capacity(cfg.rounds as usize);
    let mut user_bits = Vec::with_capacity(cfg.rounds as usize);
    let mut transcript = Transcript::new();
    for round in 0..cfg.rounds {
        let (picture, server_bit) = basic_round(cfg, rng)?;
        let answer = match strategy {
            UserStrategy::Honest => cfg.question.evaluate(&picture)?,
            UserStrategy::Random => rng.gen(),
            s @ UserStrategy::Scripted(_) => s.scripted_bits(round as usize, 1)?[0],
        };
        server_bits.push(server_bit);
        user_bits.push(answer);
        transcript.push(Challenge::new(vec![picture], round + 1), vec![answer]);
    }
    let verdict = basic_verify(cfg, &server_bits, &user_bits, tolerated_errors)?;
    Ok((verdict, transcript))
}

fn run_enhanced(
    cfg: &EnhancedConfig,
    strategy: &UserStrategy,
    tolerated_errors: u32,
    rng: &mut SimRng,
) -> Result<(Verdict, Transcript)> {
    let mut challenges = Vec::with_capacity(cfg.rounds as usize);
    let mut answers = Vec::with_capacity(cfg.rounds as usize);
    let mut transcript = Transcript::new();
    for round in 0..cfg.rounds {
        let challenge = enhanced_challenge(cfg, round + 1, rng)?;
        let bits = match strategy {
            UserStrategy::Honest => enhanced_answer(cfg, &challenge, rng)?,
            UserStrategy::Random => (0..cfg.group_size()).map(|_| rng.gen()).collect(),
            s @ UserStrategy::Scripted(_) => {
                s.scripted_bits(round as usize, cfg.group_size() as usize)?
            }
        };
        transcript.push(challenge.clone(), bits.clone());
        challenges.push(challenge);
        answers.push(bits);
    }
    let verdict = enhanced_verify(cfg, &challenges, &answers, tolerated_errors)?;
    Ok((verdict, transcript))
}

fn run_practical(
    cfg: &PracticalConfig,
    strategy: &UserStrategy,
    tolerated_errors: u32,
    rng: &mut SimRng,
) -> Result<(Verdict, Transcript)> {
    let mut server_bits = Vec::with_capacity(cfg.rounds as usize);
    let mut user_bits = Vec::with_capacity(cfg.rounds as usize);
    let mut transcript = Transcript::new();
    let mut x = cfg.lcg.seed_value();
    for round in 0..cfg.rounds {
        let (challenge, x_next, server_bit) = practical_round(cfg, x, round + 1, rng)?;
        // The honest user tracks the same recurrence with its shared secrets
        // and reads the selected box.
        let answer = match strategy {
            UserStrategy::Honest => {
                let box_set = &challenge.pictures[x_next as usize];
                cfg.question.evaluate(box_set)?
            }
            UserStrategy::Random => rng.gen(),
            s @ UserStrategy::Scripted(_) => s.scripted_bits(round as usize, 1)?[0],
        };
        server_bits.push(server_bit);
        user_bits.push(answer);
        transcript.push(challenge, vec![answer]);
        x = x_next;
    }
    let verdict = practical_verify(cfg, &server_bits, &user_bits, tolerated_errors)?;
    Ok((verdict, transcript))
}
