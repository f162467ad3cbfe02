//! Challenges and transcripts: the eavesdropper's view of a session.

use crate::feature_model::FeatureSet;
use std::fmt::Write as _;

/// One round's visible challenge: an ordered group of pictures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    pub pictures: Vec<FeatureSet>,
    /// 1-based round number within the session.
    pub iteration_index: u32,
}

impl Challenge {
    pub fn new(pictures: Vec<FeatureSet>, iteration_index: u32) -> Self {
        debug_assert!(!pictures.is_empty());
        debug_assert!(
            pictures.windows(2).all(|w| w[0].universe_size() == w[1].universe_size()),
            "challenge pictures must share one universe"
        );
        Self { pictures, iteration_index }
    }
}

/// One observed round: the challenge plus the user's answer bits exactly as
/// emitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptRound {
    pub challenge: Challenge,
    pub answers: Vec<bool>,
}

/// Ordered record of every round of a session. This is all a passive
/// adversary gets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    rounds: Vec<TranscriptRound>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, challenge: Challenge, answers: Vec<bool>) {
        self.rounds.push(TranscriptRound { challenge, answers });
    }

    pub fn rounds(&self) -> &[TranscriptRound] {
        &self.rounds
    }

    /// Line format, one round per line:
    /// `round_index|picture_hex[,picture_hex...]|answer_bits`
    /// with pictures hex-encoded as bitmaps (see [`FeatureSet::to_hex`]).
    /// Deterministic, so transcript files diff cleanly.
    pub fn to_pipe_format(&self) -> String {
        let mut out = String::new();
        for round in &self.rounds {
            write!(out, "{}|", round.challenge.iteration_index).unwrap();
            for (i, p) in round.challenge.pictures.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&p.to_hex());
            }
            out.push('|');
            for &bit in &round.answers {
                out.push(if bit { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}
