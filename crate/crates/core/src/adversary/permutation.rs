//! Permutation-string recovery for an eavesdropper who already knows the
//! secret question.
//!
//! Knowing the question, the adversary evaluates every picture position
//! itself, giving a k-by-L table of expected bits; the user's answers give a
//! second k-by-L table. A picture column that matches exactly one answer
//! column pins one slot of the permutation; a column matching two or more is
//! ambiguous and aborts the recovery.

use crate::error::{Error, Result};
use crate::feature_model::Question;
use crate::protocols::{PermutationString, TranscriptRound};

/// A k-rounds-by-L-positions bit table, column-compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::TableShape(format!(
                    "row {r} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, bit: bool) {
        self.bits[row * self.cols + col] = bit;
    }

    fn column_eq(&self, col: usize, other: &BitMatrix, other_col: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, col) == other.get(r, other_col))
    }
}

/// The adversary's reconstruction of the permutation string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaGuess {
    /// Per answer slot: guessed picture label (1-based) or don't-care.
    pub slots: Vec<Option<u32>>,
    /// False when some picture column matched two or more answer columns and
    /// the recovery aborted.
    pub valid: bool,
}

impl SigmaGuess {
    /// Whether the guess reproduces `sigma` exactly, don't-cares included.
    pub fn matches(&self, sigma: &PermutationString) -> bool {
        self.valid
            && self.slots.len() == sigma.len() as usize
            && self.slots.iter().zip(sigma.slots()).all(|(a, b)| a == b)
    }
}

/// Recover the permutation from the adversary-evaluated table `expected`
/// (one column per picture position) and the observed answer table
/// `answered` (one column per answer position), both over the same k rounds.
///
/// With zero observed rounds every column matches every other vacuously, so
/// any group with at least two positions aborts as ambiguous.
pub fn recover_permutation(expected: &BitMatrix, answered: &BitMatrix) -> Result<SigmaGuess> {
    if expected.rows() != answered.rows() || expected.cols() != answered.cols() {
        return Err(Error::TableShape(format!(
            "{}x{} vs {}x{}",
            expected.rows(),
            expected.cols(),
            answered.rows(),
            answered.cols()
        )));
    }
    let group = expected.cols();
    let mut slots: Vec<Option<u32>> = vec![None; group];
    for picture in 0..group {
        let mut unique: Option<usize> = None;
        let mut ambiguous = false;
        for answer in 0..group {
            if expected.column_eq(picture, answered, answer) {
                if unique.is_some() {
                    ambiguous = true;
                    break;
                }
                unique = Some(answer);
            }
        }
        if ambiguous {
            return Ok(SigmaGuess { slots, valid: false });
        }
        if let Some(answer) = unique {
            slots[answer] = Some(picture as u32 + 1);
        }
    }
    debug_assert!(
        {
            let mut labels: Vec<u32> = slots.iter().flatten().copied().collect();
            labels.sort_unstable();
            labels.windows(2).all(|w| w[0] != w[1])
        },
        "assigned labels must be distinct"
    );
    Ok(SigmaGuess { slots, valid: true })
}

/// Build both tables from observed rounds, evaluating the known question on
/// every picture position.
pub fn evaluate_answer_tables(
    rounds: &[TranscriptRound],
    question: &Question,
) -> Result<(BitMatrix, BitMatrix)> {
    let group = rounds.first().map(|r| r.challenge.pictures.len()).unwrap_or(0);
    let mut expected = BitMatrix::new(rounds.len(), group);
    let mut answered = BitMatrix::new(rounds.len(), group);
    for (r, round) in rounds.iter().enumerate() {
        if round.challenge.pictures.len() != group || round.answers.len() != group {
            return Err(Error::TableShape(format!("round {r} is not {group} wide")));
        }
        for c in 0..group {
            expected.set(r, c, question.evaluate(&round.challenge.pictures[c])?);
            answered.set(r, c, round.answers[c]);
        }
    }
    Ok((expected, answered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::recovery_probability_bounds;
    use crate::feature_model::{FeatureUniverse, Question};
    use crate::protocols::{enhanced_answer, enhanced_challenge, EnhancedConfig};
    use crate::rng::trial_stream;

    #[test]
    fn distinct_columns_recover_exactly() {
        // expected columns (picture positions): 01 and 10 over two rounds;
        // user answered them swapped, so sigma = (2, 1)
        let expected = BitMatrix::from_rows(&[vec![false, true], vec![true, false]]).unwrap();
        let answered = BitMatrix::from_rows(&[vec![true, false], vec![false, true]]).unwrap();
        let guess = recover_permutation(&expected, &answered).unwrap();
        assert!(guess.valid);
        assert_eq!(guess.slots, vec![Some(2), Some(1)]);
    }

    #[test]
    fn zero_rounds_are_vacuously_ambiguous() {
        let expected = BitMatrix::new(0, 2);
        let answered = BitMatrix::new(0, 2);
        let guess = recover_permutation(&expected, &answered).unwrap();
        assert!(!guess.valid);
        // a single-position group has nothing to confuse
        let one = recover_permutation(&BitMatrix::new(0, 1), &BitMatrix::new(0, 1)).unwrap();
        assert!(one.valid);
        assert_eq!(one.slots, vec![Some(1)]);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = BitMatrix::new(2, 3);
        let b = BitMatrix::new(3, 3);
        assert!(recover_permutation(&a, &b).is_err());
        assert!(BitMatrix::from_rows(&[vec![true], vec![true, false]]).is_err());
    }

    #[test]
    fn unmatched_pictures_leave_dont_cares() {
        // picture column 1 matches nothing: slot stays None
        let expected = BitMatrix::from_rows(&[vec![false, true], vec![false, false]]).unwrap();
        let answered = BitMatrix::from_rows(&[vec![true, true], vec![true, false]]).unwrap();
        let guess = recover_permutation(&expected, &answered).unwrap();
        assert!(guess.valid);
        assert_eq!(guess.slots, vec![None, Some(2)]);
    }

    fn recovery_rate(group: u32, assigned: u32, rounds: u32, trials: u64, master: u64) -> f64 {
        let universe = FeatureUniverse::new(64).unwrap();
        let mut hits = 0u64;
        for trial in 0..trials {
            let mut rng = trial_stream(master, trial);
            let secret = 1 + (trial % 64) as u32;
            let sigma = PermutationString::random(group, assigned, &mut rng).unwrap();
            let cfg =
                EnhancedConfig::new(universe, Question::single(secret), sigma.clone(), rounds)
                    .unwrap();
            let observed: Vec<TranscriptRound> = (0..rounds)
                .map(|i| {
                    let challenge = enhanced_challenge(&cfg, i + 1, &mut rng).unwrap();
                    let answers = enhanced_answer(&cfg, &challenge, &mut rng).unwrap();
                    TranscriptRound { challenge, answers }
                })
                .collect();
            let (expected, answered) =
                evaluate_answer_tables(&observed, &cfg.question).unwrap();
            let guess = recover_permutation(&expected, &answered).unwrap();
            if guess.matches(&sigma) {
                hits += 1;
            }
        }
        hits as f64 / trials as f64
    }

    #[test]
    fn enough_rounds_pin_the_full_permutation() {
        // k=16 makes column collisions vanishingly rare at L=5
        let rate = recovery_rate(5, 3, 16, 200, 51);
        assert!(rate > 0.99, "rate={rate}");
    }

    #[test]
    fn rate_sits_inside_the_closed_form_sandwich_at_k6() {
        let trials = 10_000u64;
        let rate = recovery_rate(5, 3, 6, trials, 52);
        let bounds = recovery_probability_bounds(6, 5, 3).unwrap();
        let se = (rate * (1.0 - rate) / trials as f64).sqrt();
        assert!(
            rate >= bounds.lower - 3.0 * se && rate <= bounds.upper + 3.0 * se,
            "rate={rate} bounds=({}, {})",
            bounds.lower,
            bounds.upper
        );
    }
}
