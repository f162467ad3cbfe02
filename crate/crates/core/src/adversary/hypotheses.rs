//! Consistency solvers over recorded rounds: the matrix view of the basic
//! scheme and the hypothesis search for multi-literal questions.

use crate::error::{Error, Result};
use crate::feature_model::{CanonicalFunction, FeatureSet, FeatureUniverse};

/// Enumeration guard for [`boolean_hypothesis_search`].
pub const HYPOTHESIS_UNIVERSE_MAX: u32 = 64;

/// Solve the single-feature consistency system column by column.
///
/// Row `r` of `indicator_rows` flags which features the adversary extracted
/// from picture `r`; `answers[r]` is the observed bit. A feature is a
/// candidate secret exactly when its indicator column reproduces the answer
/// vector. This walks columns independently, deliberately taking a different
/// route from the set-elimination attack so the two can cross-check each
/// other.
pub fn matrix_solve(
    universe: FeatureUniverse,
    indicator_rows: &[FeatureSet],
    answers: &[bool],
) -> Result<FeatureSet> {
    if indicator_rows.len() != answers.len() {
        return Err(Error::LengthMismatch {
            expected: indicator_rows.len(),
            actual: answers.len(),
        });
    }
    for row in indicator_rows {
        if row.universe_size() != universe.size() {
            return Err(Error::UniverseMismatch {
                left: universe.size(),
                right: row.universe_size(),
            });
        }
    }
    let mut candidates = FeatureSet::empty(universe);
    for feature in 1..=universe.size() {
        let consistent = indicator_rows
            .iter()
            .zip(answers)
            .all(|(row, &answer)| row.contains(feature) == answer);
        if consistent {
            candidates.insert(feature)?;
        }
    }
    Ok(candidates)
}

/// Every question of at most `max_literals` literals consistent with the
/// recorded rounds, canonicalized up to logical equivalence.
///
/// Enumerates the whole hypothesis family and keeps the consistent members,
/// so the true secret is always in the result under perfect extraction. The
/// family grows with the cube of the universe size; universes beyond
/// [`HYPOTHESIS_UNIVERSE_MAX`] are refused.
pub fn boolean_hypothesis_search(
    universe: FeatureUniverse,
    indicator_rows: &[FeatureSet],
    answers: &[bool],
    max_literals: usize,
) -> Result<Vec<CanonicalFunction>> {
    if universe.size() > HYPOTHESIS_UNIVERSE_MAX {
        return Err(Error::UniverseTooLarge {
            n: universe.size(),
            max: HYPOTHESIS_UNIVERSE_MAX,
        });
    }
    if indicator_rows.len() != answers.len() {
        return Err(Error::LengthMismatch {
            expected: indicator_rows.len(),
            actual: answers.len(),
        });
    }
    let family = CanonicalFunction::enumerate_all(universe, max_literals);
    Ok(family
        .into_iter()
        .filter(|f| {
            indicator_rows
                .iter()
                .zip(answers)
                .all(|(row, &answer)| f.consistent_with(row, answer))
        })
        .collect())
}
