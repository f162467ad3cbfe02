//! The abstract feature model.
//!
//! A picture is a subset of a universal feature set `{1..n}`. Drawing a
//! picture means including each feature independently with probability 1/2,
//! which makes every one of the `2^n` subsets equally likely. Questions are
//! binary predicates over pictures; the word dictionary backs the practical
//! scheme, with each word carrying features from a reduced universe.

mod question;

pub use question::{BoolExpr, CanonicalFunction, Question};

use crate::error::{Error, Result};
use crate::rng::SimRng;
use rand::Rng;

/// Identifier of a single feature; valid ids run from 1 to the universe size.
pub type FeatureId = u32;

/// The universal set of features `{1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureUniverse {
    n: u32,
}

impl FeatureUniverse {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParam("universe size must be >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, feature: FeatureId) -> bool {
        feature >= 1 && feature <= self.n
    }
}

/// A set of features, stored as a bitmap over `1..=n`.
///
/// Feature `f` occupies bit `f - 1`; word 0 holds features 1..=64. All set
/// algebra is closed over sets of the same universe; mixing universes is a
/// caller bug and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSet {
    n: u32,
    words: Vec<u64>,
}

impl FeatureSet {
    pub fn empty(universe: FeatureUniverse) -> Self {
        let words = vec![0u64; Self::word_count(universe.n)];
        Self { n: universe.n, words }
    }

    pub fn full(universe: FeatureUniverse) -> Self {
        let mut set = Self::empty(universe);
        for w in &mut set.words {
            *w = !0;
        }
        set.mask_tail();
        set
    }

    pub fn from_features(universe: FeatureUniverse, features: &[FeatureId]) -> Result<Self> {
        let mut set = Self::empty(universe);
        for &f in features {
            set.insert(f)?;
        }
        Ok(set)
    }

    fn word_count(n: u32) -> usize {
        (n as usize).div_ceil(64)
    }

    // Clear bits beyond n in the last word.
    fn mask_tail(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> FeatureUniverse {
        FeatureUniverse { n: self.n }
    }

    pub fn universe_size(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, feature: FeatureId) -> bool {
        if feature < 1 || feature > self.n {
            return false;
        }
        let idx = (feature - 1) as usize;
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn insert(&mut self, feature: FeatureId) -> Result<()> {
        if feature < 1 || feature > self.n {
            return Err(Error::FeatureOutOfUniverse { feature, n: self.n });
        }
        let idx = (feature - 1) as usize;
        self.words[idx / 64] |= 1u64 << (idx % 64);
        Ok(())
    }

    fn assert_same_universe(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "feature sets from different universes ({} vs {})",
            self.n, other.n
        );
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.assert_same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Remove every feature of `other` from `self`.
    pub fn subtract(&mut self, other: &Self) {
        self.assert_same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.assert_same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Complement relative to the universe `1..=n`.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersection_len(&self, other: &Self) -> u32 {
        self.assert_same_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// The single member, if the set has exactly one.
    pub fn sole_member(&self) -> Option<FeatureId> {
        if self.len() != 1 {
            return None;
        }
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(wi as u32 * 64 + tz + 1)
                }
            })
        })
    }

    /// Hex encoding of the bitmap: byte 0 covers features 1..=8 with feature 1
    /// in the least significant bit, `ceil(n/8)` bytes total, lowercase.
    ///
    /// Used by the transcript line format.
    pub fn to_hex(&self) -> String {
        let nbytes = (self.n as usize).div_ceil(8);
        let mut out = String::with_capacity(nbytes * 2);
        for byte_idx in 0..nbytes {
            let word = self.words[byte_idx / 8];
            let byte = (word >> ((byte_idx % 8) * 8)) as u8;
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Draw a picture: each feature of the universe is included independently
/// with probability 1/2, so all `2^n` subsets are equally likely.
pub fn sample_picture(universe: FeatureUniverse, rng: &mut SimRng) -> FeatureSet {
    let mut set = FeatureSet::empty(universe);
    for w in &mut set.words {
        *w = rng.gen();
    }
    set.mask_tail();
    set
}

/// Attempt cap for rejection sampling in [`sample_conditioned`].
pub const CONDITION_ATTEMPTS: u32 = 64;

/// Draw a picture conditioned on `question` evaluating to `want`.
///
/// Rejection sampling on [`sample_picture`], so the result is uniform over
/// the conditioned subsets. A condition that is constant and unequal to
/// `want` is rejected outright; otherwise up to [`CONDITION_ATTEMPTS`] draws
/// are made before giving up. For a single-feature question each draw
/// succeeds with probability 1/2, so the cap is hit with probability 2^-64;
/// boolean questions with lower satisfaction probability surface the cap
/// error rather than looping forever.
pub fn sample_conditioned(
    question: &Question,
    want: bool,
    universe: FeatureUniverse,
    rng: &mut SimRng,
) -> Result<FeatureSet> {
    question.check_universe(universe)?;
    if let Some(constant) = question.canonical().constant_value() {
        if constant != want {
            return Err(Error::Unsatisfiable);
        }
    }
    for _ in 0..CONDITION_ATTEMPTS {
        let picture = sample_picture(universe, rng);
        if question.evaluate(&picture)? == want {
            return Ok(picture);
        }
    }
    Err(Error::SamplingFailed { attempts: CONDITION_ATTEMPTS })
}

/// One dictionary word: an id plus its feature set over the reduced word
/// universe.
#[derive(Debug, Clone)]
pub struct Word {
    pub id: u32,
    pub features: FeatureSet,
}

/// A dictionary of `N` words whose features live in a universe of
/// `ceil(x * N)` features, `0 < x < 1`.
///
/// Distinct words share concepts and letters, so the number of distinct
/// word features grows slower than the word count; the overlap fraction `x`
/// models that reduction.
#[derive(Debug, Clone)]
pub struct Dictionary {
    universe: FeatureUniverse,
    words: Vec<Word>,
}

impl Dictionary {
    /// Assemble a dictionary from explicit words over `universe`.
    pub fn from_words(universe: FeatureUniverse, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParam("dictionary needs at least one word".into()));
        }
        for w in &words {
            if w.features.universe_size() != universe.size() {
                return Err(Error::UniverseMismatch {
                    left: universe.size(),
                    right: w.features.universe_size(),
                });
            }
        }
        Ok(Self { universe, words })
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn universe(&self) -> FeatureUniverse {
        self.universe
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> &Word {
        &self.words[idx]
    }
}

/// Reduced universe size for a dictionary of `word_count` words: `ceil(x * N)`.
pub fn word_universe_size(word_count: u64, x: f64) -> u32 {
    (x * word_count as f64).ceil() as u32
}

/// Build a dictionary of `word_count` random words over a universe of
/// `ceil(x * word_count)` features.
pub fn build_dictionary(word_count: u64, x: f64, rng: &mut SimRng) -> Result<Dictionary> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParam(format!("overlap fraction x={x} not in (0, 1)")));
    }
    if word_count == 0 {
        return Err(Error::InvalidParam("dictionary needs at least one word".into()));
    }
    let universe = FeatureUniverse::new(word_universe_size(word_count, x))?;
    let words = (0..word_count)
        .map(|id| Word { id: id as u32, features: sample_picture(universe, rng) })
        .collect();
    Ok(Dictionary { universe, words })
}
