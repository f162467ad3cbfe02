//! Simulator and analysis workbench for feature-based human identification
//! protocols: challenge–response schemes in which a human proves knowledge of
//! a secret predicate over picture features, while every challenge and every
//! answer bit is visible to an eavesdropper.
//!
//! The crate has four layers:
//!
//! * [`feature_model`] — the abstract feature universe, pictures as random
//!   feature subsets, secret questions as predicates, and the word dictionary
//!   used by the grid-of-words scheme.
//! * [`protocols`] — server and honest-user sides of the basic, enhanced
//!   (permutation-string) and practical (word-grid) schemes, producing
//!   verifiable transcripts.
//! * [`adversary`] — the passive eavesdropper: secret recovery by set
//!   elimination, permutation recovery from answer tables, the matrix view,
//!   and the multi-literal hypothesis search.
//! * [`analysis`] — closed-form workload and recovery-probability formulas
//!   together with seeded Monte Carlo estimators that check them.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod feature_model;
pub mod magic_square;
pub mod protocols;
pub mod rng;

pub use error::{Error, Result};
pub use feature_model::{
    build_dictionary, sample_conditioned, sample_picture, BoolExpr, Dictionary, FeatureId,
    FeatureSet, FeatureUniverse, Question, Word,
};
