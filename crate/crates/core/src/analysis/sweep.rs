//! Workload comparison sweeps, emitted as CSV.
//!
//! All three sweeps are closed-form tables: they consume no randomness and
//! regenerate byte-identically. Charting is left to downstream tools.

use super::{workload_basic, workload_enhanced, workload_practical};
use std::fmt::Write as _;

/// Which comparison table to generate. The `fig6`/`fig7`/`fig8` names are the
/// stable CLI tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFigure {
    /// `fig6`: workload of all three schemes against the group size `L`.
    WorkloadVersusGroupSize,
    /// `fig7`: workload against the universe (and dictionary) size at fixed `L`.
    WorkloadVersusUniverse,
    /// `fig8`: enhanced workload against the answered-slot count at fixed `L`.
    WorkloadVersusAssigned,
}

impl SweepFigure {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "fig6" => Some(Self::WorkloadVersusGroupSize),
            "fig7" => Some(Self::WorkloadVersusUniverse),
            "fig8" => Some(Self::WorkloadVersusAssigned),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::WorkloadVersusGroupSize => "fig6",
            Self::WorkloadVersusUniverse => "fig7",
            Self::WorkloadVersusAssigned => "fig8",
        }
    }
}

/// Grid parameters with the standard comparison defaults.
#[derive(Debug, Clone, Copy)]
pub struct SweepGrid {
    /// Universe size for the basic and enhanced columns.
    pub universe_n: f64,
    /// Dictionary size for the practical column.
    pub word_count: u64,
    /// Word-feature overlap fraction.
    pub x: f64,
    /// Fixed group size for the universe and assigned-slot sweeps.
    pub group_size: u32,
    /// Group size beyond which a single screen stops being practical for a
    /// human user; emitted as a marker column, not enforced.
    pub practical_zone: u32,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self { universe_n: 1e5, word_count: 10_000, x: 0.5, group_size: 20, practical_zone: 25 }
    }
}

/// Enhanced scheme's answered-slot rule for the group-size sweep: half the
/// group, rounded up.
fn half_up(group: u32) -> u32 {
    group.div_ceil(2)
}

/// Generate the named sweep as CSV text: a header row, then comma-separated
/// data rows with plain decimal formatting.
pub fn sweep(figure: SweepFigure, grid: &SweepGrid) -> String {
    match figure {
        SweepFigure::WorkloadVersusGroupSize => group_size_sweep(grid),
        SweepFigure::WorkloadVersusUniverse => universe_sweep(grid),
        SweepFigure::WorkloadVersusAssigned => assigned_sweep(grid),
    }
}

fn group_size_sweep(grid: &SweepGrid) -> String {
    let mut out = String::from("L,basic_work,enhanced_work,practical_work,practical_zone_marker\n");
    for group in 2..=40u32 {
        let basic = workload_basic(grid.universe_n);
        let enhanced = workload_enhanced(grid.universe_n, group, half_up(group));
        let practical = workload_practical(grid.word_count, grid.x, group);
        let marker = u32::from(group == grid.practical_zone);
        writeln!(out, "{group},{basic},{enhanced},{practical},{marker}").unwrap();
    }
    out
}

fn universe_sweep(grid: &SweepGrid) -> String {
    let mut out = String::from("n,N,basic_work,enhanced_work,practical_work\n");
    // eight log-spaced points per decade across n = 1e3..1e5, N = n / 10
    for i in 0..=16u32 {
        let n = 10f64.powf(3.0 + i as f64 / 8.0);
        let word_count = 10f64.powf(2.0 + i as f64 / 8.0).round() as u64;
        let basic = workload_basic(n);
        let enhanced = workload_enhanced(n, grid.group_size, half_up(grid.group_size));
        let practical = workload_practical(word_count, grid.x, grid.group_size);
        writeln!(out, "{n},{word_count},{basic},{enhanced},{practical}").unwrap();
    }
    out
}

fn assigned_sweep(grid: &SweepGrid) -> String {
    let mut out = String::from("l,enhanced_work\n");
    for assigned in 1..=grid.group_size {
        let enhanced = workload_enhanced(grid.universe_n, grid.group_size, assigned);
        writeln!(out, "{assigned},{enhanced}").unwrap();
    }
    out
}
