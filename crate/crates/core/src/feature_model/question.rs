//! Secret questions: predicates over pictures.
//!
//! A question is either a single feature ("does the picture contain f?") or a
//! boolean combination of up to three feature literals. Questions evaluate to
//! one bit on any picture of their universe.

use crate::error::{Error, Result};
use crate::feature_model::{FeatureId, FeatureSet, FeatureUniverse};

/// Maximum number of distinct literals in a boolean question.
pub const MAX_LITERALS: usize = 3;

/// A boolean expression over feature literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    /// `feature` or, when `negated`, its absence.
    Literal { feature: FeatureId, negated: bool },
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn literal(feature: FeatureId, negated: bool) -> Self {
        BoolExpr::Literal { feature, negated }
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    fn collect_literals(&self, out: &mut Vec<(FeatureId, bool)>) {
        match self {
            BoolExpr::Literal { feature, negated } => {
                if !out.contains(&(*feature, *negated)) {
                    out.push((*feature, *negated));
                }
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.collect_literals(out);
                b.collect_literals(out);
            }
        }
    }

    fn eval(&self, picture: &FeatureSet) -> bool {
        match self {
            BoolExpr::Literal { feature, negated } => picture.contains(*feature) != *negated,
            BoolExpr::And(a, b) => a.eval(picture) && b.eval(picture),
            BoolExpr::Or(a, b) => a.eval(picture) || b.eval(picture),
        }
    }

    /// Evaluate under an explicit assignment, used for truth tables.
    fn eval_assignment(&self, vars: &[FeatureId], assignment: u32) -> bool {
        match self {
            BoolExpr::Literal { feature, negated } => {
                let pos = vars.iter().position(|f| f == feature).expect("literal not in vars");
                (assignment >> pos & 1 == 1) != *negated
            }
            BoolExpr::And(a, b) => {
                a.eval_assignment(vars, assignment) && b.eval_assignment(vars, assignment)
            }
            BoolExpr::Or(a, b) => {
                a.eval_assignment(vars, assignment) || b.eval_assignment(vars, assignment)
            }
        }
    }
}

/// A secret question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Question {
    Single(FeatureId),
    Boolean(BoolExpr),
}

impl Question {
    pub fn single(feature: FeatureId) -> Self {
        Question::Single(feature)
    }

    /// Build a boolean question, rejecting expressions with more than
    /// [`MAX_LITERALS`] distinct literals.
    pub fn boolean(expr: BoolExpr) -> Result<Self> {
        let mut lits = Vec::new();
        expr.collect_literals(&mut lits);
        if lits.is_empty() || lits.len() > MAX_LITERALS {
            return Err(Error::TooManyLiterals { count: lits.len(), max: MAX_LITERALS });
        }
        Ok(Question::Boolean(expr))
    }

    /// Distinct features referenced, ascending.
    pub fn features(&self) -> Vec<FeatureId> {
        match self {
            Question::Single(f) => vec![*f],
            Question::Boolean(e) => {
                let mut lits = Vec::new();
                e.collect_literals(&mut lits);
                let mut fs: Vec<FeatureId> = lits.iter().map(|(f, _)| *f).collect();
                fs.sort_unstable();
                fs.dedup();
                fs
            }
        }
    }

    /// Error unless every referenced feature lies in `universe`.
    pub fn check_universe(&self, universe: FeatureUniverse) -> Result<()> {
        for f in self.features() {
            if !universe.contains(f) {
                return Err(Error::FeatureOutOfUniverse { feature: f, n: universe.size() });
            }
        }
        Ok(())
    }

    /// Evaluate the question on a picture: one bit, total and deterministic.
    pub fn evaluate(&self, picture: &FeatureSet) -> Result<bool> {
        self.check_universe(picture.universe())?;
        Ok(match self {
            Question::Single(f) => picture.contains(*f),
            Question::Boolean(e) => e.eval(picture),
        })
    }

    /// Semantic form: support features plus truth table, with features the
    /// expression does not actually depend on projected away. Logically
    /// equivalent questions canonicalize identically.
    pub fn canonical(&self) -> CanonicalFunction {
        match self {
            Question::Single(f) => CanonicalFunction { support: vec![*f], table: 0b10 },
            Question::Boolean(e) => {
                let vars = self.features();
                let mut table = 0u8;
                for assignment in 0..(1u32 << vars.len()) {
                    if e.eval_assignment(&vars, assignment) {
                        table |= 1 << assignment;
                    }
                }
                CanonicalFunction::reduce(&vars, table)
            }
        }
    }
}

/// A question reduced to its semantic content: the features it depends on
/// (sorted) and its truth table over them.
///
/// Bit `a` of `table` is the value when feature `support[j]` is present iff
/// bit `j` of `a` is set. A constant function has empty support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalFunction {
    support: Vec<FeatureId>,
    table: u8,
}

impl CanonicalFunction {
    pub fn new(support: Vec<FeatureId>, table: u8) -> Self {
        Self::reduce(&support, table)
    }

    /// Drop variables the table does not depend on.
    fn reduce(vars: &[FeatureId], table: u8) -> Self {
        let mut support = Vec::new();
        let mut kept_positions = Vec::new();
        for (pos, &f) in vars.iter().enumerate() {
            let depends = (0..(1u32 << vars.len())).any(|a| {
                let flipped = a ^ (1 << pos);
                (table >> a & 1) != (table >> flipped & 1)
            });
            if depends {
                support.push(f);
                kept_positions.push(pos);
            }
        }
        let mut reduced = 0u8;
        for a in 0..(1u32 << support.len()) {
            // expand the reduced assignment to a full one (dropped vars at 0)
            let mut full = 0u32;
            for (new_pos, &old_pos) in kept_positions.iter().enumerate() {
                if a >> new_pos & 1 == 1 {
                    full |= 1 << old_pos;
                }
            }
            if table >> full & 1 == 1 {
                reduced |= 1 << a;
            }
        }
        CanonicalFunction { support, table: reduced }
    }

    pub fn support(&self) -> &[FeatureId] {
        &self.support
    }

    pub fn table(&self) -> u8 {
        self.table
    }

    /// `Some(value)` when the function ignores every feature.
    pub fn constant_value(&self) -> Option<bool> {
        if self.support.is_empty() {
            Some(self.table & 1 == 1)
        } else {
            None
        }
    }

    pub fn evaluate(&self, picture: &FeatureSet) -> bool {
        let mut assignment = 0u32;
        for (pos, &f) in self.support.iter().enumerate() {
            if picture.contains(f) {
                assignment |= 1 << pos;
            }
        }
        self.table >> assignment & 1 == 1
    }

    /// Evaluate against a row given as (indicator set, answer): true when the
    /// function reproduces the answer.
    pub fn consistent_with(&self, indicators: &FeatureSet, answer: bool) -> bool {
        self.evaluate(indicators) == answer
    }

    /// Every non-constant function over distinct features of `universe`
    /// expressible with at most `max_literals` literal occurrences joined by
    /// AND/OR, deduplicated up to logical equivalence.
    pub fn enumerate_all(universe: FeatureUniverse, max_literals: usize) -> Vec<CanonicalFunction> {
        let shapes = abstract_shapes(max_literals);
        let n = universe.size();
        let mut out = Vec::new();
        // size-1 supports
        for f in 1..=n {
            for &t in &shapes.one {
                out.push(CanonicalFunction { support: vec![f], table: t });
            }
        }
        // size-2 supports
        for a in 1..=n {
            for b in (a + 1)..=n {
                for &t in &shapes.two {
                    out.push(CanonicalFunction { support: vec![a, b], table: t });
                }
            }
        }
        // size-3 supports
        for a in 1..=n {
            for b in (a + 1)..=n {
                for c in (b + 1)..=n {
                    for &t in &shapes.three {
                        out.push(CanonicalFunction { support: vec![a, b, c], table: t });
                    }
                }
            }
        }
        out
    }
}

/// Truth tables reachable with at most `max_literals` literal occurrences,
/// keyed by true support size. Computed over three abstract variables; the
/// formula enumeration is closed under variable permutation, so instantiating
/// over sorted feature combinations loses nothing.
struct AbstractShapes {
    one: Vec<u8>,
    two: Vec<u8>,
    three: Vec<u8>,
}

fn abstract_shapes(max_literals: usize) -> AbstractShapes {
    use std::collections::BTreeSet;
    let max_literals = max_literals.min(3);
    // a literal as (var 0..3, negated); its 8-entry table over 3 vars
    let lit_table = |var: usize, neg: bool| -> u8 {
        let mut t = 0u8;
        for a in 0..8u32 {
            if (a >> var & 1 == 1) != neg {
                t |= 1 << a;
            }
        }
        t
    };
    let lits: Vec<u8> =
        (0..3).flat_map(|v| [false, true].map(|neg| lit_table(v, neg))).collect();
    let mut tables: BTreeSet<u8> = BTreeSet::new();
    if max_literals >= 1 {
        tables.extend(&lits);
    }
    if max_literals >= 2 {
        for &a in &lits {
            for &b in &lits {
                tables.insert(a & b);
                tables.insert(a | b);
            }
        }
    }
    if max_literals >= 3 {
        for &a in &lits {
            for &b in &lits {
                for &c in &lits {
                    // both association orders collapse for the same operator;
                    // mixed operators need both shapes
                    for t in [a & (b & c), a & (b | c), a | (b & c), a | (b | c)] {
                        tables.insert(t);
                    }
                }
            }
        }
    }
    let mut shapes = AbstractShapes { one: Vec::new(), two: Vec::new(), three: Vec::new() };
    let mut seen: BTreeSet<(Vec<u32>, u8)> = BTreeSet::new();
    for t in tables {
        let reduced = CanonicalFunction::reduce(&[1, 2, 3], t);
        let key = (reduced.support.clone(), reduced.table);
        if !seen.insert(key) {
            continue;
        }
        // keep only tables whose support is a prefix {1}, {1,2}, {1,2,3};
        // permuted supports are re-instantiated elsewhere in the var order
        match reduced.support.as_slice() {
            [1] => shapes.one.push(reduced.table),
            [1, 2] => shapes.two.push(reduced.table),
            [1, 2, 3] => shapes.three.push(reduced.table),
            _ => {}
        }
    }
    shapes.one.sort_unstable();
    shapes.two.sort_unstable();
    shapes.three.sort_unstable();
    shapes
}
