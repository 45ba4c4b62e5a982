use std::fmt;

use serde::{Serialize, Serializer};

use crate::formula::{Formula, VarSet};
use crate::rules::{has_complementary, has_duplicate_members, is_sorted_by_variable};

/// Position in the six-stage conversion algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Stage 1 through 6.
    Step(u8),
    Done,
}

impl Stage {
    pub fn number(self) -> Option<u8> {
        match self {
            Stage::Step(k) => Some(k),
            Stage::Done => None,
        }
    }

    /// One-line goal of the stage, shown with accepted steps.
    pub fn goal(self) -> &'static str {
        match self {
            Stage::Step(1) => "eliminate implications and biconditionals",
            Stage::Step(2) => "move the outermost negation inward",
            Stage::Step(3) => "expand conjunctions of disjunctions by distributivity",
            Stage::Step(4) => "exclude contradictory conjunctions and redundant literals",
            Stage::Step(5) => "add missing variables to conjunctions",
            Stage::Step(6) => "order variables alphabetically and exclude double conjunctions",
            _ => "full disjunctive normal form reached",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Step(k) => write!(f, "{k}"),
            Stage::Done => f.write_str("Done"),
        }
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Stage::Step(k) => s.serialize_u8(*k),
            Stage::Done => s.serialize_str("Done"),
        }
    }
}

/// Literals, constants and negated constants may appear as conjunction
/// members of a DNF-shaped formula.
fn dnf_atom(f: &Formula) -> bool {
    f.is_literal()
        || matches!(f, Formula::Const(_))
        || matches!(f, Formula::Not(c) if matches!(c.as_ref(), Formula::Const(_)))
}

fn dnf_conjunct(f: &Formula) -> bool {
    match f {
        Formula::And(ms) => ms.iter().all(dnf_atom),
        other => dnf_atom(other),
    }
}

pub fn is_dnf_shaped(f: &Formula) -> bool {
    match f {
        Formula::Or(ms) => ms.iter().all(dnf_conjunct),
        other => dnf_conjunct(other),
    }
}

/// Top-level disjuncts; a non-disjunction is its own single disjunct.
pub fn disjuncts(f: &Formula) -> &[Formula] {
    match f {
        Formula::Or(ms) => ms,
        other => std::slice::from_ref(other),
    }
}

fn has_imp_or_iff(f: &Formula) -> bool {
    f.contains(&|g| matches!(g, Formula::Imp(..) | Formula::Iff(..)))
}

fn negates_compound(f: &Formula) -> bool {
    matches!(f, Formula::Not(c) if !c.is_atom())
}

/// Earliest unfinished stage of the whole formula over the task variables.
pub fn stage_of(f: &Formula, vars: &VarSet) -> Stage {
    if matches!(f, Formula::Const(_)) {
        return Stage::Done;
    }
    if has_imp_or_iff(f) {
        return Stage::Step(1);
    }
    if f.contains(&negates_compound) {
        return Stage::Step(2);
    }
    if !is_dnf_shaped(f) {
        return Stage::Step(3);
    }
    let redundant_and = |g: &Formula| match g {
        Formula::And(ms) => has_duplicate_members(ms) || has_complementary(ms),
        _ => false,
    };
    if f.contains(&|g| matches!(g, Formula::Const(_))) || f.contains(&redundant_and) {
        return Stage::Step(4);
    }
    if disjuncts(f).iter().any(|d| !d.variables().is_superset(vars)) {
        return Stage::Step(5);
    }
    let unsorted = |g: &Formula| matches!(g, Formula::And(ms) if !is_sorted_by_variable(ms));
    let duplicate_disjuncts = matches!(f, Formula::Or(ms) if has_duplicate_members(ms));
    if f.contains(&unsorted) || duplicate_disjuncts {
        return Stage::Step(6);
    }
    Stage::Done
}
