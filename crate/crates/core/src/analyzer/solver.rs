//! Reference solver executing the six stages literally.
//!
//! Site selection per stage:
//! 1. the first implication (rule 3) or biconditional (rule 6) in preorder
//!    whose operands hold no further implication or biconditional; a
//!    negated one is rewritten together with its negation (rules 7, 8);
//! 2. the outermost negation over a compound (rules 1, 9, 10);
//! 3. the first conjunction holding a disjunction member and no such
//!    conjunction deeper inside (rule 13);
//! 4. the first node accepting a simplification (rule 24 excluded, it would
//!    collapse a tautological disjunction the task still has to expand);
//! 5. the first disjunct missing variables, expanded by all of them (rule 19);
//! 6. the first unsorted conjunction (rule 17), then duplicate disjuncts (rule 2).

use serde::Serialize;
use thiserror::Error;

use super::stage::{disjuncts, stage_of, Stage};
use crate::formula::{Formula, FormulaError, Path, VarSet, MAX_VARIABLES};
use crate::rules::{apply_rule, has_duplicate_members, is_sorted_by_variable, Params};

/// Upper bound on solver steps; real tasks stay far below it.
pub const STEP_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverStep {
    pub rule: u8,
    pub path: Path,
    pub params: Params,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("no applicable step at stage {0}")]
    Stuck(Stage),
    #[error("step limit of {STEP_LIMIT} exceeded")]
    StepLimit,
}

/// Nodes in preorder with their paths.
fn preorder(f: &Formula) -> Vec<(Vec<usize>, &Formula)> {
    fn walk<'a>(node: &'a Formula, at: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Formula)>) {
        out.push((at.clone(), node));
        for (i, c) in node.children().into_iter().enumerate() {
            at.push(i);
            walk(c, at, out);
            at.pop();
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

fn has_imp_or_iff(f: &Formula) -> bool {
    f.contains(&|g| matches!(g, Formula::Imp(..) | Formula::Iff(..)))
}

fn distributable(f: &Formula) -> bool {
    matches!(f, Formula::And(ms) if ms.iter().any(|m| matches!(m, Formula::Or(_))))
}

/// Next `(rule, path, params)` of the reference solution, if any.
pub fn next_step(f: &Formula, vars: &VarSet) -> Option<(u8, Path, Params)> {
    let nodes = preorder(f);
    let parent_is_not = |at: &[usize]| {
        !at.is_empty()
            && nodes
                .iter()
                .any(|(p, n)| p.as_slice() == &at[..at.len() - 1] && matches!(n, Formula::Not(_)))
    };
    match stage_of(f, vars) {
        Stage::Done => None,
        Stage::Step(1) => nodes.iter().find_map(|(at, n)| {
            let (rule, negated) = match n {
                Formula::Imp(..) => (3, 7),
                Formula::Iff(a, b) if !has_imp_or_iff(a) && !has_imp_or_iff(b) => (6, 8),
                _ => return None,
            };
            Some(if parent_is_not(at) {
                (negated, Path::new(&at[..at.len() - 1]), Params::None)
            } else {
                (rule, Path::new(at.clone()), Params::None)
            })
        }),
        Stage::Step(2) => nodes.iter().find_map(|(at, n)| match n {
            Formula::Not(c) => {
                let rule = match c.as_ref() {
                    Formula::Not(_) => 1,
                    Formula::And(_) => 9,
                    Formula::Or(_) => 10,
                    _ => return None,
                };
                Some((rule, Path::new(at.clone()), Params::None))
            }
            _ => None,
        }),
        Stage::Step(3) => nodes.iter().find_map(|(at, n)| {
            let innermost = distributable(n) && n.children().iter().all(|c| !c.contains(&distributable));
            innermost.then(|| (13, Path::new(at.clone()), Params::None))
        }),
        Stage::Step(4) => nodes.iter().find_map(|(at, _)| {
            let path = Path::new(at.clone());
            [1, 2, 23, 25, 26, 28]
                .into_iter()
                .find(|&r| apply_rule(r, f, &path, &Params::None).is_ok())
                .map(|r| (r, path, Params::None))
        }),
        Stage::Step(5) => {
            let ds = disjuncts(f);
            ds.iter().enumerate().find_map(|(i, d)| {
                let missing: VarSet = vars.difference(&d.variables()).copied().collect();
                if missing.is_empty() {
                    return None;
                }
                let path = if ds.len() > 1 { Path::new([i]) } else { Path::root() };
                Some((19, path, Params::Vars(missing)))
            })
        }
        Stage::Step(_) => {
            let unsorted = nodes
                .iter()
                .find(|(_, n)| matches!(n, Formula::And(ms) if !is_sorted_by_variable(ms)));
            if let Some((at, _)) = unsorted {
                return Some((17, Path::new(at.clone()), Params::None));
            }
            matches!(f, Formula::Or(ms) if has_duplicate_members(ms)).then(|| (2, Path::root(), Params::None))
        }
    }
}

pub fn solve_reference(initial: &Formula, vars: &VarSet) -> Result<Vec<SolverStep>, SolveError> {
    if vars.len() > MAX_VARIABLES {
        return Err(FormulaError::TooManyVariables { count: vars.len(), limit: MAX_VARIABLES }.into());
    }
    let mut current = initial.clone();
    let mut trace = Vec::new();
    loop {
        let stage = stage_of(&current, vars);
        if stage == Stage::Done {
            return Ok(trace);
        }
        if trace.len() >= STEP_LIMIT {
            return Err(SolveError::StepLimit);
        }
        let (rule, path, params) = next_step(&current, vars).ok_or(SolveError::Stuck(stage))?;
        current = apply_rule(rule, &current, &path, &params).map_err(|_| SolveError::Stuck(stage))?;
        trace.push(SolverStep { rule, path, params, formula: current.clone() });
    }
}

/// Quantity that every reference step of the given stage strictly decreases.
/// Stage 6 counts unsorted chains twice, since sorting a chain can create one
/// duplicate disjunct.
pub fn stage_measure(f: &Formula, vars: &VarSet, stage: Stage) -> u64 {
    let count = |pred: &dyn Fn(&Formula) -> bool| preorder(f).iter().filter(|(_, n)| pred(n)).count() as u64;
    match stage {
        Stage::Step(1) => count(&|n| matches!(n, Formula::Imp(..) | Formula::Iff(..))),
        Stage::Step(2) => preorder(f)
            .iter()
            .map(|(_, n)| match n {
                Formula::Not(c) if !c.is_atom() => c.size() as u64,
                _ => 0,
            })
            .sum(),
        Stage::Step(3) => distribution_potential(f),
        Stage::Step(4) => f.size() as u64,
        Stage::Step(5) => disjuncts(f)
            .iter()
            .map(|d| vars.difference(&d.variables()).count() as u64)
            .sum(),
        Stage::Step(_) => {
            let unsorted = count(&|n| matches!(n, Formula::And(ms) if !is_sorted_by_variable(ms)));
            let dups = match f {
                Formula::Or(ms) => {
                    let distinct: std::collections::HashSet<&Formula> = ms.iter().collect();
                    (ms.len() - distinct.len()) as u64
                }
                _ => 0,
            };
            2 * unsorted + dups
        }
        Stage::Done => 0,
    }
}

/// Number of conjunctions a full expansion of `f` yields.
fn expansion_width(f: &Formula) -> u64 {
    match f {
        Formula::Or(ms) => ms.iter().map(expansion_width).sum(),
        Formula::And(ms) => ms.iter().map(expansion_width).product(),
        _ => 1,
    }
}

/// Sum over conjunctions of `expansion_width - 1`; zero exactly when no
/// conjunction contains a disjunction.
fn distribution_potential(f: &Formula) -> u64 {
    preorder(f)
        .iter()
        .map(|(_, n)| match n {
            Formula::And(_) => expansion_width(n) - 1,
            _ => 0,
        })
        .sum()
}
