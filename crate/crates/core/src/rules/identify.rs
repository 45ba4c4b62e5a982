//! Recovering the rule behind a step from the formulas before and after it.
//!
//! The two formulas are compared top-down to find the smallest changed
//! region. Every rule is replayed at that region, at every wider slice of
//! the same chain and at every ancestor; a replay that reproduces the
//! after-formula exactly explains the step. When nothing matches, the
//! search is repeated with double negations removed from the rewritten
//! part.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{apply_rule_tracked, lookup, Params, RULE_COUNT};
use crate::formula::{equivalent, subformula_at, Formula, FormulaError, Path, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    RuleStep { rule: u8, path: Path, params: Params, double_neg_cleanup: bool },
    FreeInput { path: Path },
    NoChange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepIdentification {
    pub kind: StepKind,
    /// Changed part of the before-formula.
    pub before_region: Option<Path>,
    /// Resulting part of the after-formula.
    pub after_region: Option<Path>,
    /// Other `(rule, path)` pairs that replay to the same result.
    pub alternatives: Vec<(u8, Path)>,
}

impl StepIdentification {
    pub fn rule(&self) -> Option<u8> {
        match self.kind {
            StepKind::RuleStep { rule, .. } => Some(rule),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifyError {
    #[error("the formulas are not equivalent")]
    NotEquivalent,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Smallest differing region: the path in `before` and in `after`.
fn diff_region(before: &Formula, after: &Formula) -> (Path, Path) {
    let mut steps = Vec::new();
    let (mut a, mut b) = (before, after);
    loop {
        match (a, b) {
            (Formula::Not(x), Formula::Not(y)) => {
                steps.push(0);
                (a, b) = (x, y);
            }
            (Formula::Imp(a0, a1), Formula::Imp(b0, b1)) | (Formula::Iff(a0, a1), Formula::Iff(b0, b1)) => {
                match (a0 == b0, a1 == b1) {
                    (true, false) => {
                        steps.push(1);
                        (a, b) = (a1, b1);
                    }
                    (false, true) => {
                        steps.push(0);
                        (a, b) = (a0, b0);
                    }
                    _ => return (Path::new(steps.clone()), Path::new(steps)),
                }
            }
            (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
                let (la, lb) = (xs.len(), ys.len());
                let shortest = la.min(lb);
                let prefix = xs.iter().zip(ys).take_while(|(x, y)| x == y).count().min(shortest);
                let suffix = xs
                    .iter()
                    .rev()
                    .zip(ys.iter().rev())
                    .take_while(|(x, y)| x == y)
                    .count()
                    .min(shortest - prefix);
                let (wa, wb) = (la - prefix - suffix, lb - prefix - suffix);
                if la == lb && wa == 1 {
                    steps.push(prefix);
                    (a, b) = (&xs[prefix], &ys[prefix]);
                    continue;
                }
                let region = |len: usize, width: usize| {
                    if width == 0 || width == len {
                        Path::new(steps.clone())
                    } else if width == 1 {
                        Path::new(steps.clone()).child(prefix)
                    } else {
                        Path::sliced(steps.clone(), prefix, width)
                    }
                };
                return (region(la, wa), region(lb, wb));
            }
            _ => return (Path::new(steps.clone()), Path::new(steps)),
        }
    }
}

/// Paths worth replaying for a change at `region`.
fn replay_paths(before: &Formula, after: &Formula, region: &Path) -> Vec<Path> {
    let mut out = BTreeSet::new();
    // A single changed member counts as a one-member slice of its chain.
    let span = match (region.slice, region.steps.split_last()) {
        (Some((s, l)), _) => Some((region.steps.clone(), s, l)),
        (None, Some((&i, up))) if subformula_at(before, &Path::new(up.to_vec())).is_ok_and(|f| f.is_chain()) => {
            Some((up.to_vec(), i, 1))
        }
        _ => None,
    };
    if let Some((chain, s, l)) = span {
        let xs = subformula_at(before, &Path::new(chain.clone())).ok();
        let xs = xs.as_ref().and_then(Formula::members).unwrap_or_default();
        let n = xs.len();
        // The shortest region is not always the rewritten one: with repeated
        // members the common prefix and suffix can be traded against each
        // other, so every alignment is tried.
        let (mut first, mut last) = (s, s + l);
        let ys = subformula_at(after, &Path::new(chain.clone())).ok();
        if let Some(ys) = ys.as_ref().and_then(Formula::members) {
            let prefix = xs.iter().zip(ys).take_while(|(x, y)| x == y).count();
            let suffix = xs.iter().rev().zip(ys.iter().rev()).take_while(|(x, y)| x == y).count();
            first = first.max(prefix.min(n));
            last = last.min(n.saturating_sub(suffix));
        }
        for start in 0..=first {
            for end in (start + 1).max(last)..=n {
                if let Ok(p) = Path::sliced(chain.clone(), start, end - start).normalize(before) {
                    out.insert(p);
                }
            }
        }
    }
    out.insert(region.clone());
    let mut steps = region.steps.clone();
    loop {
        out.insert(Path::new(steps.clone()));
        if steps.pop().is_none() {
            break;
        }
    }
    out.into_iter().collect()
}

/// Order that `pick` uses for tied matches.
fn preference(rule: u8, path: &Path) -> (u8, usize, bool, Option<(usize, usize)>) {
    (rule, path.depth(), path.slice.is_some(), path.slice)
}

fn param_candidates(rule: u8, part: &Formula, after_region: &Formula, hint: Option<&Formula>) -> Vec<Params> {
    match rule {
        13 => {
            let mut out = vec![Params::None];
            if let Formula::And(ms) = part {
                let ors = (0..ms.len()).filter(|&i| matches!(ms[i], Formula::Or(_)));
                out.extend(ors.skip(1).map(Params::Member));
            }
            out
        }
        18 => {
            let mut out = vec![Params::None];
            if let (Formula::Or(ms), Some(Formula::Or(target))) = (part, hint) {
                if let Some(order) = permutation(ms, target) {
                    out.push(Params::Order(order));
                }
            }
            out
        }
        19 => {
            let base: Vec<char> = after_region.variables().difference(&part.variables()).copied().collect();
            if base.is_empty() {
                return Vec::new();
            }
            if base.len() > 6 {
                return vec![Params::Vars(base.into_iter().collect())];
            }
            (1..1u32 << base.len())
                .map(|mask| {
                    Params::Vars(
                        base.iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, v)| *v)
                            .collect::<VarSet>(),
                    )
                })
                .collect()
        }
        _ => vec![Params::None],
    }
}

/// Index order taking `from` to `to`, if `to` is a rearrangement.
fn permutation(from: &[Formula], to: &[Formula]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut used = vec![false; from.len()];
    to.iter()
        .map(|t| {
            let i = (0..from.len()).find(|&i| !used[i] && &from[i] == t)?;
            used[i] = true;
            Some(i)
        })
        .collect()
}

/// Subformula of `after` corresponding to `path` in `before`.
fn counterpart(after: &Formula, path: &Path, region: &Path, delta: isize) -> Option<Formula> {
    let shifted = match path.slice {
        Some((s, l)) if path.steps == region.steps => {
            let len = l as isize + delta;
            if len < 1 {
                return None;
            }
            Path::sliced(path.steps.clone(), s, len as usize)
        }
        _ => path.clone(),
    };
    subformula_at(after, &shifted).ok()
}

struct Match {
    rule: u8,
    path: Path,
    params: Params,
    region: Path,
}

pub fn identify_step(before: &Formula, after: &Formula) -> Result<StepIdentification, IdentifyError> {
    if before == after {
        return Ok(StepIdentification {
            kind: StepKind::NoChange,
            before_region: None,
            after_region: None,
            alternatives: Vec::new(),
        });
    }
    let (region, after_region) = diff_region(before, after);
    let after_part = subformula_at(after, &after_region)?;
    let width = |f: &Formula, p: &Path| -> isize {
        let node = subformula_at(f, &Path::new(p.steps.clone())).ok();
        node.and_then(|n| n.members().map(|m| m.len() as isize)).unwrap_or(1)
    };
    let delta = width(after, &after_region) - width(before, &region);
    let paths = replay_paths(before, after, &region);

    for cleanup in [false, true] {
        let mut matches = Vec::new();
        for path in &paths {
            let Ok(part) = subformula_at(before, path) else { continue };
            let hint = counterpart(after, path, &region, delta);
            for rule in 1..=RULE_COUNT {
                for params in param_candidates(rule, &part, &after_part, hint.as_ref()) {
                    let Ok(rw) = apply_rule_tracked(rule, before, path, &params, cleanup) else {
                        continue;
                    };
                    if cleanup {
                        // Only count replays where the cleanup did something.
                        let plain = apply_rule_tracked(rule, before, path, &params, false);
                        if plain.is_ok_and(|p| p.formula == rw.formula) {
                            continue;
                        }
                    }
                    if rw.formula == *after {
                        matches.push(Match { rule, path: path.clone(), params, region: rw.region });
                    }
                }
            }
        }
        if matches.is_empty() {
            continue;
        }
        matches.sort_by_key(|m| preference(m.rule, &m.path));
        let mut seen = BTreeSet::new();
        let mut iter = matches.into_iter().filter(|m| seen.insert((m.rule, m.path.clone())));
        let best = iter.next().expect("nonempty");
        let alternatives = iter.map(|m| (m.rule, m.path)).collect();
        debug_assert!(lookup(best.rule).is_some());
        return Ok(StepIdentification {
            kind: StepKind::RuleStep {
                rule: best.rule,
                path: best.path.clone(),
                params: best.params,
                double_neg_cleanup: cleanup,
            },
            before_region: Some(best.path),
            after_region: Some(best.region),
            alternatives,
        });
    }

    if !equivalent(before, after)? {
        return Err(IdentifyError::NotEquivalent);
    }
    Ok(StepIdentification {
        kind: StepKind::FreeInput { path: region.clone() },
        before_region: Some(region),
        after_region: Some(after_region),
        alternatives: Vec::new(),
    })
}
