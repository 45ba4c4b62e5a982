//! Relevance analysis of full DNF solutions.

mod solver;
mod stage;
mod verdict;

use serde::Serialize;

use crate::formula::{canonical_fdnf, equivalent, parse, print, print_marked, Formula, FormulaError, VarSet};
use crate::rules::IdentifyError;
use crate::solution::{Attempt, StepRecord};

pub use solver::{next_step, solve_reference, stage_measure, SolveError, SolverStep, STEP_LIMIT};
pub use stage::{disjuncts, is_dnf_shaped, stage_of, Stage};
pub use verdict::{check_step, ErrorCode, StepVerdict};

/// True when `final_` is the full DNF of `initial`, disjunct order aside.
/// A constant final formula completes a task whose formula has that value
/// everywhere.
pub fn is_completed(initial: &Formula, final_: &Formula, vars: &VarSet) -> Result<bool, FormulaError> {
    let target = canonical_fdnf(initial, vars)?;
    if let Formula::Const(b) = final_ {
        return equivalent(initial, &Formula::Const(*b));
    }
    if stage_of(final_, vars) != Stage::Done {
        return Ok(false);
    }
    let have: std::collections::BTreeSet<&Formula> = disjuncts(final_).iter().collect();
    let want: std::collections::BTreeSet<&Formula> = disjuncts(&target).iter().collect();
    Ok(have == want)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Annotation {
    Step {
        /// 1-based position in the history, undo records included.
        index: usize,
        verdict: StepVerdict,
        before: String,
        after: String,
    },
    Undo {
        index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttemptSummary {
    pub completed: bool,
    pub steps: usize,
    pub undos: usize,
    pub errors: usize,
    /// Count per error code, E1 first.
    pub per_code: [usize; 19],
    pub stage_reached: Stage,
    /// Set when the history could not be analysed to the end.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invalid: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttemptReport {
    pub variables: VarSet,
    pub annotations: Vec<Annotation>,
    pub summary: AttemptSummary,
}

/// Annotates every step of an attempt. The task variables are those of the
/// initial formula.
pub fn annotate_attempt(attempt: &Attempt) -> AttemptReport {
    let mut summary = AttemptSummary {
        completed: false,
        steps: attempt.apply_count(),
        undos: attempt.undo_count(),
        errors: 0,
        per_code: [0; 19],
        stage_reached: Stage::Step(1),
        invalid: None,
    };
    let initial = match parse(&attempt.initial) {
        Ok(f) => f,
        Err(e) => {
            summary.invalid = Some(format!("initial formula: {e}"));
            return AttemptReport { variables: VarSet::new(), annotations: Vec::new(), summary };
        }
    };
    let vars = initial.variables();
    let mut stack = vec![initial.clone()];
    let mut annotations = Vec::new();
    for (i, record) in attempt.steps.iter().enumerate() {
        let index = i + 1;
        match record {
            StepRecord::Undo { .. } => {
                if stack.len() == 1 {
                    summary.invalid = Some(format!("step {index}: undo without a step to take back"));
                    break;
                }
                stack.pop();
                annotations.push(Annotation::Undo { index });
            }
            StepRecord::Apply { formula, .. } => {
                let after = match parse(formula) {
                    Ok(f) => f,
                    Err(e) => {
                        summary.invalid = Some(format!("step {index}: {e}"));
                        break;
                    }
                };
                let before = stack.last().expect("initial formula stays on the stack");
                let verdict = match check_step(before, &after, &vars) {
                    Ok(v) => v,
                    Err(IdentifyError::NotEquivalent) => {
                        summary.invalid = Some(format!("step {index}: formula is not equivalent to the previous one"));
                        break;
                    }
                    Err(IdentifyError::Formula(e)) => {
                        summary.invalid = Some(format!("step {index}: {e}"));
                        break;
                    }
                };
                if let Some(code) = verdict.error {
                    summary.errors += 1;
                    summary.per_code[code.index()] += 1;
                }
                let mark = |f: &Formula, region: &Option<crate::formula::Path>| match region {
                    Some(p) => print_marked(f, p),
                    None => print(f),
                };
                annotations.push(Annotation::Step {
                    index,
                    before: mark(before, &verdict.identification.before_region),
                    after: mark(&after, &verdict.identification.after_region),
                    verdict,
                });
                stack.push(after);
            }
        }
    }
    let last = stack.last().expect("nonempty");
    summary.stage_reached = stage_of(last, &vars);
    summary.completed = is_completed(&initial, last, &vars).unwrap_or(false);
    AttemptReport { variables: vars, annotations, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn completion_examples() {
        let xy = VarSet::from(['X', 'Y']);
        assert!(is_completed(&p("X=>Y"), &p("!X&!Y|X&Y|!X&Y"), &xy).unwrap());
        assert!(!is_completed(&p("X=>Y"), &p("!X|Y"), &xy).unwrap());
        assert!(is_completed(&p("X&!X"), &p("0"), &VarSet::from(['X'])).unwrap());
        assert!(!is_completed(&p("X=>Y"), &p("!X&!Y|X&Y"), &xy).unwrap());
        assert!(is_completed(&p("X|!X"), &p("1"), &xy).unwrap());
        assert!(!is_completed(&p("X|Y"), &p("1"), &xy).unwrap());
    }

    #[test]
    fn empty_attempt() {
        let report = annotate_attempt(&Attempt::new("t", "!X&Y|X&Y"));
        assert!(report.annotations.is_empty());
        assert_eq!(report.summary.steps, 0);
        assert!(report.summary.completed);
        let report = annotate_attempt(&Attempt::new("t", "X=>Y"));
        assert!(!report.summary.completed);
        assert_eq!(report.summary.stage_reached, Stage::Step(1));
    }

    #[test]
    fn highlighting_strips_to_printer_output() {
        let mut a = Attempt::new("t", "!(X&Y)|Z");
        a.steps = vec![StepRecord::apply("!X|!Y|Z")];
        let report = annotate_attempt(&a);
        let Annotation::Step { before, after, .. } = &report.annotations[0] else { panic!() };
        assert_eq!(before, "[[!(X&Y)]]|Z");
        assert_eq!(after, "[[!X|!Y]]|Z");
    }

    #[test]
    fn invalid_histories_are_flagged() {
        let mut a = Attempt::new("t", "X");
        a.steps = vec![StepRecord::apply("X"), StepRecord::apply("Y")];
        let report = annotate_attempt(&a);
        assert_eq!(report.annotations.len(), 1);
        assert!(report.summary.invalid.is_some());

        let mut a = Attempt::new("t", "X");
        a.steps = vec![StepRecord::undo()];
        assert!(annotate_attempt(&a).summary.invalid.is_some());
    }
}
