//! Solution files: the recorded history of every attempt, undo steps
//! included.
//!
//! ```json
//! {"version": 1,
//!  "attempts": [{"task_id": "t1", "student": "s1", "initial": "X=>Y",
//!                "steps": [{"op": "apply", "formula": "!X|Y"}, {"op": "undo"}]}]}
//! ```

mod annotations;
mod stats;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{equivalent, parse, Formula};

pub use annotations::write_annotations;
pub use stats::{aggregate_stats, export_tsv, StatsRow, StatsTable, TSV_COLUMNS};

pub const FORMAT_VERSION: u32 = 1;

fn default_goal() -> String {
    "FDNF".into()
}

fn is_default_goal(goal: &str) -> bool {
    goal == "FDNF"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum StepRecord {
    Apply {
        formula: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        timestamp: Option<u64>,
    },
    Undo {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        timestamp: Option<u64>,
    },
}

impl StepRecord {
    pub fn apply(formula: impl Into<String>) -> StepRecord {
        StepRecord::Apply { formula: formula.into(), timestamp: None }
    }

    pub fn undo() -> StepRecord {
        StepRecord::Undo { timestamp: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub task_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub student: Option<String>,
    pub initial: String,
    #[serde(default = "default_goal", skip_serializing_if = "is_default_goal")]
    pub goal: String,
    #[serde(default)]
    pub steps: Vec<StepRecord>,
}

impl Attempt {
    pub fn new(task_id: impl Into<String>, initial: impl Into<String>) -> Attempt {
        Attempt {
            task_id: task_id.into(),
            student: None,
            initial: initial.into(),
            goal: default_goal(),
            steps: Vec::new(),
        }
    }

    pub fn apply_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, StepRecord::Apply { .. })).count()
    }

    pub fn undo_count(&self) -> usize {
        self.steps.len() - self.apply_count()
    }

    /// Replays the history and returns the surviving formula stack, the
    /// initial formula at the bottom.
    pub fn replay(&self) -> Result<Vec<Formula>, ReplayError> {
        let initial = parse(&self.initial).map_err(|e| ReplayError::Syntax { step: 0, error: e.to_string() })?;
        let mut stack = vec![initial];
        for (i, record) in self.steps.iter().enumerate() {
            let step = i + 1;
            match record {
                StepRecord::Apply { formula, .. } => {
                    let next = parse(formula).map_err(|e| ReplayError::Syntax { step, error: e.to_string() })?;
                    let top = stack.last().expect("stack keeps the initial formula");
                    match equivalent(top, &next) {
                        Ok(true) => {}
                        Ok(false) => return Err(ReplayError::NotEquivalent { step }),
                        Err(e) => return Err(ReplayError::Syntax { step, error: e.to_string() }),
                    }
                    stack.push(next);
                }
                StepRecord::Undo { .. } => {
                    if stack.len() == 1 {
                        return Err(ReplayError::NothingToUndo { step });
                    }
                    stack.pop();
                }
            }
        }
        Ok(stack)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: {error}")]
    Syntax { step: usize, error: String },
    #[error("step {step}: formula is not equivalent to the previous one")]
    NotEquivalent { step: usize },
    #[error("step {step}: undo without a step to take back")]
    NothingToUndo { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub version: u32,
    #[serde(default)]
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("format error at line {line}, column {column}: {reason}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

/// An attempt rejected during loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttemptFailure {
    /// Position in the document.
    pub index: usize,
    pub task_id: String,
    pub error: ReplayError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadedSolutions {
    pub attempts: Vec<Attempt>,
    pub failures: Vec<AttemptFailure>,
}

pub fn load_solutions(document: &[u8]) -> Result<LoadedSolutions, FormatError> {
    let file: SolutionFile = serde_json::from_slice(document)
        .map_err(|e| FormatError { line: e.line(), column: e.column(), reason: e.to_string() })?;
    if file.version != FORMAT_VERSION {
        return Err(FormatError {
            line: 1,
            column: 1,
            reason: format!("unsupported version {}", file.version),
        });
    }
    let mut loaded = LoadedSolutions::default();
    for (index, attempt) in file.attempts.into_iter().enumerate() {
        match attempt.replay() {
            Ok(_) => loaded.attempts.push(attempt),
            Err(error) => loaded.failures.push(AttemptFailure { index, task_id: attempt.task_id, error }),
        }
    }
    Ok(loaded)
}

pub fn write_solutions(attempts: &[Attempt]) -> Vec<u8> {
    let file = SolutionFile { version: FORMAT_VERSION, attempts: attempts.to_vec() };
    let mut out = serde_json::to_vec_pretty(&file).expect("solution files serialize");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let doc = br#"{"version":1,"attempts":[{"task_id":"t","initial":"X=>Y",
            "steps":[{"op":"apply","formula":"!X|Y"}],"extra":true}],"seed":3}"#;
        let loaded = load_solutions(doc).unwrap();
        assert_eq!(loaded.attempts.len(), 1);
        assert_eq!(loaded.attempts[0].steps, vec![StepRecord::apply("!X|Y")]);
        assert!(loaded.failures.is_empty());
    }

    #[test]
    fn undo_before_apply_fails_validation() {
        let doc = br#"{"version":1,"attempts":[
            {"task_id":"bad","initial":"X","steps":[{"op":"undo"}]},
            {"task_id":"good","initial":"X","steps":[]}]}"#;
        let loaded = load_solutions(doc).unwrap();
        assert_eq!(loaded.attempts.len(), 1);
        assert_eq!(loaded.failures[0].task_id, "bad");
        assert_eq!(loaded.failures[0].error, ReplayError::NothingToUndo { step: 1 });
    }

    #[test]
    fn other_validation_failures() {
        let doc = br#"{"version":1,"attempts":[
            {"task_id":"a","initial":"X","steps":[{"op":"apply","formula":"Y"}]},
            {"task_id":"b","initial":"X&","steps":[]}]}"#;
        let loaded = load_solutions(doc).unwrap();
        assert_eq!(loaded.failures.len(), 2);
        assert_eq!(loaded.failures[0].error, ReplayError::NotEquivalent { step: 1 });
    }

    #[test]
    fn empty_and_malformed_documents() {
        assert!(load_solutions(br#"{"version":1,"attempts":[]}"#).unwrap().attempts.is_empty());
        let err = load_solutions(b"{\"version\":1,\n\"attempts\":[").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(load_solutions(br#"{"version":2,"attempts":[]}"#).is_err());
        assert!(load_solutions(br#"{"version":1,"attempts":[{"initial":"X"}]}"#).is_err());
    }

    #[test]
    fn write_then_load_is_identity() {
        let mut a = Attempt::new("t1", "X=>Y");
        a.student = Some("s".into());
        a.steps = vec![
            StepRecord::apply("!X|Y"),
            StepRecord::Undo { timestamp: Some(17) },
            StepRecord::apply("!(X&!Y)"),
        ];
        let b = Attempt::new("t2", "X");
        let attempts = vec![a, b];
        assert_eq!(load_solutions(&write_solutions(&attempts)).unwrap().attempts, attempts);
    }
}
