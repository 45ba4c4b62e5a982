use std::time::{SystemTime, UNIX_EPOCH};

use fdnf_core::analyzer::{check_step, is_completed, stage_of, Stage, StepVerdict};
use fdnf_core::formula::{
    equivalent, parse, print, print_marked, replace_at, spans, subformula_at, Formula, FormulaError, Path, Span,
    SyntaxError, VarSet,
};
use fdnf_core::rules::{apply_rule, applicable_at, Applicable, Params, RuleError};
use fdnf_core::solution::{Attempt, StepRecord};
use fdnf_core::taskgen::{generate_tasks, TaskSpec, TaskSpecError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest task accepted for interactive solving.
pub const MAX_SESSION_VARIABLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    /// The student picks a rule from the menu.
    Rule,
    /// The student types the replacement of the marked part.
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Marking,
    Replacing,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("task has {count} variables, at most {MAX_SESSION_VARIABLES} are allowed")]
    TooManyVariables { count: usize },
    #[error(transparent)]
    TaskSpec(#[from] TaskSpecError),
    #[error("not a subformula: {0}")]
    InvalidPath(String),
    #[error("{0}")]
    NotApplicable(String),
    #[error("the entered formula is not equivalent to the marked part")]
    NotEquivalent,
    #[error("operation not available in {0:?} mode")]
    WrongMode(Mode),
    #[error("no part of the formula is marked")]
    NoMark,
    #[error("no step to take back")]
    NothingToUndo,
    #[error("the task is already solved")]
    Finished,
}

impl SessionError {
    /// Stable identifier reported to clients.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::Syntax(_) => "SyntaxError",
            SessionError::TooManyVariables { .. } => "TooManyVariables",
            SessionError::TaskSpec(_) => "InvalidTaskSpec",
            SessionError::InvalidPath(_) => "InvalidPath",
            SessionError::NotApplicable(_) => "NotApplicable",
            SessionError::NotEquivalent => "NotEquivalent",
            SessionError::WrongMode(_) => "WrongMode",
            SessionError::NoMark => "NoMark",
            SessionError::NothingToUndo => "NothingToUndo",
            SessionError::Finished => "Finished",
        }
    }
}

impl From<FormulaError> for SessionError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::Syntax(s) => SessionError::Syntax(s),
            FormulaError::TooManyVariables { count, .. } => SessionError::TooManyVariables { count },
            other => SessionError::InvalidPath(other.to_string()),
        }
    }
}

/// Where the task comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TaskSource {
    Formula { formula: String },
    Generated { spec: TaskSpec },
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryEntry {
    pub record: StepRecord,
    /// Verdict of an apply record, present when live feedback is on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<StepVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionState {
    pub id: String,
    pub task_id: String,
    pub mode: Mode,
    pub live_feedback: bool,
    pub phase: Phase,
    pub initial: String,
    pub variables: VarSet,
    pub formula: String,
    pub spans: Vec<Span>,
    pub stage: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked: Option<Path>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked_text: Option<String>,
    pub history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepOutcome {
    pub state: SessionState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<StepVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkOutcome {
    pub state: SessionState,
    pub applicable: Vec<Applicable>,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    task_id: String,
    student: Option<String>,
    mode: Mode,
    live_feedback: bool,
    initial: Formula,
    vars: VarSet,
    /// Formulas surviving the undo steps, the initial one at the bottom.
    stack: Vec<Formula>,
    history: Vec<StepRecord>,
    /// Verdict of every apply record, parallel to `history`.
    verdicts: Vec<Option<StepVerdict>>,
    marked: Option<Path>,
    phase: Phase,
}

fn now() -> Option<u64> {
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

impl Session {
    pub fn new(id: impl Into<String>, source: &TaskSource, mode: Mode, live_feedback: bool) -> Result<Session, SessionError> {
        let id = id.into();
        let (task_id, initial) = match source {
            TaskSource::Formula { formula } => (id.clone(), parse(formula)?),
            TaskSource::Generated { spec } => {
                let spec = TaskSpec { count: 1, ..spec.clone() };
                let f = generate_tasks(&spec)?.remove(0);
                (format!("gen-{}", spec.seed), f)
            }
        };
        let vars = initial.variables();
        if vars.len() > MAX_SESSION_VARIABLES {
            return Err(SessionError::TooManyVariables { count: vars.len() });
        }
        let mut session = Session {
            id,
            task_id,
            student: None,
            mode,
            live_feedback,
            initial: initial.clone(),
            vars,
            stack: vec![initial],
            history: Vec::new(),
            verdicts: Vec::new(),
            marked: None,
            phase: Phase::Marking,
        };
        session.update_phase();
        Ok(session)
    }

    pub fn with_task(mut self, task_id: Option<String>, student: Option<String>) -> Session {
        if let Some(t) = task_id {
            self.task_id = t;
        }
        self.student = student;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn current(&self) -> &Formula {
        self.stack.last().expect("initial formula stays on the stack")
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn marked(&self) -> Option<&Path> {
        self.marked.as_ref()
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    /// Verdicts of the apply records in history order.
    pub fn verdicts(&self) -> impl Iterator<Item = &StepVerdict> {
        self.verdicts.iter().flatten()
    }

    fn update_phase(&mut self) {
        let done = is_completed(&self.initial, self.current(), &self.vars).unwrap_or(false);
        self.phase = if done {
            Phase::Finished
        } else if self.marked.is_some() {
            Phase::Replacing
        } else {
            Phase::Marking
        };
    }

    pub fn state(&self) -> SessionState {
        let current = self.current();
        SessionState {
            id: self.id.clone(),
            task_id: self.task_id.clone(),
            mode: self.mode,
            live_feedback: self.live_feedback,
            phase: self.phase,
            initial: print(&self.initial),
            variables: self.vars.clone(),
            formula: print(current),
            spans: spans(current),
            stage: stage_of(current, &self.vars),
            marked: self.marked.clone(),
            marked_text: self.marked.as_ref().map(|p| print_marked(current, p)),
            history: self
                .history
                .iter()
                .zip(&self.verdicts)
                .map(|(record, verdict)| HistoryEntry {
                    record: record.clone(),
                    verdict: verdict.clone().filter(|_| self.live_feedback),
                })
                .collect(),
        }
    }

    /// Marks a part of the current formula. Marking again replaces the mark.
    pub fn mark(&mut self, path: &Path) -> Result<MarkOutcome, SessionError> {
        if self.phase == Phase::Finished {
            return Err(SessionError::Finished);
        }
        let current = self.current();
        let path = path.normalize(current).map_err(|e| SessionError::InvalidPath(e.to_string()))?;
        subformula_at(current, &path).map_err(|e| SessionError::InvalidPath(e.to_string()))?;
        let applicable = match self.mode {
            Mode::Rule => applicable_at(current, &path, &self.vars),
            Mode::Input => Vec::new(),
        };
        self.marked = Some(path);
        self.update_phase();
        Ok(MarkOutcome { state: self.state(), applicable })
    }

    fn marked_for(&self, mode: Mode) -> Result<&Path, SessionError> {
        if self.phase == Phase::Finished {
            return Err(SessionError::Finished);
        }
        if self.mode != mode {
            return Err(SessionError::WrongMode(self.mode));
        }
        self.marked.as_ref().ok_or(SessionError::NoMark)
    }

    pub fn apply(&mut self, rule: u8, params: &Params) -> Result<StepOutcome, SessionError> {
        let path = self.marked_for(Mode::Rule)?;
        let next = apply_rule(rule, self.current(), path, params).map_err(|e| match e {
            RuleError::Path(f) => SessionError::InvalidPath(f.to_string()),
            other => SessionError::NotApplicable(other.to_string()),
        })?;
        Ok(self.record(next))
    }

    pub fn input(&mut self, replacement: &str) -> Result<StepOutcome, SessionError> {
        let path = self.marked_for(Mode::Input)?.clone();
        let part = parse(replacement)?;
        let next = replace_at(self.current(), &path, part)?;
        if !equivalent(self.current(), &next)? {
            return Err(SessionError::NotEquivalent);
        }
        Ok(self.record(next))
    }

    fn record(&mut self, next: Formula) -> StepOutcome {
        let verdict = check_step(self.current(), &next, &self.vars).ok();
        self.history.push(StepRecord::Apply { formula: print(&next), timestamp: now() });
        self.verdicts.push(verdict.clone());
        self.stack.push(next);
        self.marked = None;
        self.update_phase();
        StepOutcome { state: self.state(), verdict: verdict.filter(|_| self.live_feedback) }
    }

    pub fn undo(&mut self) -> Result<SessionState, SessionError> {
        if self.stack.len() < 2 {
            return Err(SessionError::NothingToUndo);
        }
        self.stack.pop();
        self.history.push(StepRecord::Undo { timestamp: now() });
        self.verdicts.push(None);
        self.marked = None;
        self.update_phase();
        Ok(self.state())
    }

    pub fn export(&self) -> Attempt {
        Attempt {
            task_id: self.task_id.clone(),
            student: self.student.clone(),
            initial: print(&self.initial),
            goal: "FDNF".into(),
            steps: self.history.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(f: &str, mode: Mode) -> Session {
        Session::new("s", &TaskSource::Formula { formula: f.into() }, mode, true).unwrap()
    }

    #[test]
    fn create() {
        let s = session("X=>Y", Mode::Rule);
        let st = s.state();
        assert_eq!(st.formula, "X=>Y");
        assert_eq!(st.stage, Stage::Step(1));
        assert_eq!(st.phase, Phase::Marking);
        let err = Session::new("s", &TaskSource::Formula { formula: "X&&".into() }, Mode::Rule, true).unwrap_err();
        assert_eq!(err.code(), "SyntaxError");
        let nine = "A&B&C&D&E&F&G&H&I";
        let err = Session::new("s", &TaskSource::Formula { formula: nine.into() }, Mode::Rule, true).unwrap_err();
        assert_eq!(err.code(), "TooManyVariables");
    }

    #[test]
    fn rule_step() {
        let mut s = session("!(X&Y)|Z", Mode::Rule);
        let marked = s.mark(&Path::new([0])).unwrap();
        assert!(marked.applicable.iter().any(|a| a.rule == 9));
        assert_eq!(s.phase(), Phase::Replacing);
        let out = s.apply(9, &Params::None).unwrap();
        assert_eq!(out.state.formula, "!X|!Y|Z");
        let v = out.verdict.unwrap();
        assert!(v.ok);
        assert_eq!(v.stage, Stage::Step(2));
        assert_eq!(s.phase(), Phase::Marking);
    }

    #[test]
    fn mark_reports_applicable_rules() {
        let mut s = session("!X&Y|Z", Mode::Rule);
        let rules: Vec<u8> = s.mark(&Path::new([0])).unwrap().applicable.iter().map(|a| a.rule).collect();
        assert!(rules.contains(&17) && !rules.contains(&9));
        assert_eq!(s.mark(&Path::new([5])).unwrap_err().code(), "InvalidPath");
        assert_eq!(s.marked(), Some(&Path::new([0])));
        assert!(s.mark(&Path::root()).is_ok());
    }

    #[test]
    fn correctness_failures_leave_no_history() {
        let mut s = session("X=>Y", Mode::Input);
        s.mark(&Path::root()).unwrap();
        assert_eq!(s.input("X|Y").unwrap_err(), SessionError::NotEquivalent);
        assert_eq!(s.input("X|").unwrap_err().code(), "SyntaxError");
        assert!(s.history().is_empty());
        assert_eq!(s.state().formula, "X=>Y");

        let mut s = session("X&Y|Z", Mode::Rule);
        s.mark(&Path::new([0])).unwrap();
        assert_eq!(s.apply(9, &Params::None).unwrap_err().code(), "NotApplicable");
        assert_eq!(s.input("Y&X").unwrap_err().code(), "WrongMode");
        assert!(s.history().is_empty());
    }

    #[test]
    fn relevance_errors_are_recorded() {
        let mut s = session("X|Y", Mode::Input);
        s.mark(&Path::root()).unwrap();
        let out = s.input("Y|X").unwrap();
        assert_eq!(out.verdict.unwrap().error.map(|c| c.number()), Some(12));
        assert_eq!(s.history().len(), 1);
    }

    #[test]
    fn undo() {
        let mut s = session("!(X=>Y)|Z", Mode::Rule);
        assert_eq!(s.undo().unwrap_err(), SessionError::NothingToUndo);
        s.mark(&Path::new([0])).unwrap();
        s.apply(7, &Params::None).unwrap();
        let after_one = s.state().formula;
        s.mark(&Path::root()).unwrap();
        s.apply(18, &Params::None).unwrap();
        assert_eq!(s.undo().unwrap().formula, after_one);
        assert_eq!(s.undo().unwrap().formula, "!(X=>Y)|Z");
        assert_eq!(s.export().steps.len(), 4);
    }

    #[test]
    fn finishing() {
        let mut s = session("!(X=>Y)", Mode::Rule);
        s.mark(&Path::root()).unwrap();
        s.apply(7, &Params::None).unwrap();
        assert_eq!(s.phase(), Phase::Finished);
        assert_eq!(s.mark(&Path::root()).unwrap_err(), SessionError::Finished);
        s.undo().unwrap();
        assert_eq!(s.phase(), Phase::Marking);
    }

    #[test]
    fn generated_task() {
        let spec = TaskSpec { seed: 7, ..TaskSpec::default() };
        let s = Session::new("g", &TaskSource::Generated { spec: spec.clone() }, Mode::Rule, false).unwrap();
        assert_eq!(s.current(), &generate_tasks(&spec).unwrap()[0]);
    }
}
