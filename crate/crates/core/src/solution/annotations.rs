use std::fmt::Write;

use super::Attempt;
use crate::analyzer::{Annotation, AttemptReport, Stage};
use crate::rules::{lookup, StepKind};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Renders the annotation text file of one attempt.
///
/// ```text
/// task t1  student s1
/// initial !(X=>Y)
/// variables X,Y
///
/// step 1  stage 1  eliminate implications and biconditionals
/// rule 7 negated implication: OK
/// [[!(X=>Y)]]
/// [[X&!Y]]
///
/// summary  completed yes  steps 1  undos 0  errors 0  stage Done
/// ```
pub fn write_annotations(attempt: &Attempt, report: &AttemptReport) -> Vec<u8> {
    let mut out = String::new();
    match &attempt.student {
        Some(s) => writeln!(out, "task {}  student {}", attempt.task_id, s),
        None => writeln!(out, "task {}", attempt.task_id),
    }
    .unwrap();
    writeln!(out, "initial {}", attempt.initial).unwrap();
    let vars: Vec<String> = report.variables.iter().map(char::to_string).collect();
    writeln!(out, "variables {}", vars.join(",")).unwrap();

    for annotation in &report.annotations {
        out.push('\n');
        match annotation {
            Annotation::Undo { index } => writeln!(out, "step {index}  UNDO").unwrap(),
            Annotation::Step { index, verdict, before, after } => {
                out.push_str(&format!("step {index}  stage {}", verdict.stage));
                if let Some(clue) = verdict.clue {
                    out.push_str("  ");
                    out.push_str(clue);
                }
                out.push('\n');
                let mut line = match &verdict.identification.kind {
                    StepKind::RuleStep { rule, double_neg_cleanup, .. } => {
                        let name = lookup(*rule).map_or("", |r| r.name);
                        let cleanup = if *double_neg_cleanup { " + !! removal" } else { "" };
                        format!("rule {rule} {name}{cleanup}")
                    }
                    StepKind::FreeInput { .. } => "free input".to_string(),
                    StepKind::NoChange => "no change".to_string(),
                };
                if verdict.ok {
                    line.push_str(": OK");
                }
                writeln!(out, "{line}").unwrap();
                if let Some(code) = verdict.error {
                    writeln!(out, "ERROR {code}: {}", code.message()).unwrap();
                }
                writeln!(out, "{before}").unwrap();
                writeln!(out, "{after}").unwrap();
            }
        }
    }

    out.push('\n');
    if let Some(reason) = &report.summary.invalid {
        writeln!(out, "invalid {reason}").unwrap();
    }
    let s = &report.summary;
    let stage = match s.stage_reached {
        Stage::Done => "Done".to_string(),
        other => other.to_string(),
    };
    writeln!(
        out,
        "summary  completed {}  steps {}  undos {}  errors {}  stage {}",
        yes_no(s.completed),
        s.steps,
        s.undos,
        s.errors,
        stage
    )
    .unwrap();
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::annotate_attempt;
    use crate::solution::StepRecord;

    fn render(attempt: &Attempt) -> String {
        String::from_utf8(write_annotations(attempt, &annotate_attempt(attempt))).unwrap()
    }

    #[test]
    fn zero_steps() {
        let a = Attempt::new("t0", "X|Y");
        assert_eq!(render(&a), "task t0\ninitial X|Y\nvariables X,Y\n\nsummary  completed no  steps 0  undos 0  errors 0  stage 5\n");
    }

    #[test]
    fn undo_block() {
        let mut a = Attempt::new("t", "X=>Y");
        a.steps = vec![StepRecord::apply("!X|Y"), StepRecord::undo()];
        let text = render(&a);
        assert!(text.contains("\n\nstep 2  UNDO\n\n"), "{text}");
    }

    #[test]
    fn error_line_follows_rule_line() {
        let mut a = Attempt::new("t", "X|Y");
        a.steps = vec![StepRecord::apply("Y|X")];
        let text = render(&a);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[4], "step 1  stage 5");
        assert!(lines[5].starts_with("rule 18 ") && !lines[5].ends_with("OK"));
        assert!(lines[6].starts_with("ERROR E12: "));
    }
}
