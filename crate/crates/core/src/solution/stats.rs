use std::fmt::Write;

use serde::Serialize;

use super::Attempt;
use crate::analyzer::{AttemptSummary, Stage};

/// Column order of the exported table.
pub const TSV_COLUMNS: [&str; 25] = [
    "task", "completed", "steps", "undos", "errors", "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10",
    "E11", "E12", "E13", "E14", "E15", "E16", "E17", "E18", "E19", "stage",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub task: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub student: Option<String>,
    pub completed: bool,
    pub steps: usize,
    pub undos: usize,
    pub errors: usize,
    pub per_code: [usize; 19],
    pub stage: Stage,
}

/// Column sums. `completed` counts completed attempts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StatsTotals {
    pub attempts: usize,
    pub completed: usize,
    pub steps: usize,
    pub undos: usize,
    pub errors: usize,
    pub per_code: [usize; 19],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
    pub totals: StatsTotals,
    /// Mean step count over completed attempts; absent when none completed.
    pub mean_steps_completed: Option<f64>,
}

pub fn aggregate_stats<'a>(entries: impl IntoIterator<Item = (&'a Attempt, &'a AttemptSummary)>) -> StatsTable {
    let mut rows = Vec::new();
    let mut totals = StatsTotals::default();
    let mut completed_steps = 0;
    for (attempt, s) in entries {
        totals.attempts += 1;
        totals.steps += s.steps;
        totals.undos += s.undos;
        totals.errors += s.errors;
        for (t, c) in totals.per_code.iter_mut().zip(s.per_code) {
            *t += c;
        }
        if s.completed {
            totals.completed += 1;
            completed_steps += s.steps;
        }
        rows.push(StatsRow {
            task: attempt.task_id.clone(),
            student: attempt.student.clone(),
            completed: s.completed,
            steps: s.steps,
            undos: s.undos,
            errors: s.errors,
            per_code: s.per_code,
            stage: s.stage_reached,
        });
    }
    let mean_steps_completed = (totals.completed > 0).then(|| completed_steps as f64 / totals.completed as f64);
    StatsTable { rows, totals, mean_steps_completed }
}

fn push_counts(line: &mut String, counts: &[usize; 19]) {
    for c in counts {
        write!(line, "\t{c}").unwrap();
    }
}

/// Tab-separated table: header, one line per attempt, then `TOTAL` and,
/// when some attempt was completed, `AVERAGE` with the mean step count.
pub fn export_tsv(table: &StatsTable) -> Vec<u8> {
    let mut out = TSV_COLUMNS.join("\t");
    out.push('\n');
    if table.rows.is_empty() {
        return out.into_bytes();
    }
    for row in &table.rows {
        let completed = if row.completed { "yes" } else { "no" };
        write!(out, "{}\t{}\t{}\t{}\t{}", row.task, completed, row.steps, row.undos, row.errors).unwrap();
        push_counts(&mut out, &row.per_code);
        writeln!(out, "\t{}", row.stage).unwrap();
    }
    let t = &table.totals;
    write!(out, "TOTAL\t{}/{}\t{}\t{}\t{}", t.completed, t.attempts, t.steps, t.undos, t.errors).unwrap();
    push_counts(&mut out, &t.per_code);
    out.push_str("\t\n");
    if let Some(mean) = table.mean_steps_completed {
        write!(out, "AVERAGE\t\t{mean:.1}").unwrap();
        out.push_str(&"\t".repeat(TSV_COLUMNS.len() - 3));
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(steps: usize, codes: &[(usize, usize)], completed: bool, stage: Stage) -> AttemptSummary {
        let mut per_code = [0; 19];
        for &(code, n) in codes {
            per_code[code - 1] = n;
        }
        AttemptSummary {
            completed,
            steps,
            undos: 0,
            errors: per_code.iter().sum(),
            per_code,
            stage_reached: stage,
            invalid: None,
        }
    }

    #[test]
    fn two_completed_attempts() {
        let a = Attempt::new("a", "X");
        let b = Attempt::new("b", "X");
        let sa = summary(10, &[(4, 1)], true, Stage::Done);
        let sb = summary(20, &[], true, Stage::Done);
        let table = aggregate_stats([(&a, &sa), (&b, &sb)]);
        assert_eq!(table.totals.steps, 30);
        assert_eq!(table.totals.errors, 1);
        assert_eq!(table.mean_steps_completed, Some(15.0));
    }

    #[test]
    fn no_completed_attempts() {
        let a = Attempt::new("a", "X");
        let s = summary(4, &[], false, Stage::Step(3));
        let table = aggregate_stats([(&a, &s)]);
        assert_eq!(table.mean_steps_completed, None);
        let tsv = String::from_utf8(export_tsv(&table)).unwrap();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with("\t3"));
        assert!(lines[2].starts_with("TOTAL\t0/1\t"));
    }

    #[test]
    fn tsv_shape() {
        let empty = aggregate_stats(std::iter::empty());
        assert_eq!(export_tsv(&empty), format!("{}\n", TSV_COLUMNS.join("\t")).into_bytes());

        let a = Attempt::new("a", "X");
        let s = summary(3, &[(19, 2)], true, Stage::Done);
        let tsv = String::from_utf8(export_tsv(&aggregate_stats([(&a, &s)]))).unwrap();
        for line in tsv.lines() {
            assert_eq!(line.split('\t').count(), 25, "{line:?}");
        }
        assert!(tsv.ends_with("AVERAGE\t\t3.0\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\n"));
    }
}
