//! Relevance verdict for a single step.
//!
//! Simplification rules are always accepted. Other rules are accepted when
//! they belong to the stage the whole formula is in, unless one of the
//! finer checks below fires first. The checks form a ladder and the first
//! match decides, so every rejected step carries exactly one error code.

use std::fmt;

use serde::{Serialize, Serializer};

use super::stage::{stage_of, Stage};
use crate::formula::{subformula_at, Formula, Path, VarSet};
use crate::rules::{
    has_complementary, has_duplicate_members, is_sorted_by_variable, lookup, identify_step, IdentifyError, Params,
    RuleTag, StepIdentification, StepKind,
};

/// One of the 19 diagnosed error types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ErrorCode(u8);

impl ErrorCode {
    pub const ALL: [ErrorCode; 19] = {
        let mut all = [ErrorCode(0); 19];
        let mut i = 0;
        while i < 19 {
            all[i] = ErrorCode(i as u8 + 1);
            i += 1;
        }
        all
    };

    pub fn new(number: u8) -> Option<ErrorCode> {
        (1..=19).contains(&number).then_some(ErrorCode(number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn message(self) -> &'static str {
        match self.0 {
            1 => "Biconditional eliminated before its operands (implications and biconditionals duplicated)",
            2 => "Implication or biconditional converted without eliminating it",
            3 => "Implication or biconditional expanded under its negation",
            4 => "Negation moved into brackets at stage 1",
            5 => "Negation moved out of brackets",
            6 => "Inner negation processed first",
            7 => "Distributive law applied too early",
            8 => "Distributive law applied as for CNF",
            9 => "Members reordered too early",
            10 => "Members of FALSE conjunction reordered",
            11 => "Reordering together with redundant members",
            12 => "Members of disjunction reordered (as for CNF)",
            13 => "Variables added too early",
            14 => "Only a part of the missing variables added",
            15 => "Variables added to a conjunction with redundant members",
            16 => "Only a part of conjunction reordered",
            17 => "Conversion does not correspond to the stage of the algorithm",
            18 => "Common member factored out",
            _ => "Step does not change the formula",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.0)
    }
}

impl Serialize for ErrorCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepVerdict {
    /// Stage of the formula before the step.
    pub stage: Stage,
    pub identification: StepIdentification,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorCode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clue: Option<&'static str>,
}

fn has_imp_or_iff(f: &Formula) -> bool {
    f.contains(&|g| matches!(g, Formula::Imp(..) | Formula::Iff(..)))
}

fn node(f: &Formula, steps: &[usize]) -> Option<Formula> {
    subformula_at(f, &Path::new(steps.to_vec())).ok()
}

pub fn check_step(before: &Formula, after: &Formula, vars: &VarSet) -> Result<StepVerdict, IdentifyError> {
    let identification = identify_step(before, after)?;
    let stage = stage_of(before, vars);
    let (error, clue) = match &identification.kind {
        StepKind::NoChange => (Some(19), None),
        StepKind::FreeInput { .. } => (Some(17), None),
        StepKind::RuleStep { rule, path, params, .. } => {
            let after_region = identification.after_region.as_ref().unwrap_or(path);
            judge(*rule, path, params, before, after, after_region, stage, vars)
        }
    };
    let error = error.map(|n| ErrorCode::new(n).expect("ladder emits valid codes"));
    Ok(StepVerdict { stage, identification, ok: error.is_none(), error, clue })
}

/// The decision ladder; returns an error number or an acceptance clue.
#[allow(clippy::too_many_arguments)]
fn judge(
    rule: u8,
    path: &Path,
    params: &Params,
    before: &Formula,
    after: &Formula,
    after_region: &Path,
    stage: Stage,
    vars: &VarSet,
) -> (Option<u8>, Option<&'static str>) {
    let spec = lookup(rule).expect("identified rules exist");
    if spec.is_simplification() {
        return (None, None);
    }
    let part = subformula_at(before, path).expect("identified path is valid");
    let parent = path.parent().and_then(|p| subformula_at(before, &p).ok());
    let below = |k: u8| stage < Stage::Step(k);
    let last = |code: u8| (Some(code), None);

    match rule {
        11 | 12 => return last(5),
        14 => return last(8),
        15 | 16 => return last(18),
        18 => return last(12),
        4 | 20 | 21 | 29 => return last(2),
        _ => {}
    }
    if matches!(rule, 5 | 6) {
        if let Formula::Iff(a, b) = &part {
            if has_imp_or_iff(a) || has_imp_or_iff(b) {
                return last(1);
            }
        }
    }
    if matches!(rule, 3 | 5 | 6) && matches!(parent, Some(Formula::Not(_))) {
        return last(3);
    }
    if matches!(rule, 9 | 10) {
        if stage == Stage::Step(1) {
            return last(4);
        }
        let inside_negation =
            (0..path.steps.len()).any(|d| matches!(node(before, &path.steps[..d]), Some(Formula::Not(_))));
        if inside_negation {
            return last(6);
        }
    }
    if rule == 13 && below(3) {
        return last(7);
    }
    if rule == 17 {
        let ms = part.members().unwrap_or_default();
        if has_complementary(ms) {
            return last(10);
        }
        if has_duplicate_members(ms) {
            return last(11);
        }
        if below(6) {
            return last(9);
        }
        let still_unsorted = match subformula_at(after, &Path::new(after_region.steps.clone())) {
            Ok(Formula::And(ms)) => !is_sorted_by_variable(&ms),
            _ => false,
        };
        if path.is_proper_slice(before) || still_unsorted {
            return last(16);
        }
    }
    if rule == 19 {
        let ms = part.members().map(<[Formula]>::to_vec).unwrap_or_else(|| vec![part.clone()]);
        if has_duplicate_members(&ms) || has_complementary(&ms) {
            return last(15);
        }
        if below(5) {
            return last(13);
        }
        let missing: VarSet = vars.difference(&part.variables()).copied().collect();
        if let Params::Vars(added) = params {
            if added.is_subset(&missing) && added.len() < missing.len() {
                return last(14);
            }
        }
    }
    match spec.tag {
        RuleTag::Stage(k) if stage == Stage::Step(k) => (None, Some(Stage::Step(k).goal())),
        RuleTag::Stage(k) if below(k) => match rule {
            13 => last(7),
            17 => last(9),
            19 => last(13),
            _ => last(17),
        },
        _ => last(17),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn verdict(before: &str, after: &str, vars: &str) -> StepVerdict {
        check_step(&parse(before).unwrap(), &parse(after).unwrap(), &vars.chars().collect()).unwrap()
    }

    fn code(before: &str, after: &str, vars: &str) -> Option<u8> {
        verdict(before, after, vars).error.map(ErrorCode::number)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(code("!((X=>Y)&Z)", "!(X=>Y)|!Z", "XYZ"), Some(4));
        assert_eq!(code("!(!(X&Y)|Z)", "!((!X|!Y)|Z)", "XYZ"), Some(6));
        assert_eq!(code("X&!X&Y", "0", "XY"), None);
        assert_eq!(code("Y&X|Z&W", "X&Y|Z&W", "WXYZ"), Some(9));
        assert_eq!(code("X|Y&Z", "(X&Y|X&!Y)|Y&Z", "XYZ"), Some(14));
    }

    #[test]
    fn accepted_stage_steps_carry_a_clue() {
        let v = verdict("!(X=>Y)", "X&!Y", "XY");
        assert!(v.ok);
        assert_eq!(v.stage, Stage::Step(1));
        assert_eq!(v.clue, Some(Stage::Step(1).goal()));
        let v = verdict("X&X|Y", "X|Y", "XY");
        assert!(v.ok);
        assert_eq!(v.clue, None);
    }

    #[test]
    fn simplification_during_stage_three_is_accepted() {
        let v = verdict("(X|Y)&Z|X&!X", "(X|Y)&Z|0", "XYZ");
        assert_eq!(v.stage, Stage::Step(3));
        assert!(v.ok);
    }

    #[test]
    fn absorption_is_off_path() {
        assert_eq!(code("X|X&Y", "X", "XY"), Some(17));
    }

    #[test]
    fn codes_are_numbered() {
        assert_eq!(ErrorCode::ALL.len(), 19);
        assert_eq!(ErrorCode::ALL[18].to_string(), "E19");
        assert!(ErrorCode::new(0).is_none() && ErrorCode::new(20).is_none());
    }
}
