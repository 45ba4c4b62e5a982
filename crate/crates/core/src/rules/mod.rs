//! The 29-rule conversion menu.
//!
//! Each rule rewrites the marked part of a formula. Chain rules work on the
//! whole marked chain, so marking a slice of a chain applies a rule to a
//! contiguous run of members only.

mod enumerate;
mod identify;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{replace_at_tracked, subformula_at, Formula, FormulaError, Kind, Path, VarSet};

pub use enumerate::{applicable_at, candidate_paths, enumerate_applicable, Applicable, ParamsTemplate};
pub use identify::{identify_step, IdentifyError, StepIdentification, StepKind};

pub const RULE_COUNT: u8 = 29;

/// Rule ids that are permitted at every stage.
pub const SIMPLIFICATION_RULES: [u8; 7] = [1, 2, 23, 24, 25, 26, 28];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleTag {
    Simplification,
    /// The algorithm stage the rule belongs to.
    Stage(u8),
    OffPath,
}

/// Kind of parameter a rule accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    None,
    /// Set of variables to add (rule 19).
    Vars,
    /// Index of the disjunction member to distribute over (rule 13).
    Member,
    /// Explicit member order (rule 18).
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: u8,
    pub name: &'static str,
    pub pattern: &'static str,
    pub tag: RuleTag,
    pub params: ParamKind,
}

impl Rule {
    pub fn is_simplification(&self) -> bool {
        self.tag == RuleTag::Simplification
    }
}

const fn rule(id: u8, name: &'static str, pattern: &'static str, tag: RuleTag, params: ParamKind) -> Rule {
    Rule { id, name, pattern, tag, params }
}

use ParamKind as P;
use RuleTag::{OffPath, Simplification as Simp, Stage};

pub static RULES: [Rule; 29] = [
    rule(1, "double negation", "!!A => A", Simp, P::None),
    rule(2, "remove duplicate members", "A&A => A, A|A => A", Simp, P::None),
    rule(3, "implication as disjunction", "A=>B => !A|B", Stage(1), P::None),
    rule(4, "implication as negated conjunction", "A=>B => !(A&!B)", OffPath, P::None),
    rule(5, "biconditional as implications", "A<=>B => (A=>B)&(B=>A)", Stage(1), P::None),
    rule(6, "biconditional as disjunction", "A<=>B => A&B|!A&!B", Stage(1), P::None),
    rule(7, "negated implication", "!(A=>B) => A&!B", Stage(1), P::None),
    rule(8, "negated biconditional", "!(A<=>B) => A&!B|!A&B", Stage(1), P::None),
    rule(9, "negation into conjunction", "!(A&B) => !A|!B", Stage(2), P::None),
    rule(10, "negation into disjunction", "!(A|B) => !A&!B", Stage(2), P::None),
    rule(11, "negation out of disjunction", "!A|!B => !(A&B)", OffPath, P::None),
    rule(12, "negation out of conjunction", "!A&!B => !(A|B)", OffPath, P::None),
    rule(13, "distribute conjunction over disjunction", "A&(B|C) => A&B|A&C", Stage(3), P::Member),
    rule(14, "distribute disjunction over conjunction", "A|B&C => (A|B)&(A|C)", OffPath, P::None),
    rule(15, "factor out of disjunction", "A&B|A&C => A&(B|C)", OffPath, P::None),
    rule(16, "factor out of conjunction", "(A|B)&(A|C) => A|B&C", OffPath, P::None),
    rule(17, "order conjunction", "sort literals of a conjunction", Stage(6), P::None),
    rule(18, "reorder disjunction", "permute members of a disjunction", OffPath, P::Order),
    rule(19, "add missing variables", "K => K&X|K&!X", Stage(5), P::Vars),
    rule(20, "contraposition", "A=>B => !B=>!A", OffPath, P::None),
    rule(21, "swap biconditional", "A<=>B => B<=>A", OffPath, P::None),
    rule(22, "absorption in disjunction", "A|A&B => A", OffPath, P::None),
    rule(23, "contradictory conjunction", "A&!A => 0", Simp, P::None),
    rule(24, "tautological disjunction", "A|!A => 1", Simp, P::None),
    rule(25, "dominating constant", "A&0 => 0, A|1 => 1", Simp, P::None),
    rule(26, "neutral constant", "A&1 => A, A|0 => A", Simp, P::None),
    rule(27, "absorption in conjunction", "A&(A|B) => A", OffPath, P::None),
    rule(28, "negated constant", "!1 => 0, !0 => 1", Simp, P::None),
    rule(29, "biconditional as conjunction", "A<=>B => (A|!B)&(!A|B)", OffPath, P::None),
];

pub fn lookup(id: u8) -> Option<&'static Rule> {
    RULES.get(usize::from(id).checked_sub(1)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Params {
    #[default]
    None,
    Vars(VarSet),
    Member(usize),
    Order(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule {0}")]
    UnknownRule(u8),
    #[error("rule {rule} is not applicable: {reason}")]
    NotApplicable { rule: u8, reason: String },
    #[error("bad parameters for rule {rule}: {reason}")]
    BadParams { rule: u8, reason: String },
    #[error(transparent)]
    Path(#[from] FormulaError),
}

/// Result of applying a rule: the new formula and the region holding the
/// rewritten part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub formula: Formula,
    pub region: Path,
}

/// Machine-readable view of a rule table entry.
#[derive(Debug, Clone, Serialize)]
pub struct RuleInfo {
    pub id: u8,
    pub name: &'static str,
    pub pattern: &'static str,
    pub tag: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<u8>,
    pub params: ParamKind,
}

pub fn rule_table() -> Vec<RuleInfo> {
    RULES
        .iter()
        .map(|r| RuleInfo {
            id: r.id,
            name: r.name,
            pattern: r.pattern,
            tag: match r.tag {
                RuleTag::Simplification => "simplification",
                RuleTag::Stage(_) => "stage",
                RuleTag::OffPath => "off-path",
            },
            stage: match r.tag {
                RuleTag::Stage(k) => Some(k),
                _ => None,
            },
            params: r.params,
        })
        .collect()
}

pub fn apply_rule(rule: u8, f: &Formula, path: &Path, params: &Params) -> Result<Formula, RuleError> {
    apply_rule_tracked(rule, f, path, params, false).map(|r| r.formula)
}

/// Applies a rule at `path`; with `cleanup` every double negation in the
/// rewritten part is removed before it is put back.
pub fn apply_rule_tracked(
    rule: u8,
    f: &Formula,
    path: &Path,
    params: &Params,
    cleanup: bool,
) -> Result<Rewrite, RuleError> {
    let path = path.normalize(f)?;
    let part = subformula_at(f, &path)?;
    let inside_and = path.slice.is_none()
        && path
            .parent()
            .and_then(|pp| subformula_at(f, &pp).ok())
            .is_some_and(|p| p.kind() == Kind::And);
    let ctx = Context { sliced: path.slice.is_some(), inside_and };
    let mut rewritten = rewrite_part(rule, &part, ctx, params)?;
    if cleanup {
        rewritten = rewritten.without_double_negations();
    }
    let (formula, region) = replace_at_tracked(f, &path, rewritten)?;
    Ok(Rewrite { formula, region })
}

/// Where the marked part sits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Context {
    /// The part is a proper slice of a chain.
    pub sliced: bool,
    /// The part is a member of a conjunction.
    pub inside_and: bool,
}

fn na(rule: u8, reason: &str) -> RuleError {
    RuleError::NotApplicable { rule, reason: reason.into() }
}

fn bad(rule: u8, reason: &str) -> RuleError {
    RuleError::BadParams { rule, reason: reason.into() }
}

/// Stable sort of chain members by their smallest variable; negation does
/// not affect the key.
pub fn sorted_by_variable(members: &[Formula]) -> Vec<Formula> {
    let mut out = members.to_vec();
    out.sort_by_key(Formula::min_var);
    out
}

pub fn is_sorted_by_variable(members: &[Formula]) -> bool {
    members.windows(2).all(|w| w[0].min_var() <= w[1].min_var())
}

fn has_duplicates(members: &[Formula]) -> bool {
    let mut seen = HashSet::new();
    members.iter().any(|m| !seen.insert(m))
}

/// Some member also occurs negated.
pub fn has_complementary(members: &[Formula]) -> bool {
    members.iter().any(|m| match m {
        Formula::Not(inner) => members.contains(inner),
        _ => false,
    })
}

pub fn has_duplicate_members(members: &[Formula]) -> bool {
    has_duplicates(members)
}

/// `small` absorbs `big` when `big` is a chain of kind `kind` containing
/// every conjunct (disjunct) of `small`.
fn absorbs(small: &Formula, big: &Formula, kind: Kind) -> bool {
    if small == big || big.kind() != kind {
        return false;
    }
    let big_ms = big.members().unwrap();
    match small.members() {
        Some(ms) if small.kind() == kind => ms.iter().all(|m| big_ms.contains(m)),
        _ => big_ms.contains(small),
    }
}

fn drop_absorbed(rule: u8, ms: &[Formula], inner: Kind, outer: Kind) -> Result<Formula, RuleError> {
    let strictly = |a: &Formula, b: &Formula| absorbs(a, b, inner) && !absorbs(b, a, inner);
    let kept: Vec<Formula> = ms
        .iter()
        .enumerate()
        .filter(|(j, b)| !ms.iter().enumerate().any(|(i, a)| i != *j && strictly(a, b)))
        .map(|(_, b)| b.clone())
        .collect();
    if kept.len() == ms.len() {
        return Err(na(rule, "no absorbed member"));
    }
    Ok(Formula::chain(outer, kept))
}

fn expect_none(rule: u8, params: &Params) -> Result<(), RuleError> {
    if *params != Params::None {
        return Err(bad(rule, "rule takes no parameters"));
    }
    Ok(())
}

/// Rewrites the marked part itself.
pub fn rewrite_part(rule: u8, part: &Formula, ctx: Context, params: &Params) -> Result<Formula, RuleError> {
    use Formula as F;
    let spec = lookup(rule).ok_or(RuleError::UnknownRule(rule))?;
    match spec.params {
        ParamKind::None => expect_none(rule, params)?,
        ParamKind::Member if !matches!(params, Params::None | Params::Member(_)) => {
            return Err(bad(rule, "expected a member index"))
        }
        ParamKind::Order if !matches!(params, Params::None | Params::Order(_)) => {
            return Err(bad(rule, "expected a member order"))
        }
        ParamKind::Vars if !matches!(params, Params::Vars(_)) => {
            return Err(bad(rule, "expected a set of variables"))
        }
        _ => {}
    }
    let not = F::not;
    match (rule, part) {
        (1, F::Not(c)) => match c.as_ref() {
            F::Not(inner) => Ok(inner.as_ref().clone()),
            _ => Err(na(rule, "not a double negation")),
        },
        (2, F::And(ms) | F::Or(ms)) => {
            if !has_duplicates(ms) {
                return Err(na(rule, "no duplicate members"));
            }
            let mut seen = HashSet::new();
            let unique: Vec<Formula> = ms.iter().filter(|m| seen.insert(*m)).cloned().collect();
            Ok(F::chain(part.kind(), unique))
        }
        (3, F::Imp(a, b)) => Ok(F::or([not(a.as_ref().clone()), b.as_ref().clone()])),
        (4, F::Imp(a, b)) => Ok(not(F::and([a.as_ref().clone(), not(b.as_ref().clone())]))),
        (5, F::Iff(a, b)) => Ok(F::and([
            F::imp(a.as_ref().clone(), b.as_ref().clone()),
            F::imp(b.as_ref().clone(), a.as_ref().clone()),
        ])),
        (6, F::Iff(a, b)) => {
            let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
            Ok(F::or([F::and([a.clone(), b.clone()]), F::and([not(a), not(b)])]))
        }
        (7, F::Not(c)) => match c.as_ref() {
            F::Imp(a, b) => Ok(F::and([a.as_ref().clone(), not(b.as_ref().clone())])),
            _ => Err(na(rule, "not a negated implication")),
        },
        (8, F::Not(c)) => match c.as_ref() {
            F::Iff(a, b) => {
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                Ok(F::or([F::and([a.clone(), not(b.clone())]), F::and([not(a), b])]))
            }
            _ => Err(na(rule, "not a negated biconditional")),
        },
        (9, F::Not(c)) => match c.as_ref() {
            F::And(ms) => Ok(F::or(ms.iter().cloned().map(not))),
            _ => Err(na(rule, "not a negated conjunction")),
        },
        (10, F::Not(c)) => match c.as_ref() {
            F::Or(ms) => Ok(F::and(ms.iter().cloned().map(not))),
            _ => Err(na(rule, "not a negated disjunction")),
        },
        (11, F::Or(ms)) | (12, F::And(ms)) => {
            let inner: Option<Vec<Formula>> = ms
                .iter()
                .map(|m| match m {
                    F::Not(c) => Some(c.as_ref().clone()),
                    _ => None,
                })
                .collect();
            let inner = inner.ok_or_else(|| na(rule, "not every member is negated"))?;
            Ok(not(if rule == 11 { F::and(inner) } else { F::or(inner) }))
        }
        (13, F::And(ms)) => {
            let ors: Vec<usize> = (0..ms.len()).filter(|&i| ms[i].kind() == Kind::Or).collect();
            let &first = ors.first().ok_or_else(|| na(rule, "no disjunction member"))?;
            let at = match params {
                Params::Member(i) if ors.contains(i) => *i,
                Params::Member(_) => return Err(bad(rule, "member is not a disjunction")),
                _ => first,
            };
            let disjuncts = ms[at].members().unwrap().iter().map(|b| {
                F::and(ms[..at].iter().chain(std::iter::once(b)).chain(&ms[at + 1..]).cloned())
            });
            Ok(F::or(disjuncts.collect::<Vec<_>>()))
        }
        (14, F::Or(ms)) => {
            let at = ms
                .iter()
                .position(|m| m.kind() == Kind::And)
                .ok_or_else(|| na(rule, "no conjunction member"))?;
            let conjuncts = ms[at].members().unwrap().iter().map(|c| {
                F::or(ms[..at].iter().chain(std::iter::once(c)).chain(&ms[at + 1..]).cloned())
            });
            Ok(F::and(conjuncts.collect::<Vec<_>>()))
        }
        (15, F::Or(ms)) | (16, F::And(ms)) => {
            let inner = if rule == 15 { Kind::And } else { Kind::Or };
            let first = ms[0].members().filter(|_| ms[0].kind() == inner).map(|m| &m[0]);
            let common = first.ok_or_else(|| na(rule, "members do not share a first factor"))?;
            let mut rests = Vec::new();
            for m in ms {
                match m.members() {
                    Some(sub) if m.kind() == inner && &sub[0] == common => {
                        rests.push(F::chain(inner, sub[1..].iter().cloned()))
                    }
                    _ => return Err(na(rule, "members do not share a first factor")),
                }
            }
            let outer = part.kind();
            Ok(F::chain(inner, [common.clone(), F::chain(outer, rests)]))
        }
        (17, F::And(ms)) => Ok(F::And(sorted_by_variable(ms))),
        (18, F::Or(ms)) => match params {
            Params::Order(order) => {
                let mut check = order.clone();
                check.sort_unstable();
                if check != (0..ms.len()).collect::<Vec<_>>() {
                    return Err(bad(rule, "order is not a permutation of the members"));
                }
                Ok(F::Or(order.iter().map(|&i| ms[i].clone()).collect()))
            }
            _ => Ok(F::Or(sorted_by_variable(ms))),
        },
        (19, k) => {
            let Params::Vars(add) = params else { unreachable!("checked above") };
            let literals: Vec<Formula> = match k {
                F::And(ms) if ms.iter().all(Formula::is_literal) => ms.clone(),
                lit if lit.is_literal() => vec![lit.clone()],
                _ => return Err(na(rule, "not a conjunction of literals")),
            };
            if ctx.sliced {
                return Err(na(rule, "part of a conjunction is marked"));
            }
            if ctx.inside_and {
                return Err(na(rule, "the conjunction is a member of a larger conjunction"));
            }
            if add.is_empty() {
                return Err(bad(rule, "no variables to add"));
            }
            let present = k.variables();
            if let Some(v) = add.intersection(&present).next() {
                return Err(bad(rule, &format!("variable {v} already occurs in the conjunction")));
            }
            let added: Vec<char> = add.iter().copied().collect();
            let n = added.len();
            let disjuncts = (0..1u32 << n).map(|pattern| {
                let extra = added.iter().enumerate().map(|(i, &v)| {
                    if pattern >> (n - 1 - i) & 1 == 0 {
                        F::Var(v)
                    } else {
                        not(F::Var(v))
                    }
                });
                F::and(literals.iter().cloned().chain(extra))
            });
            Ok(F::or(disjuncts.collect::<Vec<_>>()))
        }
        (20, F::Imp(a, b)) => Ok(F::imp(not(b.as_ref().clone()), not(a.as_ref().clone()))),
        (21, F::Iff(a, b)) => Ok(F::iff(b.as_ref().clone(), a.as_ref().clone())),
        (22, F::Or(ms)) => drop_absorbed(rule, ms, Kind::And, Kind::Or),
        (27, F::And(ms)) => drop_absorbed(rule, ms, Kind::Or, Kind::And),
        (23, F::And(ms)) | (24, F::Or(ms)) => {
            if !has_complementary(ms) {
                return Err(na(rule, "no complementary members"));
            }
            Ok(F::Const(rule == 24))
        }
        (25, F::And(ms)) | (25, F::Or(ms)) => {
            let dominant = part.kind() == Kind::Or;
            if !ms.contains(&F::Const(dominant)) {
                return Err(na(rule, "no dominating constant"));
            }
            Ok(F::Const(dominant))
        }
        (26, F::And(ms)) | (26, F::Or(ms)) => {
            let neutral = F::Const(part.kind() == Kind::And);
            if !ms.contains(&neutral) {
                return Err(na(rule, "no neutral constant"));
            }
            Ok(F::chain(part.kind(), ms.iter().filter(|m| **m != neutral).cloned()))
        }
        (28, F::Not(c)) => match c.as_ref() {
            F::Const(b) => Ok(F::Const(!b)),
            _ => Err(na(rule, "not a negated constant")),
        },
        (29, F::Iff(a, b)) => {
            let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
            Ok(F::and([F::or([a.clone(), not(b.clone())]), F::or([not(a), b])]))
        }
        _ => Err(na(rule, &format!("marked part does not match {}", spec.pattern))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn apply(rule: u8, f: &str, path: Path, params: Params) -> Result<String, RuleError> {
        apply_rule(rule, &p(f), &path, &params).map(|f| f.to_string())
    }

    fn vars(s: &str) -> Params {
        Params::Vars(s.chars().collect())
    }

    #[test]
    fn table_is_consistent() {
        for (i, r) in RULES.iter().enumerate() {
            assert_eq!(usize::from(r.id), i + 1);
        }
        let simp: Vec<u8> = RULES.iter().filter(|r| r.is_simplification()).map(|r| r.id).collect();
        assert_eq!(simp, SIMPLIFICATION_RULES);
        assert!(lookup(0).is_none() && lookup(30).is_none());
        assert_eq!(rule_table().len(), 29);
    }

    #[test]
    fn documented_examples() {
        assert_eq!(apply(9, "!(X&Y)|Z", Path::new([0]), Params::None).unwrap(), "!X|!Y|Z");
        assert_eq!(apply(13, "Z&(X|Y)", Path::root(), Params::None).unwrap(), "Z&X|Z&Y");
        assert_eq!(apply(19, "X", Path::root(), vars("Y")).unwrap(), "X&Y|X&!Y");
        assert_eq!(apply(23, "X&!X&Y", Path::root(), Params::None).unwrap(), "0");
    }

    #[test]
    fn each_rule_rewrites_its_pattern() {
        let cases: &[(u8, &str, &str)] = &[
            (1, "!!X", "X"),
            (2, "X|Y|X", "X|Y"),
            (2, "X&X", "X"),
            (3, "X=>Y", "!X|Y"),
            (3, "X=>Y|Z", "!X|Y|Z"),
            (4, "X=>Y", "!(X&!Y)"),
            (5, "X<=>Y", "(X=>Y)&(Y=>X)"),
            (6, "X<=>Y", "X&Y|!X&!Y"),
            (7, "!(X=>Y)", "X&!Y"),
            (8, "!(X<=>Y)", "X&!Y|!X&Y"),
            (9, "!(X&Y&Z)", "!X|!Y|!Z"),
            (10, "!(X|Y)", "!X&!Y"),
            (11, "!X|!Y", "!(X&Y)"),
            (12, "!X&!Y", "!(X|Y)"),
            (13, "X&(Y|Z)&W", "X&Y&W|X&Z&W"),
            (14, "X|Y&Z", "(X|Y)&(X|Z)"),
            (15, "X&Y|X&Z", "X&(Y|Z)"),
            (16, "(X|Y)&(X|Z)", "X|Y&Z"),
            (17, "Y&!X&Z", "!X&Y&Z"),
            (18, "Y|X", "X|Y"),
            (20, "X=>Y", "!Y=>!X"),
            (21, "X<=>Y", "Y<=>X"),
            (22, "X|X&Y", "X"),
            (22, "X&Y|Z|X&Y&W", "X&Y|Z"),
            (24, "X|!X", "1"),
            (25, "X&0", "0"),
            (25, "X|1", "1"),
            (26, "X&1", "X"),
            (26, "X|0|Y", "X|Y"),
            (26, "0|0", "0"),
            (27, "X&(X|Y)", "X"),
            (28, "!1", "0"),
            (28, "!0", "1"),
            (29, "X<=>Y", "(X|!Y)&(!X|Y)"),
        ];
        for &(rule, before, after) in cases {
            assert_eq!(apply(rule, before, Path::root(), Params::None).unwrap(), after, "rule {rule}");
        }
    }

    #[test]
    fn parameterised_rules() {
        assert_eq!(apply(13, "(X|Y)&(Z|W)", Path::root(), Params::Member(1)).unwrap(), "(X|Y)&Z|(X|Y)&W");
        assert!(matches!(
            apply(13, "(X|Y)&Z", Path::root(), Params::Member(1)),
            Err(RuleError::BadParams { .. })
        ));
        assert_eq!(apply(18, "X|Y", Path::root(), Params::Order(vec![1, 0])).unwrap(), "Y|X");
        assert!(apply(18, "X|Y", Path::root(), Params::Order(vec![0, 0])).is_err());
        assert_eq!(
            apply(19, "X|Y&Z", Path::new([0]), vars("YZ")).unwrap(),
            "X&Y&Z|X&Y&!Z|X&!Y&Z|X&!Y&!Z|Y&Z"
        );
        assert!(matches!(apply(19, "X&Y", Path::root(), vars("X")), Err(RuleError::BadParams { .. })));
        assert!(matches!(apply(19, "X", Path::root(), Params::None), Err(RuleError::BadParams { .. })));
        assert!(matches!(apply(19, "X&Y", Path::new([0]), vars("Z")), Err(RuleError::NotApplicable { .. })));
        assert!(matches!(apply(3, "X=>Y", Path::root(), vars("Z")), Err(RuleError::BadParams { .. })));
    }

    #[test]
    fn slices_rewrite_part_of_a_chain() {
        assert_eq!(apply(17, "Z&Y&X", Path::sliced([], 0, 2), Params::None).unwrap(), "Y&Z&X");
        assert_eq!(apply(11, "!X|!Y|Z", Path::sliced([], 0, 2), Params::None).unwrap(), "!(X&Y)|Z");
        assert_eq!(apply(23, "Y&X&!X", Path::sliced([], 1, 2), Params::None).unwrap(), "Y&0");
    }

    #[test]
    fn inapplicable_rules_are_rejected() {
        assert!(matches!(apply(9, "X&Y", Path::root(), Params::None), Err(RuleError::NotApplicable { .. })));
        assert!(matches!(apply(1, "!X", Path::root(), Params::None), Err(RuleError::NotApplicable { .. })));
        assert!(matches!(apply(2, "X|Y", Path::root(), Params::None), Err(RuleError::NotApplicable { .. })));
        assert!(matches!(apply(22, "X&Y|Y&X", Path::root(), Params::None), Err(RuleError::NotApplicable { .. })));
        assert!(matches!(apply(9, "X|Y", Path::new([4]), Params::None), Err(RuleError::Path(_))));
        assert!(matches!(apply(30, "X", Path::root(), Params::None), Err(RuleError::UnknownRule(30))));
    }

    #[test]
    fn ordering_rules_accept_sorted_chains() {
        assert_eq!(apply(17, "X&Y", Path::root(), Params::None).unwrap(), "X&Y");
        assert_eq!(apply(17, "Y&X&!Y", Path::root(), Params::None).unwrap(), "X&Y&!Y");
    }
}
