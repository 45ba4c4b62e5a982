//! Propositional formulas with flattened n-ary conjunction and disjunction.
//!
//! A [`Formula`] built through the constructors in this module always keeps
//! the flattening invariant: an `And` never has an `And` member, an `Or`
//! never has an `Or` member, and both have at least two members.

mod eval;
mod parse;
mod path;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use eval::{canonical_fdnf, equivalent, evaluate, truth_table, Assignment, MAX_VARIABLES};
pub use parse::{parse, SyntaxError};
pub use path::{replace_at, replace_at_tracked, subformula_at, Path};
pub use print::{print, print_marked, spans, Span};

/// Ordered set of variable names.
pub type VarSet = BTreeSet<char>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("invalid path {path}: {reason}")]
    InvalidPath { path: String, reason: String },
    #[error("no value for variable {0}")]
    MissingVariable(char),
    #[error("too many variables: {count} (limit {limit})")]
    TooManyVariables { count: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(char),
    Const(bool),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

/// Node kind without payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Var,
    Const,
    Not,
    And,
    Or,
    Imp,
    Iff,
}

impl Formula {
    pub fn var(name: char) -> Formula {
        Formula::Var(name)
    }

    pub fn constant(bit: bool) -> Formula {
        Formula::Const(bit)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Formula) -> Formula {
        Formula::Not(Box::new(child))
    }

    /// Builds a conjunction, splicing nested conjunctions. An empty member
    /// list yields `1`, a single member is returned as is.
    pub fn and(members: impl IntoIterator<Item = Formula>) -> Formula {
        Self::chain(Kind::And, members)
    }

    /// Builds a disjunction, splicing nested disjunctions. An empty member
    /// list yields `0`, a single member is returned as is.
    pub fn or(members: impl IntoIterator<Item = Formula>) -> Formula {
        Self::chain(Kind::Or, members)
    }

    pub fn imp(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Imp(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Builds an `And` or `Or` chain of the given kind.
    pub(crate) fn chain(kind: Kind, members: impl IntoIterator<Item = Formula>) -> Formula {
        let mut flat = Vec::new();
        for m in members {
            match m {
                Formula::And(inner) if kind == Kind::And => flat.extend(inner),
                Formula::Or(inner) if kind == Kind::Or => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::Const(kind == Kind::And),
            1 => flat.pop().unwrap(),
            _ if kind == Kind::And => Formula::And(flat),
            _ => Formula::Or(flat),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Formula::Var(_) => Kind::Var,
            Formula::Const(_) => Kind::Const,
            Formula::Not(_) => Kind::Not,
            Formula::And(_) => Kind::And,
            Formula::Or(_) => Kind::Or,
            Formula::Imp(..) => Kind::Imp,
            Formula::Iff(..) => Kind::Iff,
        }
    }

    /// Direct children in index order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Const(_) => Vec::new(),
            Formula::Not(c) => vec![c],
            Formula::And(ms) | Formula::Or(ms) => ms.iter().collect(),
            Formula::Imp(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    pub fn child(&self, index: usize) -> Option<&Formula> {
        match self {
            Formula::Not(c) if index == 0 => Some(c),
            Formula::And(ms) | Formula::Or(ms) => ms.get(index),
            Formula::Imp(a, _) | Formula::Iff(a, _) if index == 0 => Some(a),
            Formula::Imp(_, b) | Formula::Iff(_, b) if index == 1 => Some(b),
            _ => None,
        }
    }

    /// Members of an `And`/`Or` chain.
    pub fn members(&self) -> Option<&[Formula]> {
        match self {
            Formula::And(ms) | Formula::Or(ms) => Some(ms),
            _ => None,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self, Formula::And(_) | Formula::Or(_))
    }

    /// Variables and constants.
    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Const(_))
    }

    /// A variable or a negated variable.
    pub fn is_literal(&self) -> bool {
        self.literal().is_some()
    }

    /// `(variable, positive)` for a literal.
    pub fn literal(&self) -> Option<(char, bool)> {
        match self {
            Formula::Var(v) => Some((*v, true)),
            Formula::Not(c) => match c.as_ref() {
                Formula::Var(v) => Some((*v, false)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn contains(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().iter().any(|c| c.contains(pred))
    }

    pub fn variables(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        if let Formula::Var(v) = self {
            out.insert(*v);
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Smallest variable occurring in the formula.
    pub fn min_var(&self) -> Option<char> {
        match self {
            Formula::Var(v) => Some(*v),
            _ => self.children().iter().filter_map(|c| c.min_var()).min(),
        }
    }

    /// Rebuilds the formula bottom-up through the flattening constructors.
    pub fn normalized(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Const(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.normalized()),
            Formula::And(ms) => Formula::and(ms.iter().map(Formula::normalized)),
            Formula::Or(ms) => Formula::or(ms.iter().map(Formula::normalized)),
            Formula::Imp(a, b) => Formula::imp(a.normalized(), b.normalized()),
            Formula::Iff(a, b) => Formula::iff(a.normalized(), b.normalized()),
        }
    }

    /// True when no chain has a member of its own kind or fewer than two members.
    pub fn is_flat(&self) -> bool {
        let ok_here = match self {
            Formula::And(ms) => ms.len() >= 2 && ms.iter().all(|m| m.kind() != Kind::And),
            Formula::Or(ms) => ms.len() >= 2 && ms.iter().all(|m| m.kind() != Kind::Or),
            _ => true,
        };
        ok_here && self.children().iter().all(|c| c.is_flat())
    }

    /// Removes every `!!` pair, innermost structure included.
    pub fn without_double_negations(&self) -> Formula {
        match self {
            Formula::Not(c) => match c.as_ref() {
                Formula::Not(inner) => inner.without_double_negations(),
                other => Formula::not(other.without_double_negations()),
            },
            Formula::Var(_) | Formula::Const(_) => self.clone(),
            Formula::And(ms) => Formula::and(ms.iter().map(Formula::without_double_negations)),
            Formula::Or(ms) => Formula::or(ms.iter().map(Formula::without_double_negations)),
            Formula::Imp(a, b) => {
                Formula::imp(a.without_double_negations(), b.without_double_negations())
            }
            Formula::Iff(a, b) => {
                Formula::iff(a.without_double_negations(), b.without_double_negations())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Formulas serialize as their printed text.
impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn variables_are_sorted_and_distinct() {
        assert_eq!(p("!(Y&X)|X").variables(), VarSet::from(['X', 'Y']));
        assert!(p("0").variables().is_empty());
        assert_eq!(p("Z=>(A<=>Z)").variables(), VarSet::from(['A', 'Z']));
    }

    #[test]
    fn chain_constructor_flattens_and_collapses() {
        let f = Formula::and([p("X&Y"), p("Z")]);
        assert_eq!(f, Formula::And(vec![p("X"), p("Y"), p("Z")]));
        assert_eq!(Formula::or([p("X")]), p("X"));
        assert_eq!(Formula::or(Vec::new()), Formula::Const(false));
        assert_eq!(Formula::and(Vec::new()), Formula::Const(true));
    }

    #[test]
    fn double_negation_removal() {
        assert_eq!(p("!!!X").without_double_negations(), p("!X"));
        assert_eq!(p("!!(!!X&Y)|Z").without_double_negations(), p("X&Y|Z"));
        assert_eq!(p("!(!!X=>Y)").without_double_negations(), p("!(X=>Y)"));
    }
}
