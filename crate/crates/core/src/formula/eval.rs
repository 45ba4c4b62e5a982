use std::collections::BTreeMap;

use super::{Formula, FormulaError, VarSet};

/// Largest variable count accepted by truth-table operations.
pub const MAX_VARIABLES: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<char, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: char, bit: bool) -> &mut Self {
        self.0.insert(var, bit);
        self
    }

    pub fn get(&self, var: char) -> Option<bool> {
        self.0.get(&var).copied()
    }
}

impl<const N: usize> From<[(char, bool); N]> for Assignment {
    fn from(pairs: [(char, bool); N]) -> Self {
        Assignment(pairs.into_iter().collect())
    }
}

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, FormulaError> {
    Ok(match f {
        Formula::Var(v) => a.get(*v).ok_or(FormulaError::MissingVariable(*v))?,
        Formula::Const(b) => *b,
        Formula::Not(c) => !evaluate(c, a)?,
        Formula::And(ms) => {
            let mut all = true;
            for m in ms {
                all &= evaluate(m, a)?;
            }
            all
        }
        Formula::Or(ms) => {
            let mut any = false;
            for m in ms {
                any |= evaluate(m, a)?;
            }
            any
        }
        Formula::Imp(x, y) => !evaluate(x, a)? || evaluate(y, a)?,
        Formula::Iff(x, y) => evaluate(x, a)? == evaluate(y, a)?,
    })
}

/// Evaluation against a packed assignment: `slots[v]` is the bit index of
/// variable `v`, with the first variable of the universe as the most
/// significant bit.
fn eval_packed(f: &Formula, slots: &[u8; 26], bits: u32) -> bool {
    match f {
        Formula::Var(v) => bits >> slots[(*v as u8 - b'A') as usize] & 1 == 1,
        Formula::Const(b) => *b,
        Formula::Not(c) => !eval_packed(c, slots, bits),
        Formula::And(ms) => ms.iter().all(|m| eval_packed(m, slots, bits)),
        Formula::Or(ms) => ms.iter().any(|m| eval_packed(m, slots, bits)),
        Formula::Imp(x, y) => !eval_packed(x, slots, bits) || eval_packed(y, slots, bits),
        Formula::Iff(x, y) => eval_packed(x, slots, bits) == eval_packed(y, slots, bits),
    }
}

fn guard(vars: &VarSet) -> Result<(), FormulaError> {
    if vars.len() > MAX_VARIABLES {
        return Err(FormulaError::TooManyVariables { count: vars.len(), limit: MAX_VARIABLES });
    }
    Ok(())
}

/// Truth values of `f` for every assignment over `vars`, indexed by the
/// assignment read as a binary number (first variable most significant).
pub fn truth_table(f: &Formula, vars: &VarSet) -> Result<Vec<bool>, FormulaError> {
    guard(vars)?;
    if let Some(v) = f.variables().difference(vars).next() {
        return Err(FormulaError::MissingVariable(*v));
    }
    let n = vars.len();
    let mut slots = [0u8; 26];
    for (i, v) in vars.iter().enumerate() {
        slots[(*v as u8 - b'A') as usize] = (n - 1 - i) as u8;
    }
    Ok((0..1u32 << n).map(|bits| eval_packed(f, &slots, bits)).collect())
}

pub fn equivalent(f: &Formula, g: &Formula) -> Result<bool, FormulaError> {
    let vars: VarSet = f.variables().union(&g.variables()).copied().collect();
    Ok(truth_table(f, &vars)? == truth_table(g, &vars)?)
}

/// Full DNF read off the truth table: one conjunction per satisfying
/// assignment in ascending binary order, literals in alphabetical order.
pub fn canonical_fdnf(f: &Formula, vars: &VarSet) -> Result<Formula, FormulaError> {
    let table = truth_table(f, vars)?;
    if vars.is_empty() {
        return Ok(Formula::Const(table[0]));
    }
    let n = vars.len();
    let disjuncts: Vec<Formula> = table
        .iter()
        .enumerate()
        .filter(|(_, &sat)| sat)
        .map(|(bits, _)| {
            Formula::and(vars.iter().enumerate().map(|(i, &v)| {
                if bits >> (n - 1 - i) & 1 == 1 {
                    Formula::Var(v)
                } else {
                    Formula::not(Formula::Var(v))
                }
            }))
        })
        .collect();
    Ok(Formula::or(disjuncts))
}
