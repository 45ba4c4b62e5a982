//! Random initial formulas for FDNF tasks.
//!
//! A task is a random binary tree with one internal node per connective of
//! the task spec, leaves drawn from the variable pool, and a few negations placed
//! on distinct nodes. Generation is deterministic for a given seed.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{truth_table, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    And,
    Or,
    Imp,
    Iff,
}

impl Connective {
    fn build(self, a: Formula, b: Formula) -> Formula {
        match self {
            Connective::And => Formula::and([a, b]),
            Connective::Or => Formula::or([a, b]),
            Connective::Imp => Formula::imp(a, b),
            Connective::Iff => Formula::iff(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskSpec {
    pub count: usize,
    pub seed: u64,
    pub pool: Vec<char>,
    pub connectives: Vec<Connective>,
    pub min_negations: usize,
    pub max_negations: usize,
}

impl Default for TaskSpec {
    fn default() -> Self {
        TaskSpec {
            count: 1,
            seed: 0,
            pool: vec!['X', 'Y', 'Z', 'W'],
            connectives: vec![Connective::And, Connective::Or, Connective::Imp, Connective::Iff],
            min_negations: 2,
            max_negations: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaskSpecError {
    #[error("negation range {0}..{1} is empty")]
    EmptyNegationRange(usize, usize),
    #[error("variable pool needs at least two distinct uppercase letters")]
    SmallPool,
    #[error("at least one connective is required")]
    NoConnectives,
    #[error("{negations} negations do not fit on {nodes} nodes")]
    TooManyNegations { negations: usize, nodes: usize },
}

impl TaskSpec {
    pub fn negations(&self) -> RangeInclusive<usize> {
        self.min_negations..=self.max_negations
    }

    pub fn validate(&self) -> Result<(), TaskSpecError> {
        if self.min_negations > self.max_negations {
            return Err(TaskSpecError::EmptyNegationRange(self.min_negations, self.max_negations));
        }
        let mut pool = self.pool.clone();
        pool.sort_unstable();
        pool.dedup();
        if pool.len() < 2 || pool.iter().any(|c| !c.is_ascii_uppercase()) {
            return Err(TaskSpecError::SmallPool);
        }
        if self.connectives.is_empty() {
            return Err(TaskSpecError::NoConnectives);
        }
        let nodes = 2 * self.connectives.len() + 1;
        if self.max_negations > nodes {
            return Err(TaskSpecError::TooManyNegations { negations: self.max_negations, nodes });
        }
        Ok(())
    }
}

/// Binary tree shape in preorder: `true` for an internal node.
fn random_shape(rng: &mut impl Rng, internal: usize, out: &mut Vec<bool>) {
    if internal == 0 {
        out.push(false);
        return;
    }
    out.push(true);
    let left = rng.gen_range(0..internal);
    random_shape(rng, left, out);
    random_shape(rng, internal - 1 - left, out);
}

struct Builder<'a> {
    shape: &'a [bool],
    connectives: &'a [Connective],
    leaves: &'a [char],
    negated: &'a [bool],
    node: usize,
    next_connective: usize,
    next_leaf: usize,
}

impl Builder<'_> {
    fn build(&mut self) -> Formula {
        let at = self.node;
        self.node += 1;
        let f = if self.shape[at] {
            let c = self.connectives[self.next_connective];
            self.next_connective += 1;
            let a = self.build();
            let b = self.build();
            c.build(a, b)
        } else {
            let v = self.leaves[self.next_leaf];
            self.next_leaf += 1;
            Formula::var(v)
        };
        if self.negated[at] {
            Formula::not(f)
        } else {
            f
        }
    }
}

fn candidate(spec: &TaskSpec, pool: &[char], rng: &mut impl Rng) -> Formula {
    let internal = spec.connectives.len();
    let mut shape = Vec::with_capacity(2 * internal + 1);
    random_shape(rng, internal, &mut shape);
    let mut connectives = spec.connectives.clone();
    connectives.shuffle(rng);

    let leaf_count = internal + 1;
    let wanted = 3.min(pool.len()).min(leaf_count);
    let leaves = loop {
        let leaves: Vec<char> = (0..leaf_count).map(|_| *pool.choose(rng).expect("pool is nonempty")).collect();
        let mut distinct = leaves.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() >= wanted {
            break leaves;
        }
    };

    let negations = rng.gen_range(spec.negations());
    let mut negated = vec![false; shape.len()];
    for at in rand::seq::index::sample(rng, shape.len(), negations) {
        negated[at] = true;
    }
    Builder {
        shape: &shape,
        connectives: &connectives,
        leaves: &leaves,
        negated: &negated,
        node: 0,
        next_connective: 0,
        next_leaf: 0,
    }
    .build()
}

fn is_constant(f: &Formula) -> bool {
    let table = truth_table(f, &f.variables()).expect("generated formulas stay small");
    table.iter().all(|&b| b == table[0])
}

pub fn generate_tasks(spec: &TaskSpec) -> Result<Vec<Formula>, TaskSpecError> {
    spec.validate()?;
    let mut pool = spec.pool.clone();
    pool.sort_unstable();
    pool.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut tasks = Vec::with_capacity(spec.count);
    while tasks.len() < spec.count {
        let f = candidate(spec, &pool, &mut rng);
        if !is_constant(&f) {
            tasks.push(f);
        }
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Kind;

    fn count(f: &Formula, kind: Kind) -> usize {
        let own = usize::from(f.kind() == kind);
        own + f.children().into_iter().map(|c| count(c, kind)).sum::<usize>()
    }

    #[test]
    fn seed_42_meets_constraints() {
        let spec = TaskSpec { count: 1, seed: 42, ..TaskSpec::default() };
        let tasks = generate_tasks(&spec).unwrap();
        assert_eq!(tasks.len(), 1);
        let f = &tasks[0];
        for kind in [Kind::And, Kind::Or, Kind::Imp, Kind::Iff] {
            assert_eq!(count(f, kind), 1, "{f}");
        }
        assert!((2..=3).contains(&count(f, Kind::Not)), "{f}");
        assert!(f.variables().len() >= 3);
    }

    #[test]
    fn deterministic() {
        let spec = TaskSpec { count: 20, seed: 9, ..TaskSpec::default() };
        assert_eq!(generate_tasks(&spec).unwrap(), generate_tasks(&spec).unwrap());
    }

    #[test]
    fn no_negations() {
        let spec = TaskSpec { count: 10, min_negations: 0, max_negations: 0, ..TaskSpec::default() };
        for f in generate_tasks(&spec).unwrap() {
            assert_eq!(count(&f, Kind::Not), 0);
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = TaskSpec { min_negations: 3, max_negations: 2, ..TaskSpec::default() };
        assert!(generate_tasks(&bad).is_err());
        let bad = TaskSpec { pool: vec!['X', 'X'], ..TaskSpec::default() };
        assert_eq!(bad.validate(), Err(TaskSpecError::SmallPool));
    }
}
