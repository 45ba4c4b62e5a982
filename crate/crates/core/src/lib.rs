//! Step-by-step conversion of propositional formulas to full disjunctive
//! normal form, with rule identification and relevance checking of each
//! step against the six-stage conversion algorithm.

pub mod formula;
pub mod rules;
pub mod analyzer;
pub mod solution;
pub mod taskgen;
