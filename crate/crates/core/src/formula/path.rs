use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Formula, FormulaError, Kind};

/// Address of a subformula: child indices from the root, optionally
/// narrowed to a contiguous run `(start, len)` of members of the addressed
/// `And`/`Or` chain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    #[serde(rename = "path")]
    pub steps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<(usize, usize)>,
}

impl Path {
    pub fn root() -> Path {
        Path::default()
    }

    pub fn new(steps: impl Into<Vec<usize>>) -> Path {
        Path { steps: steps.into(), slice: None }
    }

    pub fn sliced(steps: impl Into<Vec<usize>>, start: usize, len: usize) -> Path {
        Path { steps: steps.into(), slice: Some((start, len)) }
    }

    pub fn child(&self, index: usize) -> Path {
        let mut steps = self.steps.clone();
        steps.push(index);
        Path::new(steps)
    }

    /// Path of the enclosing node; `None` for the root. A sliced path's
    /// parent is the chain itself.
    pub fn parent(&self) -> Option<Path> {
        if self.slice.is_some() {
            return Some(Path::new(self.steps.clone()));
        }
        let mut steps = self.steps.clone();
        steps.pop().map(|_| Path::new(steps))
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty() && self.slice.is_none()
    }

    /// True for a slice strictly narrower than its chain.
    pub fn is_proper_slice(&self, f: &Formula) -> bool {
        match (self.slice, node_at(f, &self.steps).and_then(Formula::members)) {
            (Some((_, len)), Some(ms)) => len > 1 && len < ms.len(),
            _ => false,
        }
    }

    /// Canonical form for `f`: a full-width slice is dropped and a
    /// single-member slice becomes the member's own path.
    pub fn normalize(&self, f: &Formula) -> Result<Path, FormulaError> {
        let node = node_at(f, &self.steps).ok_or_else(|| self.invalid("no such node"))?;
        let Some((start, len)) = self.slice else {
            return Ok(self.clone());
        };
        let ms = node.members().ok_or_else(|| self.invalid("slice of a non-chain node"))?;
        if len == 0 || start + len > ms.len() {
            return Err(self.invalid("slice out of range"));
        }
        Ok(if len == ms.len() {
            Path::new(self.steps.clone())
        } else if len == 1 {
            Path::new(self.steps.clone()).child(start)
        } else {
            self.clone()
        })
    }

    fn invalid(&self, reason: &str) -> FormulaError {
        FormulaError::InvalidPath { path: self.to_string(), reason: reason.into() }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")?;
        if let Some((start, len)) = self.slice {
            write!(f, "{{{start}+{len}}}")?;
        }
        Ok(())
    }
}

pub(crate) fn node_at<'a>(f: &'a Formula, steps: &[usize]) -> Option<&'a Formula> {
    steps.iter().try_fold(f, |node, &i| node.child(i))
}

pub fn subformula_at(f: &Formula, p: &Path) -> Result<Formula, FormulaError> {
    let p = p.normalize(f)?;
    let node = node_at(f, &p.steps).expect("normalized path addresses a node");
    Ok(match p.slice {
        None => node.clone(),
        Some((start, len)) => {
            let ms = node.members().expect("normalized slice addresses a chain");
            Formula::chain(node.kind(), ms[start..start + len].iter().cloned())
        }
    })
}

pub fn replace_at(f: &Formula, p: &Path, g: Formula) -> Result<Formula, FormulaError> {
    replace_at_tracked(f, p, g).map(|(f, _)| f)
}

/// Like [`replace_at`], also returning where the replacement ended up after
/// splicing into a like-kind chain.
pub fn replace_at_tracked(
    f: &Formula,
    p: &Path,
    g: Formula,
) -> Result<(Formula, Path), FormulaError> {
    let p = p.normalize(f)?;
    Ok(replace_rec(f, &p.steps, p.slice, g))
}

fn replace_rec(
    node: &Formula,
    steps: &[usize],
    slice: Option<(usize, usize)>,
    g: Formula,
) -> (Formula, Path) {
    let Some((&i, rest)) = steps.split_first() else {
        return match slice {
            None => (g, Path::root()),
            Some((start, len)) => {
                let kind = node.kind();
                let ms = node.members().expect("validated chain");
                let width = match (&g, kind) {
                    (Formula::And(gs), Kind::And) | (Formula::Or(gs), Kind::Or) => gs.len(),
                    _ => 1,
                };
                let members = ms[..start]
                    .iter()
                    .cloned()
                    .chain(std::iter::once(g))
                    .chain(ms[start + len..].iter().cloned());
                let at = if width == 1 {
                    Path::new([start])
                } else {
                    Path::sliced(Vec::new(), start, width)
                };
                (Formula::chain(kind, members), at)
            }
        };
    };
    let child = node.child(i).expect("validated path");
    let (new_child, rel) = replace_rec(child, rest, slice, g);
    match node {
        Formula::Not(_) => (Formula::not(new_child), prefixed(0, rel)),
        Formula::Imp(a, b) | Formula::Iff(a, b) => {
            let (lhs, rhs) = if i == 0 {
                (new_child, b.as_ref().clone())
            } else {
                (a.as_ref().clone(), new_child)
            };
            let rebuilt = if node.kind() == Kind::Imp {
                Formula::imp(lhs, rhs)
            } else {
                Formula::iff(lhs, rhs)
            };
            (rebuilt, prefixed(i, rel))
        }
        Formula::And(ms) | Formula::Or(ms) => {
            let kind = node.kind();
            let at = if new_child.kind() == kind {
                let width = new_child.members().map_or(1, <[Formula]>::len);
                match rel.steps.split_first() {
                    None => match rel.slice {
                        Some((s, w)) => Path::sliced(Vec::new(), i + s, w),
                        None => Path::sliced(Vec::new(), i, width),
                    },
                    Some((&j, deeper)) => {
                        let mut steps = vec![i + j];
                        steps.extend_from_slice(deeper);
                        Path { steps, slice: rel.slice }
                    }
                }
            } else {
                prefixed(i, rel)
            };
            let members = ms[..i]
                .iter()
                .cloned()
                .chain(std::iter::once(new_child))
                .chain(ms[i + 1..].iter().cloned());
            (Formula::chain(kind, members), at)
        }
        Formula::Var(_) | Formula::Const(_) => unreachable!("atoms have no children"),
    }
}

fn prefixed(i: usize, rel: Path) -> Path {
    let mut steps = vec![i];
    steps.extend(rel.steps);
    Path { steps, slice: rel.slice }
}
