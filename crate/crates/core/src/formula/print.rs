use serde::Serialize;

use super::{Formula, Path};

pub const MARK_OPEN: &str = "[[";
pub const MARK_CLOSE: &str = "]]";

/// Byte range of a subformula in the printed string, parentheses excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Span {
    pub path: Vec<usize>,
    pub start: usize,
    pub end: usize,
}

/// Minimal-parentheses rendering without whitespace.
pub fn print(f: &Formula) -> String {
    let mut r = Renderer::new(None, false);
    r.node(f);
    r.out
}

/// Rendering with the addressed part enclosed in `[[` `]]`.
pub fn print_marked(f: &Formula, mark: &Path) -> String {
    let mut r = Renderer::new(Some(mark), false);
    r.node(f);
    r.out
}

/// Spans of every node in preorder.
pub fn spans(f: &Formula) -> Vec<Span> {
    let mut r = Renderer::new(None, true);
    r.node(f);
    r.spans
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Imp(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        Formula::Not(_) => 5,
        Formula::Var(_) | Formula::Const(_) => 6,
    }
}

struct Renderer<'a> {
    out: String,
    mark: Option<&'a Path>,
    record: bool,
    spans: Vec<Span>,
    path: Vec<usize>,
}

impl<'a> Renderer<'a> {
    fn new(mark: Option<&'a Path>, record: bool) -> Self {
        Renderer { out: String::new(), mark, record, spans: Vec::new(), path: Vec::new() }
    }

    fn marked_here(&self) -> Option<Option<(usize, usize)>> {
        self.mark.filter(|m| m.steps == self.path).map(|m| m.slice)
    }

    fn node(&mut self, f: &Formula) {
        let here = self.marked_here();
        let whole = matches!(here, Some(None));
        let slice = here.flatten();
        if whole {
            self.out.push_str(MARK_OPEN);
        }
        let span_index = self.record.then(|| {
            self.spans.push(Span { path: self.path.clone(), start: self.out.len(), end: 0 });
            self.spans.len() - 1
        });
        let own = precedence(f);
        match f {
            Formula::Var(v) => self.out.push(*v),
            Formula::Const(b) => self.out.push(if *b { '1' } else { '0' }),
            Formula::Not(c) => {
                self.out.push('!');
                self.sub(c, 0, precedence(c) < own);
            }
            Formula::And(ms) | Formula::Or(ms) => {
                let sep = if matches!(f, Formula::And(_)) { '&' } else { '|' };
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        self.out.push(sep);
                    }
                    if slice.is_some_and(|(s, _)| s == i) {
                        self.out.push_str(MARK_OPEN);
                    }
                    self.sub(m, i, precedence(m) <= own);
                    if slice.is_some_and(|(s, l)| s + l - 1 == i) {
                        self.out.push_str(MARK_CLOSE);
                    }
                }
            }
            Formula::Imp(a, b) | Formula::Iff(a, b) => {
                let op = if matches!(f, Formula::Imp(..)) { "=>" } else { "<=>" };
                self.sub(a, 0, precedence(a) <= own);
                self.out.push_str(op);
                self.sub(b, 1, precedence(b) < own);
            }
        }
        if let Some(i) = span_index {
            self.spans[i].end = self.out.len();
        }
        if whole {
            self.out.push_str(MARK_CLOSE);
        }
    }

    fn sub(&mut self, f: &Formula, index: usize, parens: bool) {
        self.path.push(index);
        if parens {
            self.out.push('(');
        }
        self.node(f);
        if parens {
            self.out.push(')');
        }
        self.path.pop();
    }
}
