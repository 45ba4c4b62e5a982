use serde::Serialize;

use super::{apply_rule_tracked, Params, RULES};
use crate::formula::{subformula_at, Formula, Path, VarSet};

/// Parameter space of an applicable rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamsTemplate {
    None,
    /// Any nonempty subset of these variables.
    Vars(VarSet),
    /// Any of these member indices.
    Member(Vec<usize>),
    /// Any permutation of the members.
    Order(usize),
}

impl ParamsTemplate {
    /// Concrete parameter values. Orders are represented by the default
    /// sort and the reversal.
    pub fn instances(&self) -> Vec<Params> {
        match self {
            ParamsTemplate::None => vec![Params::None],
            ParamsTemplate::Vars(vars) => {
                let vs: Vec<char> = vars.iter().copied().collect();
                (1..1u32 << vs.len())
                    .map(|mask| {
                        Params::Vars(
                            vs.iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, v)| *v)
                                .collect(),
                        )
                    })
                    .collect()
            }
            ParamsTemplate::Member(idx) => idx.iter().map(|&i| Params::Member(i)).collect(),
            ParamsTemplate::Order(n) => vec![Params::None, Params::Order((0..*n).rev().collect())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicable {
    pub rule: u8,
    pub path: Path,
    pub params: ParamsTemplate,
}

/// Every markable path in preorder: a node, then its proper slices by
/// `(start, len)`, then its children.
pub fn candidate_paths(f: &Formula) -> Vec<Path> {
    fn walk(node: &Formula, at: &mut Vec<usize>, out: &mut Vec<Path>) {
        out.push(Path::new(at.clone()));
        if let Some(ms) = node.members() {
            let n = ms.len();
            for start in 0..n {
                for len in 2..n {
                    if start + len <= n {
                        out.push(Path::sliced(at.clone(), start, len));
                    }
                }
            }
        }
        for (i, c) in node.children().into_iter().enumerate() {
            at.push(i);
            walk(c, at, out);
            at.pop();
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

/// Rules applicable at one path. `vars` is the task's variable universe,
/// which bounds the variables rule 19 may add.
pub fn applicable_at(f: &Formula, path: &Path, vars: &VarSet) -> Vec<Applicable> {
    let Ok(part) = subformula_at(f, path) else {
        return Vec::new();
    };
    RULES
        .iter()
        .filter_map(|r| {
            let template = match r.id {
                13 => ParamsTemplate::Member(
                    part.members()
                        .filter(|_| matches!(part, Formula::And(_)))
                        .map(|ms| {
                            (0..ms.len()).filter(|&i| matches!(ms[i], Formula::Or(_))).collect()
                        })
                        .unwrap_or_default(),
                ),
                18 => ParamsTemplate::Order(part.members().map_or(0, <[Formula]>::len)),
                19 => {
                    let missing: VarSet = vars.difference(&part.variables()).copied().collect();
                    if missing.is_empty() {
                        return None;
                    }
                    ParamsTemplate::Vars(missing)
                }
                _ => ParamsTemplate::None,
            };
            let probe = match &template {
                ParamsTemplate::Vars(all) => Params::Vars(all.clone()),
                _ => Params::None,
            };
            apply_rule_tracked(r.id, f, path, &probe, false)
                .ok()
                .map(|_| Applicable { rule: r.id, path: path.clone(), params: template })
        })
        .collect()
}

pub fn enumerate_applicable(f: &Formula, vars: &VarSet) -> Vec<Applicable> {
    candidate_paths(f).iter().flat_map(|p| applicable_at(f, p, vars)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let found = enumerate_applicable(&p("!!X"), &VarSet::from(['X']));
        assert!(found.iter().any(|a| a.rule == 1 && a.path == Path::root()));

        let found = enumerate_applicable(&p("X|Y"), &VarSet::from(['X', 'Y']));
        assert!(found.contains(&Applicable {
            rule: 19,
            path: Path::new([0]),
            params: ParamsTemplate::Vars(VarSet::from(['Y'])),
        }));
        assert!(found.contains(&Applicable {
            rule: 19,
            path: Path::new([1]),
            params: ParamsTemplate::Vars(VarSet::from(['X'])),
        }));

        let found = enumerate_applicable(&p("X"), &VarSet::from(['X']));
        assert!(found.iter().all(|a| a.rule != 9));
    }

    #[test]
    fn paths_are_preorder_with_slices() {
        let paths = candidate_paths(&p("X&Y&Z|W"));
        let shown: Vec<String> = paths.iter().map(Path::to_string).collect();
        assert_eq!(shown, ["[]", "[0]", "[0]{0+2}", "[0]{1+2}", "[0,0]", "[0,1]", "[0,2]", "[1]"]);
    }

    #[test]
    fn every_entry_applies() {
        let f = p("!(X&!!Y)|(Z=>X)&(Y|X&X)");
        let vars = f.variables();
        for a in enumerate_applicable(&f, &vars) {
            for params in a.params.instances() {
                let res = apply_rule_tracked(a.rule, &f, &a.path, &params, false);
                assert!(res.is_ok(), "rule {} at {} with {params:?}: {res:?}", a.rule, a.path);
            }
        }
    }

    #[test]
    fn subset_instances() {
        let t = ParamsTemplate::Vars(VarSet::from(['X', 'Y']));
        assert_eq!(t.instances().len(), 3);
    }
}
