use fdnf_core::analyzer::{check_step, is_completed, solve_reference, stage_measure, stage_of, Stage};
use fdnf_core::formula::{canonical_fdnf, equivalent, parse, print, subformula_at, Formula, Path, VarSet};
use fdnf_core::rules::{
    apply_rule, apply_rule_tracked, enumerate_applicable, identify_step, is_sorted_by_variable, lookup, Params,
    StepKind,
};
use fdnf_core::solution::{load_solutions, write_solutions, Attempt, StepRecord};
use fdnf_core::taskgen::{generate_tasks, TaskSpec};
use proptest::prelude::*;

fn formula(vars: &'static [char], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => prop::sample::select(vars).prop_map(Formula::var),
        1 => any::<bool>().prop_map(Formula::constant),
    ];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

const FIVE: &[char] = &['V', 'W', 'X', 'Y', 'Z'];
const THREE: &[char] = &['X', 'Y', 'Z'];

/// Every applicable concrete rewrite of `f`.
fn rewrites(f: &Formula) -> Vec<(u8, Path, Params)> {
    enumerate_applicable(f, &f.variables())
        .into_iter()
        .flat_map(|a| a.params.instances().into_iter().map(move |p| (a.rule, a.path.clone(), p)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(f in formula(FIVE, 5)) {
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn parsed_and_rewritten_formulas_are_flat(f in formula(FIVE, 4)) {
        prop_assert!(parse(&print(&f)).unwrap().is_flat());
        for (rule, path, params) in rewrites(&f) {
            let g = apply_rule(rule, &f, &path, &params).unwrap();
            prop_assert!(g.is_flat(), "rule {} at {} gave {:?}", rule, path, g);
        }
    }

    #[test]
    fn rules_are_sound(f in formula(FIVE, 4)) {
        for (rule, path, params) in rewrites(&f) {
            let g = apply_rule(rule, &f, &path, &params).unwrap();
            prop_assert!(equivalent(&f, &g).unwrap(), "rule {} at {}: {} -> {}", rule, path, f, g);
        }
    }

    #[test]
    fn identification_replays(f in formula(THREE, 3)) {
        for (rule, path, params) in rewrites(&f) {
            let g = apply_rule(rule, &f, &path, &params).unwrap();
            let id = identify_step(&f, &g).unwrap();
            match id.kind {
                StepKind::NoChange => prop_assert_eq!(&g, &f),
                StepKind::RuleStep { rule: r, path: p, params: q, double_neg_cleanup } => {
                    let replay = apply_rule_tracked(r, &f, &p, &q, double_neg_cleanup).unwrap();
                    prop_assert_eq!(&replay.formula, &g);
                }
                StepKind::FreeInput { .. } => {
                    prop_assert!(false, "rule {} at {}: {} -> {} not identified", rule, path, f, g);
                }
            }
        }
    }

    #[test]
    fn unambiguous_steps_identify_their_rule(f in formula(THREE, 3)) {
        for (rule, path, params) in rewrites(&f) {
            let g = apply_rule(rule, &f, &path, &params).unwrap();
            let id = identify_step(&f, &g).unwrap();
            if id.alternatives.is_empty() && g != f {
                prop_assert_eq!(id.rule(), Some(rule), "{} -> {} at {}", f, g, path);
            }
        }
    }

    #[test]
    fn sorting_is_idempotent(f in formula(FIVE, 4)) {
        for (rule, path, params) in rewrites(&f).into_iter().filter(|r| r.0 == 17) {
            let once = apply_rule(rule, &f, &path, &params).unwrap();
            let twice = apply_rule(17, &once, &path, &Params::None).unwrap();
            prop_assert_eq!(&once, &twice);
            if path.slice.is_none() {
                match subformula_at(&once, &path).unwrap() {
                    Formula::And(ms) => prop_assert!(is_sorted_by_variable(&ms)),
                    other => prop_assert!(false, "sorted to {}", other),
                }
            }
        }
    }

    #[test]
    fn full_variable_addition(
        picks in prop::collection::btree_map(prop::sample::select(FIVE), any::<bool>(), 1..5),
    ) {
        let lits: Vec<Formula> = picks
            .iter()
            .map(|(&v, &pos)| if pos { Formula::var(v) } else { Formula::not(Formula::var(v)) })
            .collect();
        let k = Formula::and(lits);
        let all: VarSet = FIVE.iter().copied().collect();
        let missing: VarSet = all.difference(&k.variables()).copied().collect();
        prop_assume!(!missing.is_empty());
        let g = apply_rule(19, &k, &Path::root(), &Params::Vars(missing.clone())).unwrap();
        let Formula::Or(ds) = &g else { panic!("{g}") };
        prop_assert_eq!(ds.len(), 1 << missing.len());
        for d in ds {
            let ms = d.members().unwrap();
            prop_assert_eq!(ms.len(), FIVE.len());
            prop_assert_eq!(d.variables(), all.clone());
        }
    }

    #[test]
    fn canonical_form_is_done(f in formula(FIVE, 4)) {
        let vars: VarSet = FIVE.iter().copied().collect();
        let c = canonical_fdnf(&f, &vars).unwrap();
        prop_assert!(equivalent(&c, &f).unwrap());
        prop_assert_eq!(stage_of(&c, &vars), Stage::Done);
        prop_assert!(is_completed(&f, &c, &vars).unwrap());
    }

    #[test]
    fn equivalence_is_symmetric(f in formula(THREE, 3), g in formula(THREE, 3)) {
        prop_assert!(equivalent(&f, &f).unwrap());
        prop_assert_eq!(equivalent(&f, &g).unwrap(), equivalent(&g, &f).unwrap());
    }

    #[test]
    fn simplifications_are_always_accepted(f in formula(THREE, 4)) {
        let vars: VarSet = THREE.iter().copied().collect();
        for (rule, path, params) in rewrites(&f) {
            if !lookup(rule).unwrap().is_simplification() {
                continue;
            }
            let g = apply_rule(rule, &f, &path, &params).unwrap();
            if g == f {
                continue;
            }
            let v = check_step(&f, &g, &vars).unwrap();
            prop_assert!(
                v.ok || v.identification.rule().is_some_and(|r| !lookup(r).unwrap().is_simplification()),
                "rule {} at {}: {} -> {} got {:?}", rule, path, f, g, v.error
            );
        }
    }

    #[test]
    fn reference_solutions_are_clean(f in formula(THREE, 4)) {
        let vars: VarSet = THREE.iter().copied().collect();
        let trace = solve_reference(&f, &vars).unwrap();
        let mut current = f.clone();
        for step in &trace {
            let before = stage_of(&current, &vars);
            let after = stage_of(&step.formula, &vars);
            prop_assert!(after >= before, "{} -> {}", current, step.formula);
            if after == before {
                prop_assert!(
                    stage_measure(&step.formula, &vars, before) < stage_measure(&current, &vars, before),
                    "stage {} measure did not drop: {} -> {}", before, current, step.formula
                );
            }
            let v = check_step(&current, &step.formula, &vars).unwrap();
            prop_assert!(v.ok, "{} -> {}: {:?}", current, step.formula, v.error);
            current = step.formula.clone();
        }
        prop_assert!(is_completed(&f, &current, &vars).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_tasks_solve_within_bound(seed in any::<u64>()) {
        let tasks = generate_tasks(&TaskSpec { count: 3, seed, ..TaskSpec::default() }).unwrap();
        for f in tasks {
            let vars = f.variables();
            prop_assert!(vars.len() >= 3);
            let trace = solve_reference(&f, &vars).unwrap();
            prop_assert!(trace.len() <= 200, "{} took {}", f, trace.len());
        }
    }

    #[test]
    fn solution_files_round_trip(seed in any::<u64>(), undo_mask in any::<u32>()) {
        let tasks = generate_tasks(&TaskSpec { count: 2, seed, ..TaskSpec::default() }).unwrap();
        let attempts: Vec<Attempt> = tasks
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut a = Attempt::new(format!("t{i}"), print(f));
                for (j, step) in solve_reference(f, &f.variables()).unwrap().into_iter().enumerate() {
                    a.steps.push(StepRecord::apply(print(&step.formula)));
                    if undo_mask >> (j % 32) & 1 == 1 {
                        a.steps.push(StepRecord::undo());
                        a.steps.push(StepRecord::apply(print(&step.formula)));
                    }
                }
                a
            })
            .collect();
        let loaded = load_solutions(&write_solutions(&attempts)).unwrap();
        prop_assert!(loaded.failures.is_empty());
        prop_assert_eq!(&loaded.attempts, &attempts);
        let again = load_solutions(&write_solutions(&loaded.attempts)).unwrap();
        prop_assert_eq!(again.attempts, attempts);
    }
}
