mod common;

use std::collections::BTreeSet;

use common::*;
use ptv_core::bridge::implication_nesting;
use ptv_core::explorer::{ipc_soundness_sweep, FormulaPool};
use ptv_core::rules::Deriver;
use ptv_core::semantics::Evaluator;
use ptv_core::{
    formula_to_rules, parse_rule, round_trip_check, rule_to_formula, Atom, Base, BotPolicy, Formula, Rule, System,
};

fn universe_of(sys: &System) -> Vec<Rule> {
    sys.universe().to_vec()
}

/// The nine level-1 single-premise rules over {p, q, r} plus ((p => q) => r).
fn ten_rule_universe() -> Vec<Rule> {
    let mut u = universe_of(&generated(&["p", "q", "r"], 1, 1));
    u.push(parse_rule("((p => q) => r)").unwrap());
    assert_eq!(u.len(), 10);
    u
}

#[test]
fn derivability_is_monotone() {
    let universe = ten_rule_universe();
    let atoms = atoms(&["p", "q", "r"]);
    for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
        let mut d = Deriver::new(policy);
        for base in subsets(&universe) {
            let here: Vec<bool> = atoms.iter().map(|a| d.derives(&base, a)).collect();
            for r in &universe {
                if base.contains(r) {
                    continue;
                }
                let bigger = base.with([r.clone()]);
                for (a, was) in atoms.iter().zip(&here) {
                    assert!(!was || d.derives(&bigger, a), "{base} + {r} loses {a}");
                }
            }
        }
    }
}

#[test]
fn atomic_cut() {
    for universe in [
        universe_of(&generated(&["p", "q"], 2, 1)),
        universe_of(&harrop_system()),
    ] {
        let atoms: BTreeSet<Atom> = universe.iter().flat_map(Rule::atoms).collect();
        let mut d = Deriver::new(BotPolicy::Explosion);
        for base in subsets(&universe) {
            for p in &atoms {
                if !d.derives(&base, p) {
                    continue;
                }
                let with_p = base.with([Rule::axiom(p.clone())]);
                for q in &atoms {
                    if d.derives(&with_p, q) {
                        assert!(d.derives(&base, q), "cut fails: {base} derives {p}, and with it {q}");
                    }
                }
            }
        }
    }
}

#[test]
fn unused_rules_can_be_dropped() {
    let universe = universe_of(&generated(&["p", "q"], 2, 1));
    let atoms = atoms(&["p", "q"]);
    let mut d = Deriver::new(BotPolicy::Explosion);
    for base in subsets(&universe) {
        for a in &atoms {
            let Some(proof) = d.explain(&base, a) else {
                continue;
            };
            assert!(proof.check(&base, BotPolicy::Explosion));
            let used: BTreeSet<&Rule> = proof.steps.iter().filter_map(|s| s.rule.as_ref()).collect();
            for r in base.iter().filter(|r| !used.contains(r)) {
                let smaller: Base = base.iter().filter(|x| *x != r).cloned().collect();
                assert!(d.derives(&smaller, a), "{a} from {base} needs unused {r}");
            }
        }
    }
    let cycle: Base = ["(p => q)", "(q => p)"]
        .iter()
        .map(|r| parse_rule(r).unwrap())
        .collect();
    assert!(!d.derives(&cycle, &Atom::new("p").unwrap()));
}

#[test]
fn every_small_rule_round_trips() {
    let rules = all_rules(&["p", "q", "r"], 3, 2);
    assert!(rules.len() > 100_000);
    for r in &rules {
        assert!(round_trip_check(r), "{r}");
        let f = rule_to_formula(r);
        assert_eq!(implication_nesting(&f), r.level(), "{r} as {f}");
        assert_eq!(formula_to_rules(&f).unwrap(), BTreeSet::from([r.clone()]));
    }
}

#[test]
fn generated_families_are_closed() {
    for sys in [generated(&["p", "q"], 2, 1), harrop_system()] {
        let bases: Vec<Base> = sys.enumerate_bases().collect();
        for a in bases.iter().step_by(7) {
            for b in &bases {
                assert!(sys.member(&a.union(b)));
            }
            for r in sys.universe() {
                assert!(sys.member(&a.with([r.clone()])));
            }
        }
    }
}

#[test]
fn extension_counts_are_antitone() {
    for sys in [toy1(), toy2(), generated(&["p", "q"], 2, 1)] {
        let bases: Vec<Base> = sys.enumerate_bases().collect();
        for a in &bases {
            let na = sys.extensions_of(a).unwrap().len();
            for b in bases.iter().filter(|b| a.is_subset(b)) {
                assert!(sys.extensions_of(b).unwrap().len() <= na, "{a} vs {b}");
            }
        }
    }
}

/// Validity of A -> B at S against validity of B at S with A's rules
/// added. The forward direction needs A valid wherever its rules are; the
/// lemma as a whole is only checked empirically and reported.
#[test]
fn import_export_on_small_universes() {
    let sys = generated(&["p", "q"], 2, 1);
    let universe: BTreeSet<Rule> = sys.universe().iter().cloned().collect();
    let pool = FormulaPool::new(&atoms(&["p", "q"]), false, 3, usize::MAX);
    let antecedents: Vec<&Formula> = pool
        .formulas()
        .iter()
        .filter(|a| formula_to_rules(a).is_ok_and(|rs| rs.is_subset(&universe)))
        .collect();
    assert!(antecedents.len() >= 4);
    let consequents = FormulaPool::new(&atoms(&["p", "q"]), true, 3, usize::MAX);
    let mut ev = Evaluator::new(&sys, BotPolicy::Explosion).unwrap();
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for a in &antecedents {
        let rules = formula_to_rules(a).unwrap();
        let a_set = ev.validity_set(a);
        for id in 0..sys.base_count() {
            let with = sys.id_of(&sys.base(id).with(rules.iter().cloned())).unwrap();
            // The rules of A make A valid.
            assert!(a_set.contains(with), "{a} not valid at {}", sys.base(with));
        }
        for b in consequents.formulas() {
            let imp = Formula::imp((*a).clone(), b.clone());
            let imp_set = ev.validity_set(&imp);
            let b_set = ev.validity_set(b);
            for id in 0..sys.base_count() {
                let with = sys.id_of(&sys.base(id).with(rules.iter().cloned())).unwrap();
                checked += 1;
                let left = imp_set.contains(id);
                let right = b_set.contains(with);
                // Export always holds once A is valid at S with its rules.
                assert!(!left || right, "{imp} at {}", sys.base(id));
                if left != right {
                    counterexamples.push((imp.clone(), id));
                }
            }
        }
    }
    println!(
        "import/export: {checked} checks, {} where B holds with A's rules but A -> B fails",
        counterexamples.len()
    );
    for (f, id) in counterexamples.iter().take(5) {
        println!("  {f} at {}", sys.base(*id));
    }
}

#[test]
fn ipc_theorems_are_valid_in_every_tested_system() {
    let systems = [toy1(), toy2(), harrop_system(), generated(&["p", "q"], 2, 1)];
    for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
        let report = ipc_soundness_sweep(&systems, &atoms(&["p", "q", "r"]), true, 4, policy).unwrap();
        assert_eq!(report.formulas, 21_050_320);
        assert!(
            report.violations.is_empty(),
            "{:?}",
            &report.violations[..report.violations.len().min(5)]
        );
        println!(
            "{policy}: {} formulas, {} tautologies, {} decided by the prover",
            report.formulas, report.tautologies, report.candidates
        );
    }
}
