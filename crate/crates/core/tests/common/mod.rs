#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;

use ptv_core::{load_system, parse_rule, Atom, GeneratorSpec, Rule, System};

pub fn fixture(name: &str) -> System {
    load_system(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)).unwrap()
}

pub fn toy1() -> System {
    fixture("toy1.sys")
}

pub fn toy2() -> System {
    fixture("toy2.sys")
}

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::new(n).unwrap()).collect()
}

pub const HARROP_UNIVERSE: [&str; 7] = ["p", "q", "r", "(p => q)", "(p => r)", "(q => r)", "((p => q) => r)"];

/// Powerset system over the seven-rule universe with the level-2 rule
/// ((p => q) => r).
pub fn harrop_system() -> System {
    let rules = HARROP_UNIVERSE.map(|r| parse_rule(r).unwrap());
    System::generated(GeneratorSpec::from_universe(rules))
        .unwrap()
        .with_name("harrop")
}

pub fn generated(names: &[&str], level: usize, premises: usize) -> System {
    System::generated(GeneratorSpec::new(atoms(names), level, premises)).unwrap()
}

/// Every rule over `atoms` up to `max_level` with at most `max_premises`
/// premises per rule, including rules that discharge their own conclusion.
/// Independent of the library's generator.
pub fn all_rules(names: &[&str], max_level: usize, max_premises: usize) -> BTreeSet<Rule> {
    let atoms = atoms(names);
    let mut all: BTreeSet<Rule> = atoms.iter().map(|a| Rule::axiom(a.clone())).collect();
    for _ in 0..max_level {
        let lower: Vec<Rule> = all.iter().cloned().collect();
        let mut premise_sets: Vec<Vec<Rule>> = Vec::new();
        for i in 0..lower.len() {
            premise_sets.push(vec![lower[i].clone()]);
            if max_premises >= 2 {
                for j in i + 1..lower.len() {
                    premise_sets.push(vec![lower[i].clone(), lower[j].clone()]);
                }
            }
        }
        assert!(max_premises <= 2, "helper enumerates at most pairs");
        for set in &premise_sets {
            for a in &atoms {
                all.insert(Rule::compound(set.iter().cloned(), a.clone()));
            }
        }
    }
    all
}

/// Subsets of `universe` as bases, by bitmask.
pub fn subsets(universe: &[Rule]) -> Vec<ptv_core::Base> {
    (0u64..1 << universe.len())
        .map(|m| {
            universe
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect()
        })
        .collect()
}
