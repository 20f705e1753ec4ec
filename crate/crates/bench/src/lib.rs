//! Systems and inputs shared by the benchmarks.

use ptv_core::{parse_rule, parse_system, Formula, GeneratorSpec, System};

pub fn toy1() -> System {
    parse_system("!explicit\n---\np\n(p => q)\n---\np\n(p => r)\n", None)
        .unwrap()
        .with_name("toy1")
}

/// Powerset system over the seven-rule universe with ((p => q) => r).
pub fn harrop() -> System {
    let rules = ["p", "q", "r", "(p => q)", "(p => r)", "(q => r)", "((p => q) => r)"].map(|r| parse_rule(r).unwrap());
    System::generated(GeneratorSpec::from_universe(rules))
        .unwrap()
        .with_name("harrop")
}

pub fn harrop_instance() -> Formula {
    ptv_core::parse_formula("(p -> q | r) -> (p -> q) | (p -> r)").unwrap()
}
