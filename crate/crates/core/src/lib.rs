//! Proof-theoretic (base-extension) validity for propositional logic over
//! finite systems of higher-level atomic rules.

mod bits;
mod error;
mod lexer;

pub mod arguments;
pub mod bridge;
pub mod explorer;
pub mod ipc;
pub mod rules;
pub mod semantics;
pub mod syntax;
pub mod systems;

pub use arguments::{
    check_wellformed, normalize, parse_argument, print_argument, reduce_once, s_valid_argument, Argument,
    ArgumentError, Kind,
};
pub use bits::BitSet;
pub use bridge::{formula_to_rules, round_trip_check, rule_to_formula, TranslateError};
pub use error::ParseError;
pub use ipc::{ipc_provable, kripke_counterexample, KripkeModel};
pub use rules::{parse_rule, Base, BotPolicy, Rule};
pub use semantics::{
    consequence, gptv_valid, ptv_valid, valid, valid_optimized, Certificate, Evaluator, SemanticsError, Verdict,
};
pub use syntax::{atoms_of, is_disjunction_free, parse_formula, print_formula, Atom, Formula};
pub use systems::{load_system, parse_system, BaseId, GeneratorSpec, System, SystemError};
