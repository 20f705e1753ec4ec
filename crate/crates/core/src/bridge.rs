//! Translation between higher-level rules and disjunction-free formulas.
//!
//! A rule `(R1, ..., Rn => q)` reads as `φ(R1) & ... & φ(Rn) -> q`, and a
//! formula built from atoms, `&` and `->` splits back into the set of rules
//! it stands for.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rules::Rule;
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula `{0}` contains a disjunction; only disjunction-free formulas translate to rules")]
    DisjunctionPresent(Formula),
    #[error("formula `{0}` contains `bot`, which has no rule counterpart")]
    BotPresent(Formula),
}

/// `p̄ ↦ p`; `(R1..Rn => q) ↦ (φ(R1) & ... & φ(Rn)) -> q`, conjunction
/// left-nested in canonical premise order.
pub fn rule_to_formula(r: &Rule) -> Formula {
    match r {
        Rule::Axiom(a) => Formula::Atom(a.clone()),
        Rule::Compound { premises, conclusion } => {
            let concl = Formula::Atom(conclusion.clone());
            match Formula::conjunction(premises.iter().map(rule_to_formula)) {
                Some(ante) => Formula::imp(ante, concl),
                None => concl,
            }
        }
    }
}

/// The rules a disjunction-free, `bot`-free formula stands for.
pub fn formula_to_rules(f: &Formula) -> Result<BTreeSet<Rule>, TranslateError> {
    fn go(f: &Formula, whole: &Formula) -> Result<BTreeSet<Rule>, TranslateError> {
        match f {
            Formula::Atom(a) => Ok(BTreeSet::from([Rule::axiom(a.clone())])),
            Formula::Bot => Err(TranslateError::BotPresent(whole.clone())),
            Formula::Or(..) => Err(TranslateError::DisjunctionPresent(whole.clone())),
            Formula::And(a, b) => {
                let mut out = go(a, whole)?;
                out.extend(go(b, whole)?);
                Ok(out)
            }
            Formula::Imp(a, b) => {
                let ante = go(a, whole)?;
                let cons = go(b, whole)?;
                Ok(cons
                    .into_iter()
                    .map(|r| {
                        let premises: Vec<Rule> = ante.iter().cloned().chain(r.premises().cloned()).collect();
                        Rule::compound(premises, r.conclusion().clone())
                    })
                    .collect())
            }
        }
    }
    // Report a disjunction ahead of `bot` regardless of where each occurs.
    if contains_or(f) {
        return Err(TranslateError::DisjunctionPresent(f.clone()));
    }
    go(f, f)
}

fn contains_or(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) | Formula::Bot => false,
        Formula::Or(..) => true,
        Formula::And(a, b) | Formula::Imp(a, b) => contains_or(a) || contains_or(b),
    }
}

/// `formula_to_rules(rule_to_formula(r)) == {r}`.
pub fn round_trip_check(r: &Rule) -> bool {
    match formula_to_rules(&rule_to_formula(r)) {
        Ok(set) => set.len() == 1 && set.contains(r),
        Err(_) => false,
    }
}

/// Longest chain of `->` nodes along any root-to-leaf path.
pub fn implication_nesting(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) | Formula::Bot => 0,
        Formula::And(a, b) | Formula::Or(a, b) => implication_nesting(a).max(implication_nesting(b)),
        Formula::Imp(a, b) => 1 + implication_nesting(a).max(implication_nesting(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rule;
    use crate::syntax::parse_formula;

    fn rule(s: &str) -> Rule {
        parse_rule(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn rules_to_formulas() {
        assert_eq!(rule_to_formula(&rule("(p, q => r)")), f("p & q -> r"));
        assert_eq!(rule_to_formula(&rule("((p => q) => r)")), f("(p -> q) -> r"));
        assert_eq!(
            rule_to_formula(&rule("(((p => q) => r) => s)")),
            f("((p -> q) -> r) -> s")
        );
        assert_eq!(rule_to_formula(&rule("p")), f("p"));
    }

    #[test]
    fn formulas_to_rules() {
        assert_eq!(
            formula_to_rules(&f("p & q -> r")).unwrap(),
            BTreeSet::from([rule("(p, q => r)")])
        );
        assert_eq!(
            formula_to_rules(&f("(p & (q -> s) & (r -> s)) -> s")).unwrap(),
            BTreeSet::from([rule("(p, (q => s), (r => s) => s)")])
        );
        assert_eq!(formula_to_rules(&f("p")).unwrap(), BTreeSet::from([rule("p")]));
        assert_eq!(
            formula_to_rules(&f("p -> q -> r")).unwrap(),
            BTreeSet::from([rule("(p, q => r)")])
        );
        assert_eq!(
            formula_to_rules(&f("p -> q & r")).unwrap(),
            BTreeSet::from([rule("(p => q)"), rule("(p => r)")])
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            formula_to_rules(&f("p | q")),
            Err(TranslateError::DisjunctionPresent(_))
        ));
        assert!(matches!(formula_to_rules(&f("~p")), Err(TranslateError::BotPresent(_))));
        assert!(matches!(
            formula_to_rules(&f("~(p | q)")),
            Err(TranslateError::DisjunctionPresent(_))
        ));
    }

    #[test]
    fn round_trips() {
        for r in ["(p, q => r)", "p", "(((p => q) => r) => s)", "((p, q => r), s => t)"] {
            assert!(round_trip_check(&rule(r)), "{r}");
        }
    }

    #[test]
    fn nesting_matches_level() {
        for r in ["p", "(p => q)", "((p => q), r => s)", "(((p => q) => r) => s)"] {
            let r = rule(r);
            assert_eq!(implication_nesting(&rule_to_formula(&r)), r.level());
        }
    }
}
