use std::fmt;

use super::{check_wellformed, Argument, ArgumentError, Kind};
use crate::rules::{Base, BotPolicy};
use crate::semantics::{consequence, valid, Verdict};
use crate::systems::System;

/// Which clause decided an argument's validity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgumentCase {
    /// Closed, concluding an atom: valid iff the atom is valid at the base.
    Atomic,
    /// Closed, ending in an introduction: valid iff its immediate
    /// subarguments are valid.
    ClosedIntroduction,
    /// Closed, ending in an elimination: valid iff its conclusion is.
    ClosedOther,
    /// Open: valid iff the conclusion follows from the open assumptions at
    /// every extension.
    Open,
}

impl fmt::Display for ArgumentCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArgumentCase::Atomic => "closed argument for an atom",
            ArgumentCase::ClosedIntroduction => "closed argument ending in an introduction",
            ArgumentCase::ClosedOther => "closed argument ending in an elimination",
            ArgumentCase::Open => "open argument, formula-level consequence reading",
        })
    }
}

pub fn classify(a: &Argument) -> ArgumentCase {
    if !a.is_closed() {
        ArgumentCase::Open
    } else if a.conclusion().as_atom().is_some() {
        ArgumentCase::Atomic
    } else if a.kind().is_some_and(Kind::is_introduction) {
        ArgumentCase::ClosedIntroduction
    } else {
        ArgumentCase::ClosedOther
    }
}

/// Validity of a well-formed argument at `base`. The certificate justifies
/// the conclusion (or the entailment, for open arguments) and its notes
/// record the case that applied.
pub fn s_valid_argument(sys: &System, base: &Base, a: &Argument, policy: BotPolicy) -> Result<Verdict, ArgumentError> {
    let violations = check_wellformed(a);
    if !violations.is_empty() {
        return Err(ArgumentError::IllFormed(violations));
    }
    let case = classify(a);
    let mut verdict = match case {
        ArgumentCase::Open => consequence(sys, base, &a.open_formulas(), a.conclusion(), policy)?,
        ArgumentCase::ClosedIntroduction => {
            let mut ok = true;
            for c in a.children() {
                if !s_valid_argument(sys, base, c, policy)?.valid {
                    ok = false;
                    break;
                }
            }
            let mut v = valid(sys, base, a.conclusion(), policy)?;
            // Both readings coincide for sound inferences; keep the
            // recursive result authoritative.
            if v.valid != ok {
                v.certificate = None;
            }
            v.valid = ok;
            v
        }
        ArgumentCase::Atomic | ArgumentCase::ClosedOther => valid(sys, base, a.conclusion(), policy)?,
    };
    if let Some(cert) = verdict.certificate.as_mut() {
        cert.notes.push(format!("argument case: {case}"));
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arguments::parse_argument;
    use crate::systems::parse_system;

    fn toy() -> System {
        parse_system("!explicit\n---\np\n---\np\n(p => q)\n", None).unwrap()
    }

    #[test]
    fn open_modus_ponens_is_valid() {
        let sys = toy();
        let a = parse_argument("(impE q (assume h1 p -> q) (assume h2 p))").unwrap();
        let v = s_valid_argument(&sys, &Base::default(), &a, BotPolicy::Explosion).unwrap();
        assert!(v.valid);
        let cert = v.certificate.unwrap();
        assert!(cert.notes.iter().any(|n| n.contains("consequence reading")));
    }

    #[test]
    fn closed_introduction_case() {
        let sys = toy();
        let a = parse_argument("(impI p -> p [h] (assume h p))").unwrap();
        assert_eq!(classify(&a), ArgumentCase::ClosedIntroduction);
        assert!(
            s_valid_argument(&sys, &Base::default(), &a, BotPolicy::Explosion)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn ill_formed_is_rejected() {
        let sys = toy();
        let a = parse_argument("(impE q (assume h1 p & q) (assume h2 p))").unwrap();
        assert!(matches!(
            s_valid_argument(&sys, &Base::default(), &a, BotPolicy::Explosion),
            Err(ArgumentError::IllFormed(_))
        ));
    }
}
