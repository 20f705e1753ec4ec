use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{path_string, Argument, Kind, VACUOUS};
use crate::rules::Rule;
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", path_string(&self.path), self.reason)
    }
}

/// Every violated local shape or discharge condition, in pre-order.
pub fn check_wellformed(a: &Argument) -> Vec<Violation> {
    let mut out = Vec::new();
    walk(a, &mut Vec::new(), &mut Vec::new(), &mut out);
    let mut open: BTreeMap<&str, &Formula> = BTreeMap::new();
    let mut reported = BTreeSet::new();
    for (label, path, formula) in free_leaves(a) {
        match open.get(label) {
            Some(&f) if f != formula => {
                if reported.insert(label) {
                    out.push(Violation {
                        path,
                        reason: format!("open label `{label}` stands for both `{f}` and `{formula}`"),
                    });
                }
            }
            Some(_) => {}
            None => {
                open.insert(label, formula);
            }
        }
    }
    out
}

fn free_leaves(a: &Argument) -> Vec<(&str, Vec<usize>, &Formula)> {
    let mut out = Vec::new();
    collect_free(a, &mut Vec::new(), &mut Vec::new(), &mut |l, p, f| out.push((l, p, f)));
    out
}

fn collect_free<'a>(
    a: &'a Argument,
    path: &mut Vec<usize>,
    bound: &mut Vec<&'a str>,
    emit: &mut dyn FnMut(&'a str, Vec<usize>, &'a Formula),
) {
    match a {
        Argument::Assume { label, formula } => {
            if !bound.contains(&label.as_str()) {
                emit(label, path.clone(), formula);
            }
        }
        Argument::Infer { children, .. } => {
            for (i, c) in children.iter().enumerate() {
                let n = bound.len();
                bound.extend(a.binds_in(i));
                path.push(i);
                collect_free(c, path, bound, emit);
                path.pop();
                bound.truncate(n);
            }
        }
    }
}

/// Formulas of the free occurrences of `label` in `a`.
fn occurrences<'a>(a: &'a Argument, label: &str) -> Vec<&'a Formula> {
    let mut out = Vec::new();
    collect_free(a, &mut Vec::new(), &mut Vec::new(), &mut |l, _, f| {
        if l == label {
            out.push(f);
        }
    });
    out
}

fn walk<'a>(a: &'a Argument, path: &mut Vec<usize>, binders: &mut Vec<&'a str>, out: &mut Vec<Violation>) {
    let Argument::Infer {
        kind,
        conclusion,
        discharge,
        children,
    } = a
    else {
        return;
    };
    let mut bad = |reason: String| {
        out.push(Violation {
            path: path.clone(),
            reason,
        })
    };
    let concl_of = |i: usize| children.get(i).map(Argument::conclusion);
    let arity = match kind {
        Kind::AndI | Kind::ImpE => 2,
        Kind::OrE => 3,
        Kind::Atomic(r) => r.premise_count(),
        _ => 1,
    };
    if children.len() != arity {
        bad(format!(
            "{} needs {arity} premise(s), has {}",
            kind.name(),
            children.len()
        ));
    }
    let max_labels = match kind {
        Kind::ImpI => 1,
        Kind::OrE => 2,
        Kind::Atomic(_) => usize::MAX,
        _ => 0,
    };
    if discharge.len() > max_labels {
        bad(format!("{} discharges at most {max_labels} label(s)", kind.name()));
    }
    if matches!(kind, Kind::OrE) && discharge.len() != 2 {
        bad("orE needs exactly two labels, one per case".into());
    }
    for l in discharge.iter().filter(|l| *l != VACUOUS) {
        if binders.contains(&l.as_str()) {
            bad(format!("label `{l}` is discharged again inside its own scope"));
        }
    }
    if children.len() == arity {
        let shape = match kind {
            Kind::AndI => match conclusion {
                Formula::And(x, y) if Some(&**x) == concl_of(0) && Some(&**y) == concl_of(1) => Ok(()),
                _ => Err("andI must conclude the conjunction of its premises"),
            },
            Kind::AndE1 | Kind::AndE2 => match concl_of(0) {
                Some(Formula::And(x, y)) => {
                    let want = if matches!(kind, Kind::AndE1) { x } else { y };
                    if **want == *conclusion {
                        Ok(())
                    } else {
                        Err("conclusion is not the selected conjunct")
                    }
                }
                _ => Err("premise is not a conjunction"),
            },
            Kind::OrI1 | Kind::OrI2 => match conclusion {
                Formula::Or(x, y) => {
                    let want = if matches!(kind, Kind::OrI1) { x } else { y };
                    if Some(&**want) == concl_of(0) {
                        Ok(())
                    } else {
                        Err("premise is not the introduced disjunct")
                    }
                }
                _ => Err("conclusion is not a disjunction"),
            },
            Kind::OrE => match concl_of(0) {
                Some(Formula::Or(..)) if concl_of(1) == Some(conclusion) && concl_of(2) == Some(conclusion) => Ok(()),
                Some(Formula::Or(..)) => Err("both cases must conclude the conclusion"),
                _ => Err("major premise is not a disjunction"),
            },
            Kind::ImpI => match conclusion {
                Formula::Imp(_, y) if Some(&**y) == concl_of(0) => Ok(()),
                _ => Err("impI must conclude an implication whose consequent its premise proves"),
            },
            Kind::ImpE => match concl_of(0) {
                Some(Formula::Imp(x, y)) if Some(&**x) == concl_of(1) && **y == *conclusion => Ok(()),
                Some(Formula::Imp(..)) => Err("minor premise or conclusion does not match the major premise"),
                _ => Err("major premise is not an implication"),
            },
            Kind::BotE => match (concl_of(0), conclusion) {
                (Some(Formula::Bot), Formula::Atom(_)) => Ok(()),
                (Some(Formula::Bot), _) => Err("botE concludes an atom"),
                _ => Err("botE premise must conclude bot"),
            },
            Kind::Atomic(rule) => check_atomic(rule, conclusion, children, discharge),
        };
        if let Err(reason) = shape {
            bad(reason.to_string());
        }
    }
    // Discharged assumptions must exist and carry the discharged formula.
    if children.len() == arity {
        let expected = |i: usize| -> Option<Formula> {
            match (kind, i) {
                (Kind::ImpI, 0) => match conclusion {
                    Formula::Imp(x, _) => Some((**x).clone()),
                    _ => None,
                },
                (Kind::OrE, 1 | 2) => match concl_of(0) {
                    Some(Formula::Or(x, y)) => Some(if i == 1 { (**x).clone() } else { (**y).clone() }),
                    _ => None,
                },
                _ => None,
            }
        };
        if !matches!(kind, Kind::Atomic(_)) {
            for (i, child) in children.iter().enumerate() {
                for l in a.binds_in(i) {
                    let occ = occurrences(child, l);
                    if occ.is_empty() {
                        bad(format!("label `{l}` discharges no assumption"));
                    } else if let Some(want) = expected(i) {
                        if occ.iter().any(|f| **f != want) {
                            bad(format!("label `{l}` must discharge `{want}`"));
                        }
                    }
                }
            }
        } else {
            for l in discharge.iter().filter(|l| *l != VACUOUS) {
                if children.iter().all(|c| occurrences(c, l).is_empty()) {
                    bad(format!("label `{l}` discharges no assumption"));
                }
            }
        }
    }
    for (i, c) in children.iter().enumerate() {
        let n = binders.len();
        binders.extend(a.binds_in(i));
        path.push(i);
        walk(c, path, binders, out);
        path.pop();
        binders.truncate(n);
    }
}

/// Children must match the rule's premises one-to-one (in any order): each
/// child concludes its premise's conclusion, and discharged labels used in
/// it name atoms whose axioms the premise discharges.
fn check_atomic(
    rule: &Rule,
    conclusion: &Formula,
    children: &[Argument],
    discharge: &[String],
) -> Result<(), &'static str> {
    if conclusion.as_atom() != Some(rule.conclusion()) {
        return Err("conclusion differs from the rule's conclusion");
    }
    let premises: Vec<&Rule> = rule.premises().collect();
    let labels: Vec<&str> = discharge.iter().map(String::as_str).filter(|l| *l != VACUOUS).collect();
    let fits = |child: &Argument, premise: &Rule| -> bool {
        if child.conclusion().as_atom() != Some(premise.conclusion()) {
            return false;
        }
        labels.iter().all(|l| {
            occurrences(child, l).iter().all(|f| match f.as_atom() {
                Some(a) => premise.premises().any(|d| d == &Rule::axiom(a.clone())),
                None => false,
            })
        })
    };
    let mut used = vec![false; premises.len()];
    if assign(children, &premises, &fits, &mut used, 0) {
        Ok(())
    } else {
        Err("premises do not match the rule (conclusions or discharged assumptions)")
    }
}

fn assign(
    children: &[Argument],
    premises: &[&Rule],
    fits: &dyn Fn(&Argument, &Rule) -> bool,
    used: &mut [bool],
    i: usize,
) -> bool {
    if i == children.len() {
        return true;
    }
    for j in 0..premises.len() {
        if !used[j] && fits(&children[i], premises[j]) {
            used[j] = true;
            if assign(children, premises, fits, used, i + 1) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
