//! Detour reductions: an introduction immediately eliminated is replaced by
//! the derivations it was built from.

use std::collections::BTreeSet;
use std::fmt;

use super::{check_wellformed, path_string, Argument, ArgumentError, Kind, VACUOUS};

/// Default reduction budget for [`normalize`].
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Imp => "->",
        })
    }
}

/// Address of a detour: the elimination node and its connective.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionStep {
    pub path: Vec<usize>,
    pub connective: Connective,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-detour at {}", self.connective, path_string(&self.path))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

/// The connective of the detour rooted at `a`, if `a` is one.
pub fn detour_at(a: &Argument) -> Option<Connective> {
    let Argument::Infer { kind, children, .. } = a else {
        return None;
    };
    let major = children.first()?.kind()?;
    match (kind, major) {
        (Kind::AndE1 | Kind::AndE2, Kind::AndI) => Some(Connective::And),
        (Kind::OrE, Kind::OrI1 | Kind::OrI2) => Some(Connective::Or),
        (Kind::ImpE, Kind::ImpI) => Some(Connective::Imp),
        _ => None,
    }
}

/// All detours, in leftmost-outermost (pre-order) order.
pub fn detours(a: &Argument) -> Vec<ReductionStep> {
    fn go(a: &Argument, path: &mut Vec<usize>, out: &mut Vec<ReductionStep>) {
        if let Some(connective) = detour_at(a) {
            out.push(ReductionStep {
                path: path.clone(),
                connective,
            });
        }
        for (i, c) in a.children().iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(a, &mut Vec::new(), &mut out);
    out
}

fn rightmost_innermost(a: &Argument, path: &mut Vec<usize>) -> Option<ReductionStep> {
    for (i, c) in a.children().iter().enumerate().rev() {
        path.push(i);
        if let Some(step) = rightmost_innermost(c, path) {
            return Some(step);
        }
        path.pop();
    }
    detour_at(a).map(|connective| ReductionStep {
        path: path.clone(),
        connective,
    })
}

fn next_detour(a: &Argument, strategy: Strategy) -> Option<ReductionStep> {
    match strategy {
        Strategy::LeftmostOutermost => detours(a).into_iter().next(),
        Strategy::RightmostInnermost => rightmost_innermost(a, &mut Vec::new()),
    }
}

/// Contracts the detour at `at.path`.
pub fn reduce_once(a: &Argument, at: &ReductionStep) -> Result<Argument, ArgumentError> {
    let not_detour = || ArgumentError::NotADetour(at.path.clone());
    let node = a.at(&at.path).ok_or_else(not_detour)?;
    if detour_at(node) != Some(at.connective) {
        return Err(not_detour());
    }
    let mut used = BTreeSet::new();
    a.all_labels(&mut used);
    let reduct = contract(node, &mut used);
    let mut out = a.clone();
    *out.at_mut(&at.path).expect("path checked above") = reduct;
    Ok(vacate_unused(&out))
}

/// Replaces discharge labels that no longer occur in their scope by `_`;
/// contracting a detour can drop the only assumption a label discharged.
fn vacate_unused(a: &Argument) -> Argument {
    let Argument::Infer {
        kind,
        conclusion,
        discharge,
        children,
    } = a
    else {
        return a.clone();
    };
    let discharge = discharge
        .iter()
        .map(|l| {
            let used = l == VACUOUS
                || children
                    .iter()
                    .enumerate()
                    .any(|(i, c)| a.binds_in(i).contains(&l.as_str()) && c.open_assumptions().contains_key(l));
            if used {
                l.clone()
            } else {
                VACUOUS.to_string()
            }
        })
        .collect();
    Argument::Infer {
        kind: kind.clone(),
        conclusion: conclusion.clone(),
        discharge,
        children: children.iter().map(vacate_unused).collect(),
    }
}

fn contract(node: &Argument, used: &mut BTreeSet<String>) -> Argument {
    let Argument::Infer {
        kind,
        discharge,
        children,
        ..
    } = node
    else {
        unreachable!("detours are inference nodes")
    };
    let major = &children[0];
    match kind {
        Kind::AndE1 => major.children()[0].clone(),
        Kind::AndE2 => major.children()[1].clone(),
        Kind::ImpE => {
            let body = &major.children()[0];
            let minor = &children[1];
            match major.binds_in(0).first() {
                Some(label) => substitute(body, label, minor, used),
                None => body.clone(),
            }
        }
        Kind::OrE => {
            let inner = &major.children()[0];
            let case = if major.kind() == Some(&Kind::OrI1) { 1 } else { 2 };
            let label = discharge.get(case - 1).map(String::as_str).filter(|l| *l != VACUOUS);
            match label {
                Some(label) => substitute(&children[case], label, inner, used),
                None => children[case].clone(),
            }
        }
        _ => unreachable!("not an elimination over an introduction"),
    }
}

/// Replaces the free assumptions labelled `label` in `target` by `repl`,
/// renaming binders in `target` that would capture open labels of `repl`.
pub(crate) fn substitute(target: &Argument, label: &str, repl: &Argument, used: &mut BTreeSet<String>) -> Argument {
    let free: BTreeSet<String> = repl.open_assumptions().into_keys().collect();
    subst(target, label, repl, &free, used)
}

fn subst(t: &Argument, label: &str, repl: &Argument, free: &BTreeSet<String>, used: &mut BTreeSet<String>) -> Argument {
    match t {
        Argument::Assume { label: l, .. } if l == label => repl.clone(),
        Argument::Assume { .. } => t.clone(),
        Argument::Infer {
            kind,
            conclusion,
            discharge,
            children,
        } => {
            let mut discharge = discharge.clone();
            let mut children = children.clone();
            for b in discharge.clone() {
                if !free.contains(&b) || b == label {
                    continue;
                }
                let fresh = fresh_label(&b, used);
                for (i, c) in children.iter_mut().enumerate() {
                    if t.binds_in(i).contains(&b.as_str()) {
                        *c = rename_free(c, &b, &fresh);
                    }
                }
                for d in discharge.iter_mut().filter(|d| **d == b) {
                    *d = fresh.clone();
                }
            }
            let renamed = Argument::Infer {
                kind: kind.clone(),
                conclusion: conclusion.clone(),
                discharge: discharge.clone(),
                children: children.clone(),
            };
            let children = children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if renamed.binds_in(i).contains(&label) {
                        c.clone()
                    } else {
                        subst(c, label, repl, free, used)
                    }
                })
                .collect();
            Argument::Infer {
                kind: kind.clone(),
                conclusion: conclusion.clone(),
                discharge,
                children,
            }
        }
    }
}

fn rename_free(a: &Argument, from: &str, to: &str) -> Argument {
    match a {
        Argument::Assume { label, formula } if label == from => Argument::Assume {
            label: to.into(),
            formula: formula.clone(),
        },
        Argument::Assume { .. } => a.clone(),
        Argument::Infer {
            kind,
            conclusion,
            discharge,
            children,
        } => Argument::Infer {
            kind: kind.clone(),
            conclusion: conclusion.clone(),
            discharge: discharge.clone(),
            children: children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if a.binds_in(i).contains(&from) {
                        c.clone()
                    } else {
                        rename_free(c, from, to)
                    }
                })
                .collect(),
        },
    }
}

fn fresh_label(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while used.contains(&candidate) {
        candidate.push('\'');
    }
    used.insert(candidate.clone());
    candidate
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub argument: Argument,
    /// Contracted detours, in order.
    pub trace: Vec<ReductionStep>,
}

impl Normalized {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }
}

/// Leftmost-outermost normalization within `fuel` contractions.
pub fn normalize(a: &Argument, fuel: usize) -> Result<Normalized, ArgumentError> {
    normalize_with(a, fuel, Strategy::LeftmostOutermost)
}

pub fn normalize_with(a: &Argument, fuel: usize, strategy: Strategy) -> Result<Normalized, ArgumentError> {
    let violations = check_wellformed(a);
    if !violations.is_empty() {
        return Err(ArgumentError::IllFormed(violations));
    }
    let mut current = a.clone();
    let mut trace = Vec::new();
    while let Some(step) = next_detour(&current, strategy) {
        if trace.len() == fuel {
            return Err(ArgumentError::FuelExhausted {
                partial: Box::new(current),
                steps: trace.len(),
            });
        }
        current = reduce_once(&current, &step)?;
        trace.push(step);
    }
    Ok(Normalized {
        argument: current,
        trace,
    })
}
