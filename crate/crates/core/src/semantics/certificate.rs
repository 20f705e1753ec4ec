//! Certificates: the evaluated clause structure of a verdict as a DAG of
//! nodes, each claiming a verdict for one goal at one base, with evidence
//! that refers only to earlier nodes. Replay re-checks every node locally.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::rules::{Base, BotPolicy, Derivation, Deriver};
use crate::syntax::{Atom, Formula};
use crate::systems::System;

/// What a node claims about its base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    /// The formula is valid at the base.
    Formula(Formula),
    /// The conclusion is valid at every extension validating all assumptions.
    Entails(Vec<Formula>, Formula),
    /// The formula is valid at every base of the system.
    Everywhere(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Atom (or `bot` under the atom policy) derived in the base.
    Derived(Derivation),
    /// Atom valid because `bot` is valid at the same base (node index).
    Explosion(usize),
    /// Atom or `bot` not derivable; replay recomputes this.
    NotDerivable,
    /// `bot` under explosion: one valid node per system atom.
    AllAtoms(Vec<usize>),
    /// `bot` under explosion fails: a system atom that is not valid.
    AtomFails(usize),
    Both(usize, usize),
    ConjunctFails(usize),
    Disjunct(usize),
    Neither(usize, usize),
    /// Implication or consequence holds: for each extension in order, a
    /// node showing an antecedent failing or the consequent holding.
    Extensions(Vec<usize>),
    /// Implication or consequence fails: at one extension, nodes for every
    /// antecedent holding followed by the consequent failing.
    Counterexample(Vec<usize>),
    /// Valid at every base: one node per base in enumeration order.
    AllBases(Vec<usize>),
    /// Fails at the cited base.
    FailsAt(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    /// `None` for [`Goal::Everywhere`].
    pub base: Option<Base>,
    pub goal: Goal,
    pub valid: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub system: String,
    pub policy: BotPolicy,
    /// Extra header lines, e.g. which reading of argument validity applied.
    pub notes: Vec<String>,
    /// Children precede parents; the root is last.
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate node {node}: {reason}")]
pub struct ReplayError {
    pub node: usize,
    pub reason: String,
}

impl Certificate {
    pub fn root(&self) -> &Node {
        self.nodes.last().expect("certificates are nonempty")
    }

    pub fn valid(&self) -> bool {
        self.root().valid
    }

    /// Indented text trace, one clause per line. A node reached a second
    /// time is printed once more with `(see above)` and not expanded.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate: system {}, policy {}", self.system, self.policy);
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let mut seen = HashSet::new();
        self.render_node(self.nodes.len() - 1, 0, &mut seen, &mut out);
        out
    }

    fn render_node(&self, i: usize, depth: usize, seen: &mut HashSet<usize>, out: &mut String) {
        let node = &self.nodes[i];
        let indent = "  ".repeat(depth);
        let verdict = if node.valid { "valid" } else { "invalid" };
        let at = match &node.base {
            Some(b) => format!("at {b}: "),
            None => String::new(),
        };
        let goal = match &node.goal {
            Goal::Formula(f) => f.to_string(),
            Goal::Entails(hyps, c) => {
                let hyps: Vec<String> = hyps.iter().map(|h| h.to_string()).collect();
                format!("{} |- {c}", hyps.join(", "))
            }
            Goal::Everywhere(f) => format!("every base |= {f}"),
        };
        if !seen.insert(i) {
            let _ = writeln!(out, "{indent}{at}{goal}  {verdict} (see above)");
            return;
        }
        let detail = match &node.evidence {
            Evidence::Derived(d) => format!("derivation: {d}"),
            Evidence::Explosion(_) => "bot is valid here".into(),
            Evidence::NotDerivable => "not derivable".into(),
            Evidence::AllAtoms(_) => "every atom derivable".into(),
            Evidence::AtomFails(_) => "an atom is underivable".into(),
            Evidence::Both(..) => "both conjuncts".into(),
            Evidence::ConjunctFails(_) => "a conjunct fails".into(),
            Evidence::Disjunct(_) => "a disjunct holds".into(),
            Evidence::Neither(..) => "neither disjunct".into(),
            Evidence::Extensions(list) => format!("all {} extensions checked", list.len()),
            Evidence::Counterexample(list) => {
                let at = self.nodes[list[0]].base.as_ref().expect("based node");
                format!("counterexample extension {at}")
            }
            Evidence::AllBases(list) => format!("all {} bases", list.len()),
            Evidence::FailsAt(n) => {
                format!("fails at {}", self.nodes[*n].base.as_ref().expect("based node"))
            }
        };
        let _ = writeln!(out, "{indent}{at}{goal}  {verdict}, {detail}");
        for c in children(&node.evidence) {
            self.render_node(c, depth + 1, seen, out);
        }
    }

    /// Re-checks every node against `sys` and returns the root verdict.
    pub fn replay(&self, sys: &System) -> Result<bool, ReplayError> {
        let mut deriver = Deriver::new(self.policy);
        for (i, node) in self.nodes.iter().enumerate() {
            self.check_node(sys, &mut deriver, i, node)
                .map_err(|reason| ReplayError { node: i, reason })?;
        }
        match self.nodes.last() {
            Some(n) => Ok(n.valid),
            None => Err(ReplayError {
                node: 0,
                reason: "empty certificate".into(),
            }),
        }
    }

    fn check_node(&self, sys: &System, deriver: &mut Deriver, i: usize, node: &Node) -> Result<(), String> {
        for c in children(&node.evidence) {
            if c >= i {
                return Err(format!("refers forward to node {c}"));
            }
        }
        if let Some(b) = &node.base {
            if !sys.member(b) {
                return Err(format!("base {b} is not in the system"));
            }
        }
        let child = |c: usize| &self.nodes[c];
        let same_base = |c: usize| child(c).base == node.base;
        let claims =
            |c: usize, f: &Formula, valid: bool| child(c).goal == Goal::Formula(f.clone()) && child(c).valid == valid;
        let expect = |ok: bool, why: &str| if ok { Ok(()) } else { Err(why.to_string()) };
        match &node.goal {
            Goal::Formula(f) => {
                let base = node.base.as_ref().ok_or("formula node without a base")?;
                match (f, &node.evidence) {
                    (Formula::Atom(a), Evidence::Derived(d)) => expect(
                        node.valid && d.conclusion() == a && d.check(base, self.policy),
                        "bad derivation",
                    ),
                    (Formula::Bot, Evidence::Derived(d)) => expect(
                        node.valid
                            && self.policy == BotPolicy::Atom
                            && d.conclusion().is_falsum()
                            && d.check(base, self.policy),
                        "bad derivation of bot",
                    ),
                    (Formula::Atom(_), Evidence::Explosion(c)) => expect(
                        node.valid && same_base(*c) && claims(*c, &Formula::Bot, true),
                        "explosion without valid bot",
                    ),
                    (Formula::Atom(a), Evidence::NotDerivable) => {
                        let holds = atom_valid(sys, self.policy, deriver, base, a);
                        expect(!node.valid && !holds, "atom is in fact valid")
                    }
                    (Formula::Bot, Evidence::NotDerivable) => {
                        let holds = self.policy == BotPolicy::Atom && deriver.derives(base, &Atom::falsum());
                        expect(
                            !node.valid && self.policy == BotPolicy::Atom && !holds,
                            "bot is in fact derivable",
                        )
                    }
                    (Formula::Bot, Evidence::AllAtoms(list)) => expect(
                        node.valid
                            && self.policy == BotPolicy::Explosion
                            && list.len() == sys.atoms().len()
                            && list
                                .iter()
                                .zip(sys.atoms())
                                .all(|(&c, a)| same_base(c) && claims(c, &Formula::Atom(a.clone()), true)),
                        "atom list does not cover the system atoms",
                    ),
                    (Formula::Bot, Evidence::AtomFails(c)) => expect(
                        !node.valid
                            && self.policy == BotPolicy::Explosion
                            && same_base(*c)
                            && !child(*c).valid
                            && matches!(&child(*c).goal, Goal::Formula(Formula::Atom(a)) if sys.atoms().contains(a)),
                        "cited atom is not a failing system atom",
                    ),
                    (Formula::And(a, b), Evidence::Both(x, y)) => expect(
                        node.valid && same_base(*x) && same_base(*y) && claims(*x, a, true) && claims(*y, b, true),
                        "conjunct nodes do not match",
                    ),
                    (Formula::And(a, b), Evidence::ConjunctFails(x)) => expect(
                        !node.valid && same_base(*x) && (claims(*x, a, false) || claims(*x, b, false)),
                        "cited conjunct does not fail",
                    ),
                    (Formula::Or(a, b), Evidence::Disjunct(x)) => expect(
                        node.valid && same_base(*x) && (claims(*x, a, true) || claims(*x, b, true)),
                        "cited disjunct does not hold",
                    ),
                    (Formula::Or(a, b), Evidence::Neither(x, y)) => expect(
                        !node.valid && same_base(*x) && same_base(*y) && claims(*x, a, false) && claims(*y, b, false),
                        "disjunct nodes do not match",
                    ),
                    (Formula::Imp(a, b), ev) => {
                        self.check_extensions(sys, node, base, std::slice::from_ref(&**a), b, ev)
                    }
                    _ => Err("evidence does not fit the formula".into()),
                }
            }
            Goal::Entails(hyps, c) => {
                let base = node.base.as_ref().ok_or("consequence node without a base")?;
                self.check_extensions(sys, node, base, hyps, c, &node.evidence)
            }
            Goal::Everywhere(f) => {
                let claim_at =
                    |c: usize, b: &Base, valid: bool| child(c).base.as_ref() == Some(b) && claims(c, f, valid);
                match &node.evidence {
                    Evidence::AllBases(list) => {
                        let bases: Vec<Base> = sys.enumerate_bases().collect();
                        expect(
                            node.valid
                                && list.len() == bases.len()
                                && list.iter().zip(&bases).all(|(&c, b)| claim_at(c, b, true)),
                            "base list does not cover the system",
                        )
                    }
                    Evidence::FailsAt(c) => {
                        let b = child(*c).base.clone().ok_or("cited node has no base")?;
                        expect(!node.valid && claim_at(*c, &b, false), "cited base does not fail")
                    }
                    _ => Err("evidence does not fit the goal".into()),
                }
            }
        }
    }

    fn check_extensions(
        &self,
        sys: &System,
        node: &Node,
        base: &Base,
        hyps: &[Formula],
        concl: &Formula,
        evidence: &Evidence,
    ) -> Result<(), String> {
        let exts = sys.extensions_of(base).map_err(|e| e.to_string())?;
        let child = |c: usize| &self.nodes[c];
        let at = |c: usize, b: &Base, f: &Formula, valid: bool| {
            let n = child(c);
            n.base.as_ref() == Some(b) && n.goal == Goal::Formula(f.clone()) && n.valid == valid
        };
        match evidence {
            Evidence::Extensions(list) if node.valid => {
                if list.len() != exts.len() {
                    return Err(format!("lists {} extensions, system has {}", list.len(), exts.len()));
                }
                for (&c, e) in list.iter().zip(&exts) {
                    if !(at(c, e, concl, true) || hyps.iter().any(|h| at(c, e, h, false))) {
                        return Err(format!("extension {e} is not settled by node {c}"));
                    }
                }
                Ok(())
            }
            Evidence::Counterexample(list) if !node.valid => {
                let e = child(*list.first().ok_or("empty counterexample")?)
                    .base
                    .clone()
                    .ok_or("counterexample without a base")?;
                if !exts.contains(&e) {
                    return Err(format!("{e} is not an extension of {base}"));
                }
                let ok = list.len() == hyps.len() + 1
                    && hyps.iter().zip(list).all(|(h, &c)| at(c, &e, h, true))
                    && at(*list.last().expect("nonempty"), &e, concl, false);
                if ok {
                    Ok(())
                } else {
                    Err("counterexample nodes do not match".into())
                }
            }
            _ => Err("evidence does not fit the goal".into()),
        }
    }
}

/// Atom validity recomputed from scratch: derivable, or `bot` valid.
fn atom_valid(sys: &System, policy: BotPolicy, deriver: &mut Deriver, base: &Base, a: &Atom) -> bool {
    if deriver.derives(base, a) {
        return true;
    }
    match policy {
        BotPolicy::Atom => false,
        BotPolicy::Explosion => sys.atoms().iter().all(|x| deriver.derives(base, x)),
    }
}

pub(crate) fn children(ev: &Evidence) -> Vec<usize> {
    match ev {
        Evidence::Derived(_) | Evidence::NotDerivable => vec![],
        Evidence::Explosion(c) | Evidence::AtomFails(c) | Evidence::ConjunctFails(c) | Evidence::Disjunct(c) => {
            vec![*c]
        }
        Evidence::FailsAt(c) => vec![*c],
        Evidence::Both(a, b) | Evidence::Neither(a, b) => vec![*a, *b],
        Evidence::AllAtoms(l) | Evidence::Extensions(l) | Evidence::Counterexample(l) | Evidence::AllBases(l) => {
            l.clone()
        }
    }
}
