//! Least-fixpoint derivability `S ⊢ q`.
//!
//! A query against base `S` touches `S` and every base `S ∪ Δ` reachable
//! through compound premises `(Δ => q')`. All of those are bases over the
//! finite sub-rule closure of `S`, so the reachable family is finite. The
//! derivable atoms of every reachable base are computed together by Kleene
//! iteration from the empty assignment, which yields the least fixpoint:
//! cyclic self-support (`p` from `q` from `p`) never fires.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{Base, BotPolicy, Rule};
use crate::bits::BitSet;
use crate::syntax::Atom;

type AtomId = u32;
type RuleId = u32;
type Key = Arc<[RuleId]>;

#[derive(Clone, Debug)]
enum Premise {
    Atom(AtomId),
    Discharge { rules: Vec<RuleId>, conclusion: AtomId },
}

#[derive(Clone, Debug)]
struct RuleNode {
    conclusion: AtomId,
    premises: Vec<Premise>,
}

/// Derivable atoms of one base.
#[derive(Clone, Debug, Default)]
pub(crate) struct Closure {
    atoms: BitSet,
    /// `bot` was derived under [`BotPolicy::Atom`]: every atom is derivable.
    exploded: bool,
}

impl Closure {
    fn has(&self, a: AtomId) -> bool {
        self.exploded || self.atoms.contains(a as usize)
    }
}

/// Memoizing derivability engine. Rules and atoms are interned; closures are
/// cached per canonical base, so repeated queries over related bases (as in
/// validity checking) share work. One engine serves one [`BotPolicy`].
#[derive(Clone, Debug)]
pub struct Deriver {
    policy: BotPolicy,
    atoms: Vec<Atom>,
    atom_ids: HashMap<Atom, AtomId>,
    rules: Vec<RuleNode>,
    rule_src: Vec<Rule>,
    rule_ids: HashMap<Rule, RuleId>,
    memo: HashMap<Key, Closure>,
    falsum: AtomId,
}

impl Deriver {
    pub fn new(policy: BotPolicy) -> Self {
        let mut d = Deriver {
            policy,
            atoms: Vec::new(),
            atom_ids: HashMap::new(),
            rules: Vec::new(),
            rule_src: Vec::new(),
            rule_ids: HashMap::new(),
            memo: HashMap::new(),
            falsum: 0,
        };
        d.falsum = d.intern_atom(&Atom::falsum());
        d
    }

    pub fn policy(&self) -> BotPolicy {
        self.policy
    }

    fn intern_atom(&mut self, a: &Atom) -> AtomId {
        if let Some(&id) = self.atom_ids.get(a) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(a.clone());
        self.atom_ids.insert(a.clone(), id);
        id
    }

    pub(crate) fn intern_rule(&mut self, r: &Rule) -> RuleId {
        if let Some(&id) = self.rule_ids.get(r) {
            return id;
        }
        let conclusion = self.intern_atom(r.conclusion());
        let premises = r
            .premises()
            .map(|p| match p {
                Rule::Axiom(a) => Premise::Atom(self.intern_atom(a)),
                Rule::Compound { premises, conclusion } => {
                    let mut rules: Vec<RuleId> = premises.iter().map(|q| self.intern_rule(q)).collect();
                    rules.sort_unstable();
                    rules.dedup();
                    Premise::Discharge {
                        rules,
                        conclusion: self.intern_atom(conclusion),
                    }
                }
            })
            .collect();
        let id = self.rules.len() as RuleId;
        self.rules.push(RuleNode { conclusion, premises });
        self.rule_src.push(r.clone());
        self.rule_ids.insert(r.clone(), id);
        id
    }

    pub(crate) fn key_of(&mut self, base: &Base) -> Key {
        let mut ids: Vec<RuleId> = base.iter().map(|r| self.intern_rule(r)).collect();
        ids.sort_unstable();
        ids.into()
    }

    /// Key from already-interned rule ids (sorted, duplicate-free).
    pub fn derives(&mut self, base: &Base, goal: &Atom) -> bool {
        let key = self.key_of(base);
        self.derives_key(&key, goal)
    }

    pub(crate) fn derives_key(&mut self, key: &Key, goal: &Atom) -> bool {
        if goal.is_falsum() && self.policy == BotPolicy::Explosion {
            return false;
        }
        let id = self.atom_ids.get(goal).copied();
        let closure = self.closure(key);
        match id {
            Some(id) => closure.has(id),
            None => closure.exploded,
        }
    }

    /// Which of `atoms` are derivable at the keyed base.
    fn closure(&mut self, key: &Key) -> &Closure {
        if !self.memo.contains_key(key) {
            self.solve(key.clone());
        }
        &self.memo[key]
    }

    fn union_key(base: &[RuleId], extra: &[RuleId]) -> Key {
        let mut out = Vec::with_capacity(base.len() + extra.len());
        let (mut i, mut j) = (0, 0);
        while i < base.len() || j < extra.len() {
            let next = match (base.get(i), extra.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                    a
                }
                (Some(&a), Some(&b)) if a < b => {
                    i += 1;
                    a
                }
                (Some(_), Some(&b)) => {
                    j += 1;
                    b
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            out.push(next);
        }
        out.into()
    }

    /// Bases reachable from `root` through compound premises. With
    /// `skip_memo`, already solved bases are still expanded.
    fn reachable(&self, root: Key, skip_memo: bool) -> (Vec<Key>, HashMap<Key, usize>) {
        let mut order = vec![root.clone()];
        let mut index = HashMap::from([(root, 0usize)]);
        let mut cursor = 0;
        while cursor < order.len() {
            let key = order[cursor].clone();
            cursor += 1;
            for &r in key.iter() {
                for p in &self.rules[r as usize].premises {
                    if let Premise::Discharge { rules, .. } = p {
                        let ext = Self::union_key(&key, rules);
                        if index.contains_key(&ext) || (!skip_memo && self.memo.contains_key(&ext)) {
                            continue;
                        }
                        index.insert(ext.clone(), order.len());
                        order.push(ext);
                    }
                }
            }
        }
        (order, index)
    }

    fn solve(&mut self, root: Key) {
        let (order, index) = self.reachable(root, false);
        let mut state = vec![Closure::default(); order.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (i, key) in order.iter().enumerate() {
                if state[i].exploded {
                    continue;
                }
                for &r in key.iter() {
                    let node = &self.rules[r as usize];
                    if self.policy == BotPolicy::Explosion && node.conclusion == self.falsum {
                        continue;
                    }
                    if state[i].has(node.conclusion) {
                        continue;
                    }
                    let ok = node.premises.iter().all(|p| match p {
                        Premise::Atom(a) => state[i].has(*a),
                        Premise::Discharge { rules, conclusion } => {
                            let ext = Self::union_key(key, rules);
                            match index.get(&ext) {
                                Some(&j) => state[j].has(*conclusion),
                                None => self.memo[&ext].has(*conclusion),
                            }
                        }
                    });
                    if ok {
                        if node.conclusion == self.falsum {
                            state[i].exploded = true;
                        } else {
                            state[i].atoms.insert(node.conclusion as usize);
                        }
                        changed = true;
                    }
                }
            }
        }
        for (key, closure) in order.into_iter().zip(state) {
            self.memo.insert(key, closure);
        }
    }

    /// A well-founded derivation of `goal`, or `None` if it is not derivable.
    pub fn explain(&mut self, base: &Base, goal: &Atom) -> Option<Derivation> {
        if !self.derives(base, goal) {
            return None;
        }
        let root = self.key_of(base);
        let (order, index) = self.reachable(root.clone(), true);
        // justification per (base slot, atom): rule id and premise facts, or
        // explosion from `bot` in the same slot.
        #[derive(Clone)]
        enum Just {
            Rule(RuleId, Vec<(usize, AtomId)>),
            Explosion,
        }
        let mut just: Vec<HashMap<AtomId, Just>> = vec![HashMap::new(); order.len()];
        let falsum = self.falsum;
        let has = |just: &Vec<HashMap<AtomId, Just>>, slot: usize, a: AtomId| {
            just[slot].contains_key(&a) || just[slot].contains_key(&falsum)
        };
        let mut changed = true;
        while changed {
            changed = false;
            for (i, key) in order.iter().enumerate() {
                for &r in key.iter() {
                    let node = &self.rules[r as usize];
                    if self.policy == BotPolicy::Explosion && node.conclusion == falsum {
                        continue;
                    }
                    if just[i].contains_key(&node.conclusion) {
                        continue;
                    }
                    let mut facts = Vec::new();
                    let ok = node.premises.iter().all(|p| {
                        let (slot, a) = match p {
                            Premise::Atom(a) => (i, *a),
                            Premise::Discharge { rules, conclusion } => {
                                (index[&Self::union_key(key, rules)], *conclusion)
                            }
                        };
                        facts.push((slot, a));
                        has(&just, slot, a)
                    });
                    if ok {
                        just[i].insert(node.conclusion, Just::Rule(r, facts));
                        changed = true;
                    }
                }
            }
        }
        let root_set: BTreeSet<RuleId> = root.iter().copied().collect();
        let mut steps: Vec<DerivationStep> = Vec::new();
        let mut done: HashMap<(usize, AtomId), usize> = HashMap::new();
        // Iterative post-order over the justification graph.
        let goal_id = self.intern_atom(goal);
        let mut stack = vec![(0usize, goal_id, false)];
        while let Some((slot, a, expanded)) = stack.pop() {
            if done.contains_key(&(slot, a)) {
                continue;
            }
            let j = match just[slot].get(&a) {
                Some(j) => j.clone(),
                None => Just::Explosion,
            };
            let deps: Vec<(usize, AtomId)> = match &j {
                Just::Rule(_, facts) => facts.clone(),
                Just::Explosion => vec![(slot, falsum)],
            };
            if !expanded {
                stack.push((slot, a, true));
                for &(s, b) in deps.iter().rev() {
                    if !done.contains_key(&(s, b)) {
                        stack.push((s, b, false));
                    }
                }
                continue;
            }
            let context: Vec<Rule> = order[slot]
                .iter()
                .filter(|r| !root_set.contains(r))
                .map(|&r| self.rule_src[r as usize].clone())
                .collect();
            let step = DerivationStep {
                context,
                conclusion: self.atoms[a as usize].clone(),
                rule: match &j {
                    Just::Rule(r, _) => Some(self.rule_src[*r as usize].clone()),
                    Just::Explosion => None,
                },
                premises: deps.iter().map(|d| done[d]).collect(),
            };
            done.insert((slot, a), steps.len());
            steps.push(step);
        }
        Some(Derivation { steps })
    }
}

/// One rule application. `context` lists the discharged rules in force for
/// this step beyond the root base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub context: Vec<Rule>,
    pub conclusion: Atom,
    /// `None` marks the `bot`-to-anything step under [`BotPolicy::Atom`].
    pub rule: Option<Rule>,
    /// Indices of earlier steps, one per premise in canonical premise order.
    pub premises: Vec<usize>,
}

/// Derivation witness: steps in dependency order, the last one concluding
/// the goal in the root base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn conclusion(&self) -> &Atom {
        &self.steps.last().expect("derivations are nonempty").conclusion
    }

    /// Independently re-check every step against `base`.
    pub fn check(&self, base: &Base, policy: BotPolicy) -> bool {
        let Some(last) = self.steps.last() else {
            return false;
        };
        if !last.context.is_empty() {
            return false;
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.premises.iter().any(|&p| p >= i) {
                return false;
            }
            let here: BTreeSet<&Rule> = base.iter().chain(&step.context).collect();
            let in_context = |j: usize, extra: &BTreeSet<Rule>| {
                let there: BTreeSet<&Rule> = base.iter().chain(&self.steps[j].context).collect();
                let want: BTreeSet<&Rule> = here.iter().copied().chain(extra.iter()).collect();
                there == want
            };
            match &step.rule {
                None => {
                    if policy != BotPolicy::Atom || step.premises.len() != 1 {
                        return false;
                    }
                    let j = step.premises[0];
                    if !self.steps[j].conclusion.is_falsum() || !in_context(j, &BTreeSet::new()) {
                        return false;
                    }
                }
                Some(rule) => {
                    if !here.contains(rule) || rule.conclusion() != &step.conclusion {
                        return false;
                    }
                    if rule.conclusion().is_falsum() && policy == BotPolicy::Explosion {
                        return false;
                    }
                    if rule.premise_count() != step.premises.len() {
                        return false;
                    }
                    for (prem, &j) in rule.premises().zip(&step.premises) {
                        let ok = match prem {
                            Rule::Axiom(a) => &self.steps[j].conclusion == a && in_context(j, &BTreeSet::new()),
                            Rule::Compound { premises, conclusion } => {
                                &self.steps[j].conclusion == conclusion && in_context(j, premises)
                            }
                        };
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{i}:")?;
            if !s.context.is_empty() {
                let ctx: Base = s.context.iter().cloned().collect();
                write!(f, " +{ctx}")?;
            }
            write!(f, " {}", s.conclusion)?;
            match &s.rule {
                Some(r) => write!(f, " by {r}")?,
                None => f.write_str(" by explosion")?,
            }
            if !s.premises.is_empty() {
                let refs: Vec<String> = s.premises.iter().map(|p| p.to_string()).collect();
                write!(f, " from {}", refs.join(","))?;
            }
        }
        Ok(())
    }
}

pub fn derives(base: &Base, goal: &Atom, policy: BotPolicy) -> bool {
    Deriver::new(policy).derives(base, goal)
}

pub fn derivable_atoms(base: &Base, universe: &BTreeSet<Atom>, policy: BotPolicy) -> BTreeSet<Atom> {
    let mut d = Deriver::new(policy);
    universe.iter().filter(|a| d.derives(base, a)).cloned().collect()
}

pub fn derivation(base: &Base, goal: &Atom, policy: BotPolicy) -> Option<Derivation> {
    Deriver::new(policy).explain(base, goal)
}
