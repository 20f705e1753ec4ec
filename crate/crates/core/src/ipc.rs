//! Intuitionistic propositional logic: a contraction-free sequent prover and
//! a bounded search for Kripke countermodels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{atoms_of, Atom, Formula};

type Id = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Atom(u32),
    Bot,
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
}

/// Decision procedure for intuitionistic provability. Formulas are
/// hash-consed and sequents memoized, so one prover can be reused across
/// many queries.
#[derive(Default)]
pub struct Prover {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    atoms: HashMap<Atom, u32>,
    memo: HashMap<(Vec<Id>, Id), bool>,
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    fn mk(&mut self, n: Node) -> Id {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    fn intern(&mut self, f: &Formula) -> Id {
        let n = match f {
            Formula::Atom(a) => {
                let next = self.atoms.len() as u32;
                Node::Atom(*self.atoms.entry(a.clone()).or_insert(next))
            }
            Formula::Bot => Node::Bot,
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Imp(a, b) => Node::Imp(self.intern(a), self.intern(b)),
        };
        self.mk(n)
    }

    pub fn provable(&mut self, f: &Formula) -> bool {
        let goal = self.intern(f);
        self.prove(Vec::new(), goal)
    }

    /// `assumptions ⊢ goal` in intuitionistic logic.
    pub fn entails(&mut self, assumptions: &[Formula], goal: &Formula) -> bool {
        let ctx = assumptions.iter().map(|a| self.intern(a)).collect();
        let goal = self.intern(goal);
        self.prove(normal(ctx), goal)
    }

    fn prove(&mut self, ctx: Vec<Id>, goal: Id) -> bool {
        let key = (ctx, goal);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (ctx, goal) = key;
        let v = self.search(&ctx, goal);
        self.memo.insert((ctx, goal), v);
        v
    }

    fn search(&mut self, ctx: &[Id], goal: Id) -> bool {
        if ctx.contains(&goal) {
            return true;
        }
        // Invertible left rules.
        for (i, &f) in ctx.iter().enumerate() {
            let rest = || without(ctx, i);
            match self.nodes[f as usize] {
                Node::Bot => return true,
                Node::And(a, b) => return self.prove(with(rest(), &[a, b]), goal),
                Node::Or(a, b) => {
                    return self.prove(with(rest(), &[a]), goal) && self.prove(with(rest(), &[b]), goal);
                }
                Node::Imp(a, b) => match self.nodes[a as usize] {
                    Node::Bot => return self.prove(rest(), goal),
                    Node::Atom(_) if ctx.contains(&a) => return self.prove(with(rest(), &[b]), goal),
                    Node::And(c, d) => {
                        let db = self.mk(Node::Imp(d, b));
                        let cdb = self.mk(Node::Imp(c, db));
                        return self.prove(with(rest(), &[cdb]), goal);
                    }
                    Node::Or(c, d) => {
                        let cb = self.mk(Node::Imp(c, b));
                        let db = self.mk(Node::Imp(d, b));
                        return self.prove(with(rest(), &[cb, db]), goal);
                    }
                    _ => {}
                },
                Node::Atom(_) => {}
            }
        }
        // Right rules.
        match self.nodes[goal as usize] {
            Node::And(a, b) => return self.prove(ctx.to_vec(), a) && self.prove(ctx.to_vec(), b),
            Node::Imp(a, b) => return self.prove(with(ctx.to_vec(), &[a]), b),
            Node::Or(a, b) => {
                if self.prove(ctx.to_vec(), a) || self.prove(ctx.to_vec(), b) {
                    return true;
                }
            }
            Node::Atom(_) | Node::Bot => {}
        }
        // Left implication with an implication antecedent.
        for (i, &f) in ctx.iter().enumerate() {
            let Node::Imp(ant, b) = self.nodes[f as usize] else {
                continue;
            };
            let Node::Imp(_, d) = self.nodes[ant as usize] else {
                continue;
            };
            let db = self.mk(Node::Imp(d, b));
            if self.prove(with(without(ctx, i), &[db]), ant) && self.prove(with(without(ctx, i), &[b]), goal) {
                return true;
            }
        }
        false
    }
}

fn normal(mut v: Vec<Id>) -> Vec<Id> {
    v.sort_unstable();
    v.dedup();
    v
}

fn without(ctx: &[Id], i: usize) -> Vec<Id> {
    let mut v = ctx.to_vec();
    v.remove(i);
    v
}

fn with(mut ctx: Vec<Id>, add: &[Id]) -> Vec<Id> {
    ctx.extend_from_slice(add);
    normal(ctx)
}

/// Intuitionistic provability of `f`.
pub fn ipc_provable(f: &Formula) -> bool {
    Prover::new().provable(f)
}

/// A finite rooted tree of worlds with a persistent valuation. World 0 is
/// the root and every other world's parent has a smaller index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    parent: Vec<Option<usize>>,
    valuation: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    /// Fails unless `parent` describes a tree rooted at 0 with parents
    /// before children and the valuation is persistent along it.
    pub fn new(parent: Vec<Option<usize>>, valuation: Vec<BTreeSet<Atom>>) -> Option<KripkeModel> {
        let ok = !parent.is_empty()
            && parent.len() == valuation.len()
            && parent[0].is_none()
            && parent
                .iter()
                .enumerate()
                .skip(1)
                .all(|(i, p)| matches!(p, Some(q) if *q < i))
            && (1..parent.len()).all(|i| valuation[parent[i].unwrap()].is_subset(&valuation[i]));
        ok.then_some(KripkeModel { parent, valuation })
    }

    pub fn worlds(&self) -> usize {
        self.parent.len()
    }

    pub fn valuation(&self, w: usize) -> &BTreeSet<Atom> {
        &self.valuation[w]
    }

    pub fn parent(&self, w: usize) -> Option<usize> {
        self.parent[w]
    }

    /// The reflexive-transitive accessibility relation.
    pub fn leq(&self, w: usize, mut v: usize) -> bool {
        loop {
            if v == w {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    pub fn forces(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => self.valuation[w].contains(a),
            Formula::Bot => false,
            Formula::And(a, b) => self.forces(w, a) && self.forces(w, b),
            Formula::Or(a, b) => self.forces(w, a) || self.forces(w, b),
            Formula::Imp(a, b) => (0..self.worlds())
                .filter(|&v| self.leq(w, v))
                .all(|v| !self.forces(v, a) || self.forces(v, b)),
        }
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let worlds: Vec<String> = (0..self.worlds()).map(|w| format!("w{w}")).collect();
        writeln!(f, "worlds: {}", worlds.join(" "))?;
        let edges: Vec<String> = (1..self.worlds())
            .map(|w| format!("w{} <= w{w}", self.parent[w].unwrap()))
            .collect();
        if edges.is_empty() {
            writeln!(f, "order: (reflexive only)")?;
        } else {
            writeln!(f, "order: {} (reflexive, transitive closure)", edges.join(", "))?;
        }
        for (w, val) in self.valuation.iter().enumerate() {
            let atoms: Vec<&str> = val.iter().map(Atom::name).collect();
            if atoms.is_empty() {
                writeln!(f, "w{w}: (nothing)")?;
            } else {
                writeln!(f, "w{w}: {}", atoms.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Subformulas of one formula, children before parents, evaluated as world
/// bitmasks over a tree of at most 64 worlds.
struct Compiled {
    ops: Vec<Op>,
}

#[derive(Clone, Copy)]
enum Op {
    Atom(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

impl Compiled {
    fn new(f: &Formula, atoms: &[Atom]) -> Compiled {
        let mut c = Compiled { ops: Vec::new() };
        let mut seen = HashMap::new();
        c.push(f, atoms, &mut seen);
        c
    }

    fn push(&mut self, f: &Formula, atoms: &[Atom], seen: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let op = match f {
            Formula::Atom(a) => Op::Atom(atoms.binary_search(a).expect("atom collected")),
            Formula::Bot => Op::Bot,
            Formula::And(a, b) => Op::And(self.push(a, atoms, seen), self.push(b, atoms, seen)),
            Formula::Or(a, b) => Op::Or(self.push(a, atoms, seen), self.push(b, atoms, seen)),
            Formula::Imp(a, b) => Op::Imp(self.push(a, atoms, seen), self.push(b, atoms, seen)),
        };
        self.ops.push(op);
        seen.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    /// Whether the root forces the formula. `up[w]` is the mask of worlds
    /// above `w`, `val[w]` the atom mask at `w`.
    fn root_forces(&self, up: &[u64], val: &[u32], scratch: &mut Vec<u64>) -> bool {
        let n = up.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        scratch.clear();
        for op in &self.ops {
            let m = match *op {
                Op::Atom(i) => (0..n).filter(|&w| val[w] >> i & 1 == 1).fold(0, |m, w| m | 1 << w),
                Op::Bot => 0,
                Op::And(a, b) => scratch[a] & scratch[b],
                Op::Or(a, b) => scratch[a] | scratch[b],
                Op::Imp(a, b) => {
                    let bad = scratch[a] & !scratch[b] & all;
                    (0..n).filter(|&w| up[w] & bad == 0).fold(0, |m, w| m | 1 << w)
                }
            };
            scratch.push(m);
        }
        scratch.last().is_some_and(|m| m & 1 == 1)
    }
}

/// Visits every plane tree on `n` nodes as a parent array with nodes in
/// pre-order.
fn for_each_tree(n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(parent: &mut Vec<usize>, n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if parent.len() == n {
            return visit(parent);
        }
        // The next node hangs off the rightmost path.
        let mut v = parent.len() - 1;
        loop {
            parent.push(v);
            if go(parent, n, visit) {
                return true;
            }
            parent.pop();
            if v == 0 {
                return false;
            }
            v = parent[v];
        }
    }
    let mut parent = vec![0];
    go(&mut parent, n, visit)
}

/// A tree model with at most `max_worlds` worlds whose root does not force
/// `f`, searching smaller models first.
pub fn kripke_counterexample(f: &Formula, max_worlds: usize) -> Option<KripkeModel> {
    let atoms: Vec<Atom> = atoms_of(f).into_iter().filter(|a| !a.is_falsum()).collect();
    assert!(atoms.len() <= 16, "too many atoms for countermodel search");
    let compiled = Compiled::new(f, &atoms);
    let full: u32 = (1u32 << atoms.len()) - 1;
    let mut scratch = Vec::new();
    for n in 1..=max_worlds.min(64) {
        let mut found = None;
        for_each_tree(n, &mut |parent| {
            let mut up = vec![0u64; n];
            for w in (0..n).rev() {
                up[w] |= 1 << w;
                if w > 0 {
                    let p = parent[w];
                    up[p] |= up[w];
                }
            }
            let mut val = vec![0u32; n];
            if assign(parent, &mut val, full, &mut |val| {
                !compiled.root_forces(&up, val, &mut scratch)
            }) {
                found = Some((parent.to_vec(), val));
                return true;
            }
            false
        });
        if let Some((parent, val)) = found {
            let parent = parent.iter().enumerate().map(|(i, &p)| (i > 0).then_some(p)).collect();
            let valuation = val
                .iter()
                .map(|&m| {
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 == 1)
                        .map(|(_, a)| a.clone())
                        .collect()
                })
                .collect();
            return Some(KripkeModel { parent, valuation });
        }
    }
    None
}

/// Tries every persistent valuation on the tree until `test` accepts one.
fn assign(parent: &[usize], val: &mut [u32], full: u32, test: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    (0..=full).any(|root| {
        val[0] = root;
        assign_rest(1, parent, val, full, test)
    })
}

fn assign_rest(w: usize, parent: &[usize], val: &mut [u32], full: u32, test: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    if w == val.len() {
        return test(val);
    }
    let base = val[parent[w]];
    let free = full & !base;
    // Enumerate supersets of the parent's valuation.
    let mut extra = 0u32;
    loop {
        val[w] = base | extra;
        if assign_rest(w + 1, parent, val, full, test) {
            return true;
        }
        if extra == free {
            return false;
        }
        extra = (extra.wrapping_sub(free)) & free;
    }
}
