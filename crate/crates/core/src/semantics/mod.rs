//! Validity of formulas at a base of a system.
//!
//! Clauses: an atom is valid at `S` when `S` derives it; `A & B` when both
//! are; `A | B` when one is; `A -> B` when every extension of `S` in the
//! system validating `A` validates `B`. `bot` follows the [`BotPolicy`]:
//! under explosion it is valid where every atom of the system is derivable,
//! and then every atom counts as valid; under the atom policy it is valid
//! where `bot` itself is derivable.

mod certificate;
mod sets;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use certificate::{Certificate, Evidence, Goal, Node, ReplayError};
pub use sets::{SetAlgebra, MAX_ATOMS};

use crate::bits::BitSet;
use crate::rules::{Base, BotPolicy, Deriver};
use crate::syntax::{Atom, Formula};
use crate::systems::{BaseId, System, SystemError, DEFAULT_CAP};
use sets::{BOT, KNOWN};

/// Certificates stop growing past this many nodes.
pub const MAX_CERTIFICATE_NODES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("system has {count} atoms; at most {max} are supported")]
    TooManyAtoms { count: usize, max: usize },
    #[error("the optimized evaluator needs a generated system")]
    NotGenerated,
    #[error("universe of {size} rules is over {max}; use the optimized evaluator")]
    TooLargeForBruteForce { size: usize, max: usize },
    #[error("no systems given")]
    EmptySystemList,
}

/// A verdict with the certificate that justifies it. The certificate is
/// absent when it would exceed [`MAX_CERTIFICATE_NODES`] or when the
/// verdict came from the optimized evaluator.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub valid: bool,
    pub certificate: Option<Certificate>,
}

pub type FormulaId = usize;

#[derive(Clone, Copy, Debug)]
enum Shape {
    /// Index into the system atoms, `None` for an atom outside the system.
    Atom(Option<usize>),
    Bot,
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Imp(FormulaId, FormulaId),
}

/// Memoizing evaluator for one system and policy. Three routes share the
/// atomic facts: pointwise brute force ([`Evaluator::valid_at`]), whole
/// validity sets ([`Evaluator::validity_set`]), and the minimal-witness
/// evaluator ([`Evaluator::optimized_set`]).
pub struct Evaluator<'s> {
    sys: &'s System,
    policy: BotPolicy,
    deriver: Deriver,
    facts: Vec<u64>,
    shapes: Vec<Shape>,
    formulas: Vec<Formula>,
    ids: HashMap<Formula, FormulaId>,
    memo: HashMap<(BaseId, FormulaId), bool>,
    extensions: HashMap<BaseId, Arc<[BaseId]>>,
    algebra: Option<SetAlgebra<'s>>,
    sets: HashMap<FormulaId, Arc<BitSet>>,
    opt_sets: HashMap<FormulaId, Arc<BitSet>>,
}

/// Extension lists are cached only for systems up to this many bases.
const EXTENSION_CACHE_LIMIT: usize = 1 << 12;

impl<'s> Evaluator<'s> {
    pub fn new(sys: &'s System, policy: BotPolicy) -> Result<Self, SemanticsError> {
        sets::check_atoms(sys)?;
        Ok(Evaluator {
            sys,
            policy,
            deriver: Deriver::new(policy),
            facts: Vec::new(),
            shapes: Vec::new(),
            formulas: Vec::new(),
            ids: HashMap::new(),
            memo: HashMap::new(),
            extensions: HashMap::new(),
            algebra: None,
            sets: HashMap::new(),
            opt_sets: HashMap::new(),
        })
    }

    pub fn system(&self) -> &'s System {
        self.sys
    }

    pub fn policy(&self) -> BotPolicy {
        self.policy
    }

    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let shape = match f {
            Formula::Atom(a) => Shape::Atom(self.sys.atoms().binary_search(a).ok()),
            Formula::Bot => Shape::Bot,
            Formula::And(a, b) => Shape::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Shape::Or(self.intern(a), self.intern(b)),
            Formula::Imp(a, b) => Shape::Imp(self.intern(a), self.intern(b)),
        };
        let id = self.shapes.len();
        self.shapes.push(shape);
        self.formulas.push(f.clone());
        self.ids.insert(f.clone(), id);
        id
    }

    pub fn formula(&self, id: FormulaId) -> &Formula {
        &self.formulas[id]
    }

    fn fact(&mut self, id: BaseId) -> u64 {
        if self.facts.len() <= id {
            self.facts.resize(self.sys.base_count().max(id + 1), 0);
        }
        if self.facts[id] & KNOWN == 0 {
            self.facts[id] = sets::base_facts(self.sys, self.policy, &mut self.deriver, id);
        }
        self.facts[id]
    }

    fn atom_holds(word: u64, slot: Option<usize>) -> bool {
        match slot {
            Some(i) => word & (1 << i | BOT) != 0,
            None => word & BOT != 0,
        }
    }

    fn extension_list(&mut self, id: BaseId) -> Arc<[BaseId]> {
        if let Some(list) = self.extensions.get(&id) {
            return list.clone();
        }
        let list: Arc<[BaseId]> = self.sys.extension_ids(id).into();
        if self.sys.base_count() <= EXTENSION_CACHE_LIMIT {
            self.extensions.insert(id, list.clone());
        }
        list
    }

    fn check_brute_force(&self) -> Result<(), SemanticsError> {
        if self.sys.is_generated() && self.sys.universe().len() > DEFAULT_CAP {
            return Err(SemanticsError::TooLargeForBruteForce {
                size: self.sys.universe().len(),
                max: DEFAULT_CAP,
            });
        }
        Ok(())
    }

    /// Brute-force pointwise validity of an interned formula.
    pub fn valid_id(&mut self, base: BaseId, f: FormulaId) -> bool {
        match self.shapes[f] {
            Shape::Atom(slot) => {
                let w = self.fact(base);
                Self::atom_holds(w, slot)
            }
            Shape::Bot => self.fact(base) & BOT != 0,
            Shape::And(a, b) => self.valid_id(base, a) && self.valid_id(base, b),
            Shape::Or(a, b) => self.valid_id(base, a) || self.valid_id(base, b),
            Shape::Imp(a, b) => {
                if let Some(&v) = self.memo.get(&(base, f)) {
                    return v;
                }
                let v = self.counterexample(base, &[a], b).is_none();
                self.memo.insert((base, f), v);
                v
            }
        }
    }

    /// First extension (in canonical order) validating every assumption but
    /// not the conclusion.
    fn counterexample(&mut self, base: BaseId, hyps: &[FormulaId], concl: FormulaId) -> Option<BaseId> {
        let exts = self.extension_list(base);
        exts.iter()
            .copied()
            .find(|&e| hyps.iter().all(|&h| self.valid_id(e, h)) && !self.valid_id(e, concl))
    }

    pub fn valid_at(&mut self, base: BaseId, f: &Formula) -> bool {
        let id = self.intern(f);
        self.valid_id(base, id)
    }

    /// Consequence at `base`: every extension validating all assumptions
    /// validates the conclusion.
    pub fn entails_at(&mut self, base: BaseId, assumptions: &[Formula], conclusion: &Formula) -> bool {
        self.entailment_counterexample(base, assumptions, conclusion).is_none()
    }

    pub fn entailment_counterexample(
        &mut self,
        base: BaseId,
        assumptions: &[Formula],
        conclusion: &Formula,
    ) -> Option<BaseId> {
        let hyps: Vec<FormulaId> = assumptions.iter().map(|h| self.intern(h)).collect();
        let c = self.intern(conclusion);
        self.counterexample(base, &hyps, c)
    }

    /// Shared set algebra; facts for every base are computed on first use.
    pub fn algebra(&mut self) -> &SetAlgebra<'s> {
        if self.algebra.is_none() {
            let algebra = SetAlgebra::new(self.sys, self.policy).expect("atom count checked at construction");
            self.algebra = Some(algebra);
        }
        self.algebra.as_ref().expect("just built")
    }

    /// The set of bases where `f` is valid, by superset transforms.
    pub fn validity_set(&mut self, f: &Formula) -> Arc<BitSet> {
        let id = self.intern(f);
        self.set_of(id, false)
    }

    /// The set of bases where `f` is valid, evaluating each implication
    /// from the minimal bases validating its antecedent. Generated systems
    /// only.
    pub fn optimized_set(&mut self, f: &Formula) -> Result<Arc<BitSet>, SemanticsError> {
        if !self.sys.is_generated() {
            return Err(SemanticsError::NotGenerated);
        }
        let id = self.intern(f);
        Ok(self.set_of(id, true))
    }

    fn set_of(&mut self, f: FormulaId, witnesses: bool) -> Arc<BitSet> {
        let cached = if witnesses {
            self.opt_sets.get(&f)
        } else {
            self.sets.get(&f)
        };
        if let Some(s) = cached {
            return s.clone();
        }
        let set = match self.shapes[f] {
            Shape::Atom(slot) => self.algebra().atom_set(slot),
            Shape::Bot => self.algebra().bot_set(),
            Shape::And(a, b) => {
                let (x, y) = (self.set_of(a, witnesses), self.set_of(b, witnesses));
                self.algebra().and(&x, &y)
            }
            Shape::Or(a, b) => {
                let (x, y) = (self.set_of(a, witnesses), self.set_of(b, witnesses));
                self.algebra().or(&x, &y)
            }
            Shape::Imp(a, b) => {
                let (x, y) = (self.set_of(a, witnesses), self.set_of(b, witnesses));
                if witnesses {
                    sets::imp_by_witnesses(&x, &y)
                } else {
                    self.algebra().imp(&x, &y)
                }
            }
        };
        let set = Arc::new(set);
        if witnesses {
            self.opt_sets.insert(f, set.clone());
        } else {
            self.sets.insert(f, set.clone());
        }
        set
    }

    /// Valid at every base, via the validity set.
    pub fn ptv(&mut self, f: &Formula) -> bool {
        self.validity_set(f).is_full()
    }

    /// First base in canonical order where `f` fails, if any.
    pub fn first_failing_base(&mut self, f: &Formula) -> Option<BaseId> {
        let set = self.validity_set(f);
        self.sys.ids_in_order().into_iter().find(|&id| !set.contains(id))
    }

    /// Certificate for `goal` at `base` (ignored for [`Goal::Everywhere`]),
    /// built from the brute-force evaluation.
    pub fn certify(&mut self, base: BaseId, goal: &Goal) -> Option<Certificate> {
        let mut b = Builder {
            nodes: Vec::new(),
            seen: HashMap::new(),
        };
        let ok = match goal {
            Goal::Formula(f) => {
                let id = self.intern(f);
                self.cert_formula(&mut b, base, id).is_some()
            }
            Goal::Entails(hyps, c) => self.cert_entails(&mut b, base, hyps, c).is_some(),
            Goal::Everywhere(f) => self.cert_everywhere(&mut b, f).is_some(),
        };
        ok.then(|| Certificate {
            system: self.sys.name().to_string(),
            policy: self.policy,
            notes: Vec::new(),
            nodes: b.nodes,
        })
    }

    fn cert_formula(&mut self, b: &mut Builder, base: BaseId, f: FormulaId) -> Option<usize> {
        if let Some(&n) = b.seen.get(&(base, f)) {
            return Some(n);
        }
        let valid = self.valid_id(base, f);
        let evidence = match self.shapes[f] {
            Shape::Atom(slot) => {
                let word = self.fact(base);
                let atom = self.formulas[f].as_atom().expect("atom shape").clone();
                let derived = match slot {
                    Some(i) => word & (1 << i) != 0,
                    None => false,
                };
                if derived || (valid && self.policy == BotPolicy::Atom) {
                    let d = self.deriver.explain(&self.sys.base(base), &atom).expect("derivable");
                    Evidence::Derived(d)
                } else if valid {
                    let bot = self.intern(&Formula::Bot);
                    Evidence::Explosion(self.cert_formula(b, base, bot)?)
                } else {
                    Evidence::NotDerivable
                }
            }
            Shape::Bot => match self.policy {
                BotPolicy::Atom if valid => {
                    let d = self
                        .deriver
                        .explain(&self.sys.base(base), &Atom::falsum())
                        .expect("derivable");
                    Evidence::Derived(d)
                }
                BotPolicy::Atom => Evidence::NotDerivable,
                BotPolicy::Explosion => {
                    let atoms: Vec<FormulaId> = self
                        .sys
                        .atoms()
                        .iter()
                        .map(|a| self.intern(&Formula::Atom(a.clone())))
                        .collect();
                    if valid {
                        let mut list = Vec::with_capacity(atoms.len());
                        for a in atoms {
                            list.push(self.cert_formula(b, base, a)?);
                        }
                        Evidence::AllAtoms(list)
                    } else {
                        let failing = atoms
                            .into_iter()
                            .find(|&a| !self.valid_id(base, a))
                            .expect("some atom fails");
                        Evidence::AtomFails(self.cert_formula(b, base, failing)?)
                    }
                }
            },
            Shape::And(x, y) => {
                if valid {
                    Evidence::Both(self.cert_formula(b, base, x)?, self.cert_formula(b, base, y)?)
                } else {
                    let failing = if self.valid_id(base, x) { y } else { x };
                    Evidence::ConjunctFails(self.cert_formula(b, base, failing)?)
                }
            }
            Shape::Or(x, y) => {
                if valid {
                    let holding = if self.valid_id(base, x) { x } else { y };
                    Evidence::Disjunct(self.cert_formula(b, base, holding)?)
                } else {
                    Evidence::Neither(self.cert_formula(b, base, x)?, self.cert_formula(b, base, y)?)
                }
            }
            Shape::Imp(x, y) => self.cert_extensions(b, base, &[x], y)?,
        };
        b.push(
            Some(self.sys.base(base)),
            Goal::Formula(self.formulas[f].clone()),
            valid,
            evidence,
        )
        .inspect(|&n| {
            b.seen.insert((base, f), n);
        })
    }

    fn cert_extensions(
        &mut self,
        b: &mut Builder,
        base: BaseId,
        hyps: &[FormulaId],
        concl: FormulaId,
    ) -> Option<Evidence> {
        match self.counterexample(base, hyps, concl) {
            Some(e) => {
                let mut list = Vec::with_capacity(hyps.len() + 1);
                for &h in hyps {
                    list.push(self.cert_formula(b, e, h)?);
                }
                list.push(self.cert_formula(b, e, concl)?);
                Some(Evidence::Counterexample(list))
            }
            None => {
                let exts = self.extension_list(base);
                let mut list = Vec::with_capacity(exts.len());
                for &e in exts.iter() {
                    let n = match hyps.iter().find(|&&h| !self.valid_id(e, h)) {
                        Some(&h) => self.cert_formula(b, e, h)?,
                        None => self.cert_formula(b, e, concl)?,
                    };
                    list.push(n);
                }
                Some(Evidence::Extensions(list))
            }
        }
    }

    fn cert_entails(&mut self, b: &mut Builder, base: BaseId, hyps: &[Formula], c: &Formula) -> Option<usize> {
        let hyp_ids: Vec<FormulaId> = hyps.iter().map(|h| self.intern(h)).collect();
        let cid = self.intern(c);
        let evidence = self.cert_extensions(b, base, &hyp_ids, cid)?;
        let valid = matches!(evidence, Evidence::Extensions(_));
        b.push(
            Some(self.sys.base(base)),
            Goal::Entails(hyps.to_vec(), c.clone()),
            valid,
            evidence,
        )
    }

    fn cert_everywhere(&mut self, b: &mut Builder, f: &Formula) -> Option<usize> {
        let id = self.intern(f);
        let order = self.sys.ids_in_order();
        let evidence = match order.iter().copied().find(|&s| !self.valid_id(s, id)) {
            Some(s) => Evidence::FailsAt(self.cert_formula(b, s, id)?),
            None => {
                let mut list = Vec::with_capacity(order.len());
                for s in order {
                    list.push(self.cert_formula(b, s, id)?);
                }
                Evidence::AllBases(list)
            }
        };
        let valid = matches!(evidence, Evidence::AllBases(_));
        b.push(None, Goal::Everywhere(f.clone()), valid, evidence)
    }
}

struct Builder {
    nodes: Vec<Node>,
    seen: HashMap<(BaseId, FormulaId), usize>,
}

impl Builder {
    fn push(&mut self, base: Option<Base>, goal: Goal, valid: bool, evidence: Evidence) -> Option<usize> {
        if self.nodes.len() >= MAX_CERTIFICATE_NODES {
            return None;
        }
        self.nodes.push(Node {
            base,
            goal,
            valid,
            evidence,
        });
        Some(self.nodes.len() - 1)
    }
}

/// Validity of `f` at `base`, by brute force, with a certificate.
pub fn valid(sys: &System, base: &Base, f: &Formula, policy: BotPolicy) -> Result<Verdict, SemanticsError> {
    let id = sys.require(base)?;
    let mut ev = Evaluator::new(sys, policy)?;
    ev.check_brute_force()?;
    let valid = ev.valid_at(id, f);
    let certificate = ev.certify(id, &Goal::Formula(f.clone()));
    Ok(Verdict { valid, certificate })
}

/// Same boolean as [`valid`], from the minimal-witness evaluator.
pub fn valid_optimized(sys: &System, base: &Base, f: &Formula, policy: BotPolicy) -> Result<Verdict, SemanticsError> {
    let id = sys.require(base)?;
    let mut ev = Evaluator::new(sys, policy)?;
    let set = ev.optimized_set(f)?;
    Ok(Verdict {
        valid: set.contains(id),
        certificate: None,
    })
}

/// Every extension of `base` validating all assumptions validates the
/// conclusion.
pub fn consequence(
    sys: &System,
    base: &Base,
    assumptions: &[Formula],
    conclusion: &Formula,
    policy: BotPolicy,
) -> Result<Verdict, SemanticsError> {
    let id = sys.require(base)?;
    let mut ev = Evaluator::new(sys, policy)?;
    ev.check_brute_force()?;
    let valid = ev.entails_at(id, assumptions, conclusion);
    let certificate = ev.certify(id, &Goal::Entails(assumptions.to_vec(), conclusion.clone()));
    Ok(Verdict { valid, certificate })
}

/// Valid at every base of the system.
pub fn ptv_valid(sys: &System, f: &Formula, policy: BotPolicy) -> Result<Verdict, SemanticsError> {
    let mut ev = Evaluator::new(sys, policy)?;
    let valid = ev.ptv(f);
    let certificate = if sys.base_count() <= EXTENSION_CACHE_LIMIT {
        ev.certify(0, &Goal::Everywhere(f.clone()))
    } else {
        None
    };
    Ok(Verdict { valid, certificate })
}

/// Per-system outcome of [`gptv_valid`].
#[derive(Clone, Debug)]
pub struct SystemVerdict {
    pub system: String,
    pub valid: bool,
}

#[derive(Clone, Debug)]
pub struct GeneralVerdict {
    pub valid: bool,
    pub per_system: Vec<SystemVerdict>,
    /// Index of the first system where the formula fails.
    pub first_failure: Option<usize>,
    /// Certificate from the first failing system, or from the last one when
    /// all hold.
    pub certificate: Option<Certificate>,
}

/// Valid in every base of every listed system.
pub fn gptv_valid(systems: &[System], f: &Formula, policy: BotPolicy) -> Result<GeneralVerdict, SemanticsError> {
    if systems.is_empty() {
        return Err(SemanticsError::EmptySystemList);
    }
    let mut per_system = Vec::with_capacity(systems.len());
    let mut first_failure = None;
    let mut certificate = None;
    for (i, sys) in systems.iter().enumerate() {
        let v = ptv_valid(sys, f, policy)?;
        if !v.valid && first_failure.is_none() {
            first_failure = Some(i);
            certificate = v.certificate;
        } else if first_failure.is_none() {
            certificate = v.certificate;
        }
        per_system.push(SystemVerdict {
            system: sys.name().to_string(),
            valid: v.valid,
        });
    }
    Ok(GeneralVerdict {
        valid: first_failure.is_none(),
        per_system,
        first_failure,
        certificate,
    })
}
