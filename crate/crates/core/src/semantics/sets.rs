//! Validity sets: one bit per base of a system.
//!
//! The implication clause at `S` quantifies over all extensions of `S`, so
//! `valid(A -> B)` is the set of bases all of whose supersets lie in
//! `!valid(A) | valid(B)`. For a generated system that is a superset-AND
//! transform over the bitmask lattice; for an explicit one it walks the
//! precomputed superset lists.

use rayon::prelude::*;

use crate::bits::BitSet;
use crate::rules::{BotPolicy, Deriver};
use crate::systems::{BaseId, System};

use super::SemanticsError;

/// Fact word bit: `bot` is valid at the base.
pub(crate) const BOT: u64 = 1 << 63;
/// Fact word bit: the word has been computed.
pub(crate) const KNOWN: u64 = 1 << 62;
/// Largest number of system atoms a fact word can hold.
pub const MAX_ATOMS: usize = 62;

/// Derivable system atoms at one base, packed into a word; bit `i` stands
/// for `sys.atoms()[i]`.
pub(crate) fn base_facts(sys: &System, policy: BotPolicy, deriver: &mut Deriver, id: BaseId) -> u64 {
    let base = sys.base(id);
    let key = deriver.key_of(&base);
    let n = sys.atoms().len();
    let all = (1u64 << n) - 1;
    let mut word = KNOWN;
    match policy {
        BotPolicy::Atom if deriver.derives_key(&key, &crate::syntax::Atom::falsum()) => {
            word |= all | BOT;
        }
        _ => {
            for (i, a) in sys.atoms().iter().enumerate() {
                if deriver.derives_key(&key, a) {
                    word |= 1 << i;
                }
            }
            if policy == BotPolicy::Explosion && word & all == all {
                word |= BOT;
            }
        }
    }
    word
}

/// Fact words for every base, computed in parallel.
pub(crate) fn all_facts(sys: &System, policy: BotPolicy) -> Vec<u64> {
    let count = sys.base_count();
    let chunk = (count / (rayon::current_num_threads() * 4)).clamp(64, 1 << 14);
    let ids: Vec<BaseId> = (0..count).collect();
    ids.par_chunks(chunk)
        .flat_map_iter(|ids| {
            let mut deriver = Deriver::new(policy);
            ids.iter()
                .map(|&id| base_facts(sys, policy, &mut deriver, id))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Set operations over one system's bases. Immutable and shareable across
/// worker threads.
#[derive(Clone, Debug)]
pub struct SetAlgebra<'s> {
    sys: &'s System,
    policy: BotPolicy,
    facts: Vec<u64>,
}

impl<'s> SetAlgebra<'s> {
    pub fn new(sys: &'s System, policy: BotPolicy) -> Result<Self, SemanticsError> {
        check_atoms(sys)?;
        Ok(SetAlgebra {
            sys,
            policy,
            facts: all_facts(sys, policy),
        })
    }

    pub fn system(&self) -> &'s System {
        self.sys
    }

    pub fn policy(&self) -> BotPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Bases where the atom is valid. `None` names an atom outside the
    /// system, which is valid only where `bot` is.
    pub fn atom_set(&self, slot: Option<usize>) -> BitSet {
        let bit = match slot {
            Some(i) => 1u64 << i,
            None => BOT,
        };
        self.where_facts(|w| w & (bit | BOT) != 0)
    }

    pub fn bot_set(&self) -> BitSet {
        self.where_facts(|w| w & BOT != 0)
    }

    fn where_facts(&self, pred: impl Fn(u64) -> bool) -> BitSet {
        let mut out = BitSet::new(self.facts.len());
        for (i, &w) in self.facts.iter().enumerate() {
            if pred(w) {
                out.insert(i);
            }
        }
        out
    }

    pub fn and(&self, a: &BitSet, b: &BitSet) -> BitSet {
        let mut out = a.clone();
        out.intersect_with(b);
        out
    }

    pub fn or(&self, a: &BitSet, b: &BitSet) -> BitSet {
        let mut out = a.clone();
        out.union_with(b);
        out
    }

    /// Bases where `A -> B` is valid, given the sets of `A` and `B`.
    pub fn imp(&self, a: &BitSet, b: &BitSet) -> BitSet {
        let mut x = a.clone();
        x.implies_with(b);
        self.all_extensions(x)
    }

    /// `{S | every extension of S is in x}`.
    pub fn all_extensions(&self, x: BitSet) -> BitSet {
        all_extensions(self.sys, x)
    }
}

pub(crate) fn check_atoms(sys: &System) -> Result<(), SemanticsError> {
    if sys.atoms().len() > MAX_ATOMS {
        return Err(SemanticsError::TooManyAtoms {
            count: sys.atoms().len(),
            max: MAX_ATOMS,
        });
    }
    Ok(())
}

/// Within a word, positions whose bit `i` is clear, for `i < 6`.
const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

pub(crate) fn all_extensions(sys: &System, mut x: BitSet) -> BitSet {
    if sys.is_generated() {
        let n = sys.universe().len();
        let words = x.words_mut();
        for (i, &clear) in LOW_MASKS.iter().enumerate().take(n.min(6)) {
            let shift = 1u32 << i;
            for w in words.iter_mut() {
                let partner = (*w >> shift) & clear;
                *w &= partner | !clear;
            }
        }
        for i in 6..n {
            let stride = 1usize << (i - 6);
            for j in 0..words.len() {
                if j & stride == 0 {
                    words[j] &= words[j + stride];
                }
            }
        }
        x
    } else {
        let mut out = BitSet::new(x.len());
        for id in 0..x.len() {
            if sys.extension_ids(id).iter().all(|&e| x.contains(e)) {
                out.insert(id);
            }
        }
        out
    }
}

/// Minimal members of an up-closed set of bitmask bases.
pub(crate) fn minimal_masks(set: &BitSet) -> Vec<BaseId> {
    set.ones()
        .filter(|&s| {
            let mut m = s;
            while m != 0 {
                let bit = m & m.wrapping_neg();
                if set.contains(s & !bit) {
                    return false;
                }
                m &= m - 1;
            }
            true
        })
        .collect()
}

/// `A -> B` over a generated system from the minimal bases validating `A`:
/// by monotonicity `A -> B` holds at `S` iff `B` holds at `S | m` for every
/// minimal `m`.
pub(crate) fn imp_by_witnesses(a: &BitSet, b: &BitSet) -> BitSet {
    let mins = minimal_masks(a);
    let mut out = BitSet::new(a.len());
    for s in 0..a.len() {
        if mins.iter().all(|&m| b.contains(s | m)) {
            out.insert(s);
        }
    }
    out
}
