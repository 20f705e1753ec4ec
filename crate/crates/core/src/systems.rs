//! Proof-theoretic systems: finite families of bases ordered by inclusion.
//!
//! An explicit system lists its bases. A generated system is the full
//! powerset of a rule universe, so a base is a bitmask over the universe and
//! the family is closed under unions and single-rule extensions.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::ParseError;
use crate::rules::{parse_base_file, parse_rule_with, Base, Rule, ALLOW_BOT_HEADER};
use crate::syntax::Atom;

/// Index of a base inside its system. Explicit systems number bases in the
/// order they were given; generated systems use the bitmask over the
/// universe.
pub type BaseId = usize;

/// Default bound on the size of a generated universe.
pub const DEFAULT_CAP: usize = 20;
/// Hard bound on the size of a generated universe, whatever the cap says.
pub const MAX_CAP: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("rule universe has {size} rules, over the cap of {cap}")]
    UniverseTooLarge { size: String, cap: usize },
    #[error("base {0} is not a member of the system")]
    BaseNotInSystem(Base),
    #[error("base index {index} out of range (system has {count} bases)")]
    BaseIndexOutOfRange { index: usize, count: usize },
    #[error("base {index} repeats an earlier base")]
    DuplicateBase { index: usize },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("system file: {0}")]
    Format(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Parameters of a generated universe. With `explicit_universe` set the
/// other bounds are ignored and the listed rules form the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub atoms: BTreeSet<Atom>,
    pub max_level: usize,
    pub max_premises: usize,
    pub explicit_universe: Option<Vec<Rule>>,
    pub cap: usize,
}

impl GeneratorSpec {
    pub fn new(atoms: impl IntoIterator<Item = Atom>, max_level: usize, max_premises: usize) -> Self {
        GeneratorSpec {
            atoms: atoms.into_iter().collect(),
            max_level,
            max_premises,
            explicit_universe: None,
            cap: DEFAULT_CAP,
        }
    }

    pub fn from_universe(rules: impl IntoIterator<Item = Rule>) -> Self {
        GeneratorSpec {
            atoms: BTreeSet::new(),
            max_level: 0,
            max_premises: 0,
            explicit_universe: Some(rules.into_iter().collect()),
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Explicit {
        bases: Vec<Base>,
        index: HashMap<Base, BaseId>,
        /// Base ids in canonical order.
        order: Vec<BaseId>,
        /// Per base, the ids of its supersets in canonical order.
        supersets: Vec<Vec<BaseId>>,
    },
    Generated {
        spec: GeneratorSpec,
        rule_index: HashMap<Rule, usize>,
    },
}

/// A finite family of bases; extensions are supersets within the family.
#[derive(Clone, Debug)]
pub struct System {
    name: String,
    kind: Kind,
    /// Non-`bot` atoms the system talks about; `bot` under explosion means
    /// all of these are derivable.
    atoms: Vec<Atom>,
    /// Every rule occurring in the family, sorted.
    rules: Vec<Rule>,
}

impl System {
    /// An explicit family. Bases keep their given order for indexing.
    pub fn explicit(bases: Vec<Base>) -> Result<System, SystemError> {
        let mut index = HashMap::new();
        for (i, b) in bases.iter().enumerate() {
            if index.insert(b.clone(), i).is_some() {
                return Err(SystemError::DuplicateBase { index: i });
            }
        }
        let mut order: Vec<BaseId> = (0..bases.len()).collect();
        order.sort_by(|&a, &b| bases[a].canonical_cmp(&bases[b]));
        let supersets = (0..bases.len())
            .map(|i| {
                order
                    .iter()
                    .copied()
                    .filter(|&j| bases[i].is_subset(&bases[j]))
                    .collect()
            })
            .collect();
        let rules: BTreeSet<Rule> = bases.iter().flat_map(|b| b.iter().cloned()).collect();
        let atoms = atoms_of_rules(&rules, &BTreeSet::new());
        Ok(System {
            name: "explicit".into(),
            kind: Kind::Explicit {
                bases,
                index,
                order,
                supersets,
            },
            atoms,
            rules: rules.into_iter().collect(),
        })
    }

    /// The powerset family over the universe described by `spec`.
    pub fn generated(spec: GeneratorSpec) -> Result<System, SystemError> {
        let cap = spec.cap.min(MAX_CAP);
        let universe: BTreeSet<Rule> = match &spec.explicit_universe {
            Some(rules) => rules.iter().cloned().collect(),
            None => generate_universe(&spec.atoms, spec.max_level, spec.max_premises, cap)?,
        };
        if universe.len() > cap {
            return Err(SystemError::UniverseTooLarge {
                size: universe.len().to_string(),
                cap,
            });
        }
        let atoms = atoms_of_rules(&universe, &spec.atoms);
        let rules: Vec<Rule> = universe.into_iter().collect();
        let rule_index = rules.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Ok(System {
            name: "generated".into(),
            kind: Kind::Generated { spec, rule_index },
            atoms,
            rules,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.kind, Kind::Generated { .. })
    }

    pub fn generator_spec(&self) -> Option<&GeneratorSpec> {
        match &self.kind {
            Kind::Generated { spec, .. } => Some(spec),
            Kind::Explicit { .. } => None,
        }
    }

    /// Atoms of the system, sorted; never contains `bot`.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// All rules occurring in the family, sorted. For a generated system
    /// this is the universe and bit `i` of a base id stands for `universe()[i]`.
    pub fn universe(&self) -> &[Rule] {
        &self.rules
    }

    pub fn base_count(&self) -> usize {
        match &self.kind {
            Kind::Explicit { bases, .. } => bases.len(),
            Kind::Generated { .. } => 1usize << self.rules.len(),
        }
    }

    pub fn base(&self, id: BaseId) -> Base {
        match &self.kind {
            Kind::Explicit { bases, .. } => bases[id].clone(),
            Kind::Generated { .. } => mask_rules(id).map(|i| self.rules[i].clone()).collect(),
        }
    }

    /// The base at `index` in the system's own numbering (file order for
    /// explicit systems, bitmask for generated ones).
    pub fn base_at(&self, index: usize) -> Result<Base, SystemError> {
        if index >= self.base_count() {
            return Err(SystemError::BaseIndexOutOfRange {
                index,
                count: self.base_count(),
            });
        }
        Ok(self.base(index))
    }

    pub fn id_of(&self, base: &Base) -> Option<BaseId> {
        match &self.kind {
            Kind::Explicit { index, .. } => index.get(base).copied(),
            Kind::Generated { rule_index, .. } => {
                let mut mask = 0usize;
                for r in base.iter() {
                    mask |= 1 << rule_index.get(r)?;
                }
                Some(mask)
            }
        }
    }

    pub fn require(&self, base: &Base) -> Result<BaseId, SystemError> {
        self.id_of(base)
            .ok_or_else(|| SystemError::BaseNotInSystem(base.clone()))
    }

    pub fn member(&self, base: &Base) -> bool {
        self.id_of(base).is_some()
    }

    /// Canonical order on base ids: by size, then lexicographically by the
    /// sorted rule list.
    pub fn cmp_ids(&self, a: BaseId, b: BaseId) -> Ordering {
        match &self.kind {
            Kind::Explicit { bases, .. } => bases[a].canonical_cmp(&bases[b]),
            Kind::Generated { .. } => a
                .count_ones()
                .cmp(&b.count_ones())
                .then_with(|| mask_rules(a).cmp(mask_rules(b))),
        }
    }

    /// Every base id, in canonical order.
    pub fn ids_in_order(&self) -> Vec<BaseId> {
        match &self.kind {
            Kind::Explicit { order, .. } => order.clone(),
            Kind::Generated { .. } => {
                let mut ids: Vec<BaseId> = (0..self.base_count()).collect();
                ids.sort_by(|&a, &b| self.cmp_ids(a, b));
                ids
            }
        }
    }

    pub fn enumerate_bases(&self) -> impl Iterator<Item = Base> + '_ {
        self.ids_in_order().into_iter().map(|id| self.base(id))
    }

    /// Ids of the supersets of `id` in the family (itself included), in
    /// canonical order.
    pub fn extension_ids(&self, id: BaseId) -> Vec<BaseId> {
        match &self.kind {
            Kind::Explicit { supersets, .. } => supersets[id].clone(),
            Kind::Generated { .. } => {
                let free = (self.base_count() - 1) & !id;
                let mut out = Vec::with_capacity(1 << free.count_ones());
                let mut sub = free;
                loop {
                    out.push(id | sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
                out.sort_by(|&a, &b| self.cmp_ids(a, b));
                out
            }
        }
    }

    pub fn extensions_of(&self, base: &Base) -> Result<Vec<Base>, SystemError> {
        let id = self.require(base)?;
        Ok(self.extension_ids(id).into_iter().map(|e| self.base(e)).collect())
    }

    /// One-line description used in report and CLI headers.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Explicit { bases, .. } => format!(
                "{}: explicit, {} bases, {} rules, atoms {}",
                self.name,
                bases.len(),
                self.rules.len(),
                atom_list(&self.atoms)
            ),
            Kind::Generated { spec, .. } => {
                let how = match spec.explicit_universe {
                    Some(_) => "listed universe".to_string(),
                    None => format!("max-level {}, max-premises {}", spec.max_level, spec.max_premises),
                };
                format!(
                    "{}: generated, {how}, {} rules, {} bases, atoms {}",
                    self.name,
                    self.rules.len(),
                    self.base_count(),
                    atom_list(&self.atoms)
                )
            }
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn atom_list(atoms: &[Atom]) -> String {
    let names: Vec<&str> = atoms.iter().map(|a| a.name()).collect();
    format!("{{{}}}", names.join(", "))
}

fn mask_rules(mask: usize) -> impl Iterator<Item = usize> + Clone {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

fn atoms_of_rules(rules: &BTreeSet<Rule>, extra: &BTreeSet<Atom>) -> Vec<Atom> {
    let mut atoms = extra.clone();
    for r in rules {
        atoms.extend(r.atoms());
    }
    atoms.into_iter().filter(|a| !a.is_falsum()).collect()
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// All canonical rules over `atoms` with level at most `max_level` and at
/// most `max_premises` premises at every nesting depth. Rules whose premise
/// set contains the axiom of their own conclusion are left out: such a
/// premise is satisfied by the discharged axiom alone, so the rule adds
/// nothing a shorter rule does not.
pub fn generate_universe(
    atoms: &BTreeSet<Atom>,
    max_level: usize,
    max_premises: usize,
    cap: usize,
) -> Result<BTreeSet<Rule>, SystemError> {
    let mut current: Vec<Rule> = atoms.iter().map(|a| Rule::axiom(a.clone())).collect();
    for _ in 0..max_level {
        let n = atoms.len() as u128;
        let per_conclusion: u128 = (1..=max_premises as u128)
            .map(|s| binomial(current.len() as u128 - 1, s))
            .fold(0u128, |a, b| a.saturating_add(b));
        let size = n.saturating_add(n.saturating_mul(per_conclusion));
        if size > cap as u128 {
            return Err(SystemError::UniverseTooLarge {
                size: if size == u128::MAX {
                    "astronomically many".into()
                } else {
                    size.to_string()
                },
                cap,
            });
        }
        let mut next: BTreeSet<Rule> = atoms.iter().map(|a| Rule::axiom(a.clone())).collect();
        for q in atoms {
            let pool: Vec<&Rule> = current.iter().filter(|r| **r != Rule::axiom(q.clone())).collect();
            let mut chosen = Vec::new();
            subsets(&pool, 0, max_premises, &mut chosen, &mut |set| {
                next.insert(Rule::compound(set.iter().map(|r| (*r).clone()), q.clone()));
            });
        }
        current = next.into_iter().collect();
    }
    let out: BTreeSet<Rule> = current.into_iter().collect();
    if out.len() > cap {
        return Err(SystemError::UniverseTooLarge {
            size: out.len().to_string(),
            cap,
        });
    }
    Ok(out)
}

fn subsets<'a>(
    pool: &[&'a Rule],
    start: usize,
    left: usize,
    chosen: &mut Vec<&'a Rule>,
    emit: &mut dyn FnMut(&[&'a Rule]),
) {
    if !chosen.is_empty() {
        emit(chosen);
    }
    if left == 0 {
        return;
    }
    for i in start..pool.len() {
        chosen.push(pool[i]);
        subsets(pool, i + 1, left - 1, chosen, emit);
        chosen.pop();
    }
}

pub const EXPLICIT_HEADER: &str = "!explicit";
pub const GENERATE_HEADER: &str = "!generate";

/// Parses a system file. `dir` resolves a relative `universe-file:`.
///
/// ```text
/// !explicit          !generate
/// ---                atoms: p q
/// p                  max-level: 1
/// (p => q)           max-premises: 1
/// ```
///
/// In explicit files, `---` lines separate bases; an empty section is the
/// empty base.
pub fn parse_system(text: &str, dir: Option<&Path>) -> Result<System, SystemError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()));
    let header = lines.by_ref().find(|(_, l)| !l.is_empty());
    match header {
        Some((_, EXPLICIT_HEADER)) => parse_explicit(lines),
        Some((_, GENERATE_HEADER)) => parse_generate(lines, dir),
        Some((n, other)) => Err(SystemError::Format(format!(
            "line {n}: expected `{EXPLICIT_HEADER}` or `{GENERATE_HEADER}`, found `{other}`"
        ))),
        None => Err(SystemError::Parse(ParseError::Empty)),
    }
}

fn parse_explicit<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<System, SystemError> {
    let mut allow_bot = false;
    let mut sections: Vec<Base> = vec![Base::new()];
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        if line == "---" {
            sections.push(Base::new());
            continue;
        }
        if line == ALLOW_BOT_HEADER {
            allow_bot = true;
            continue;
        }
        if line.starts_with('!') {
            return Err(SystemError::Format(format!("line {n}: unknown header `{line}`")));
        }
        let r = parse_rule_with(line, allow_bot).map_err(|e| e.on_line(n))?;
        sections.last_mut().expect("nonempty").insert(r);
    }
    System::explicit(sections)
}

fn parse_generate<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    dir: Option<&Path>,
) -> Result<System, SystemError> {
    let mut atoms: Option<BTreeSet<Atom>> = None;
    let mut max_level = None;
    let mut max_premises = None;
    let mut universe = None;
    let mut cap = DEFAULT_CAP;
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(SystemError::Format(format!("line {n}: expected `key: value`")));
        };
        let value = value.trim();
        let number = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| SystemError::Format(format!("line {n}: `{v}` is not a number")))
        };
        match key.trim() {
            "atoms" => {
                let set = value
                    .split_whitespace()
                    .map(|a| Atom::new(a).map_err(|e| SystemError::Parse(e.on_line(n))))
                    .collect::<Result<BTreeSet<Atom>, _>>()?;
                atoms = Some(set);
            }
            "max-level" => max_level = Some(number(value)?),
            "max-premises" => max_premises = Some(number(value)?),
            "cap" => cap = number(value)?,
            "universe-file" => {
                let path = match dir {
                    Some(d) => d.join(value),
                    None => PathBuf::from(value),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| SystemError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                let file = parse_base_file(&text)?;
                universe = Some(file.base.iter().cloned().collect::<Vec<Rule>>());
            }
            other => return Err(SystemError::Format(format!("line {n}: unknown key `{other}`"))),
        }
    }
    let spec = match universe {
        Some(rules) => GeneratorSpec {
            atoms: atoms.unwrap_or_default(),
            max_level: max_level.unwrap_or(0),
            max_premises: max_premises.unwrap_or(0),
            explicit_universe: Some(rules),
            cap,
        },
        None => GeneratorSpec {
            atoms: atoms.ok_or_else(|| SystemError::Format("missing `atoms:`".into()))?,
            max_level: max_level.ok_or_else(|| SystemError::Format("missing `max-level:`".into()))?,
            max_premises: max_premises.unwrap_or(1),
            explicit_universe: None,
            cap,
        },
    };
    System::generated(spec)
}

/// Reads and parses a system file; the system is named after the file stem.
pub fn load_system(path: &Path) -> Result<System, SystemError> {
    let text = std::fs::read_to_string(path).map_err(|e| SystemError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let sys = parse_system(&text, path.parent())?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(sys.with_name(name))
}
