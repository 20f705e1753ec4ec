//! Higher-level atomic rules, bases of rules, and derivability in a base.
//!
//! A rule either asserts an atom outright (an axiom) or concludes an atom
//! from premises that are themselves rules. A premise rule `(Δ => q)` is
//! satisfied by deriving `q` from the base extended with the rules `Δ`,
//! which is how a rule discharges assumptions (and, one level up, rules).

mod derive;

pub use derive::{derivable_atoms, derivation, derives, Derivation, DerivationStep, Deriver};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::lexer::{Cursor, Tok};
use crate::syntax::{Atom, FALSUM_NAME};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Axiom(Atom),
    /// Always has a nonempty premise set; see [`Rule::compound`].
    Compound {
        premises: BTreeSet<Rule>,
        conclusion: Atom,
    },
}

impl Rule {
    pub fn axiom(conclusion: Atom) -> Rule {
        Rule::Axiom(conclusion)
    }

    /// Builds `(premises => conclusion)` in canonical form: premises are a
    /// set, and an empty premise set yields the axiom.
    pub fn compound(premises: impl IntoIterator<Item = Rule>, conclusion: Atom) -> Rule {
        let premises: BTreeSet<Rule> = premises.into_iter().collect();
        if premises.is_empty() {
            Rule::Axiom(conclusion)
        } else {
            Rule::Compound { premises, conclusion }
        }
    }

    pub fn conclusion(&self) -> &Atom {
        match self {
            Rule::Axiom(a) => a,
            Rule::Compound { conclusion, .. } => conclusion,
        }
    }

    /// Premise rules; empty for an axiom.
    pub fn premises(&self) -> impl Iterator<Item = &Rule> {
        let set = match self {
            Rule::Axiom(_) => None,
            Rule::Compound { premises, .. } => Some(premises),
        };
        set.into_iter().flatten()
    }

    pub fn premise_count(&self) -> usize {
        match self {
            Rule::Axiom(_) => 0,
            Rule::Compound { premises, .. } => premises.len(),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Rule::Axiom(_) => 0,
            Rule::Compound { premises, .. } => 1 + premises.iter().map(Rule::level).max().unwrap_or(0),
        }
    }

    /// True if `bot` occurs as a conclusion anywhere in the rule.
    pub fn mentions_falsum(&self) -> bool {
        self.conclusion().is_falsum() || self.premises().any(Rule::mentions_falsum)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        out.insert(self.conclusion().clone());
        for p in self.premises() {
            p.collect_atoms(out);
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom(a) => write!(f, "{a}"),
            Rule::Compound { premises, conclusion } => {
                f.write_str("(")?;
                for (i, p) in premises.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, " => {conclusion})")
            }
        }
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses a rule; rules mentioning `bot` are rejected.
pub fn parse_rule(text: &str) -> Result<Rule, ParseError> {
    parse_rule_with(text, false)
}

pub fn parse_rule_with(text: &str, allow_bot: bool) -> Result<Rule, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.is_empty() {
        return Err(ParseError::Empty);
    }
    let r = rule_from(&mut cur, allow_bot)?;
    cur.finish()?;
    Ok(r)
}

pub fn print_rule(r: &Rule) -> String {
    r.to_string()
}

fn rule_atom(cur: &mut Cursor<'_>, allow_bot: bool) -> Result<Atom, ParseError> {
    let falsum = match cur.peek() {
        Some(Tok::Falsum) => true,
        Some(Tok::Ident(n)) if n == FALSUM_NAME => true,
        _ => false,
    };
    if falsum {
        if !allow_bot {
            return Err(cur.error("rules concluding `bot` need the `!allow-bot-conclusions` header"));
        }
        cur.bump();
        return Ok(Atom::falsum());
    }
    match cur.peek() {
        Some(Tok::Ident(name)) => {
            let atom = Atom::new(name).map_err(|_| cur.error(format!("`{name}` is not a valid atom name")))?;
            cur.bump();
            Ok(atom)
        }
        _ => Err(cur.unexpected("an atom")),
    }
}

pub(crate) fn rule_from(cur: &mut Cursor<'_>, allow_bot: bool) -> Result<Rule, ParseError> {
    if cur.peek() != Some(&Tok::LParen) {
        return Ok(Rule::Axiom(rule_atom(cur, allow_bot)?));
    }
    cur.bump();
    let mut premises = Vec::new();
    if cur.peek() != Some(&Tok::FatArrow) {
        premises.push(rule_from(cur, allow_bot)?);
        while cur.peek() == Some(&Tok::Comma) {
            cur.bump();
            premises.push(rule_from(cur, allow_bot)?);
        }
    }
    cur.expect(Tok::FatArrow, "`=>` or `,`")?;
    let conclusion = rule_atom(cur, allow_bot)?;
    cur.expect(Tok::RParen, "`)`")?;
    Ok(Rule::compound(premises, conclusion))
}

impl FromStr for Rule {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rule(s)
    }
}

/// A finite set of rules, the unit relative to which validity is defined.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Base {
    rules: BTreeSet<Rule>,
}

impl Base {
    pub fn new() -> Self {
        Base::default()
    }

    pub fn rules(&self) -> &BTreeSet<Rule> {
        &self.rules
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn contains(&self, r: &Rule) -> bool {
        self.rules.contains(r)
    }

    pub fn insert(&mut self, r: Rule) -> bool {
        self.rules.insert(r)
    }

    pub fn is_subset(&self, other: &Base) -> bool {
        self.rules.is_subset(&other.rules)
    }

    pub fn union(&self, other: &Base) -> Base {
        self.rules.union(&other.rules).cloned().collect()
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Rule>) -> Base {
        let mut b = self.clone();
        b.rules.extend(extra);
        b
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            r.collect_atoms(&mut out);
        }
        out
    }

    /// Canonical comparison used for deterministic enumeration: by size, then
    /// lexicographically by the sorted rule list.
    pub fn canonical_cmp(&self, other: &Base) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.rules.iter().cmp(other.rules.iter()))
    }
}

impl FromIterator<Rule> for Base {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Base {
            rules: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// How `bot` behaves at the atomic level.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum BotPolicy {
    /// `bot` is valid at a base iff every atom of the system's atom universe
    /// is derivable there; no rule ever derives `bot` itself.
    #[default]
    Explosion,
    /// `bot` is a distinguished atom; deriving it makes every atom derivable.
    Atom,
}

impl fmt::Display for BotPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BotPolicy::Explosion => "explosion",
            BotPolicy::Atom => "atom",
        })
    }
}

impl FromStr for BotPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explosion" => Ok(BotPolicy::Explosion),
            "atom" => Ok(BotPolicy::Atom),
            other => Err(format!("unknown bot policy `{other}` (expected explosion or atom)")),
        }
    }
}

/// Contents of a base file: one rule per line, `#` comments, `!` headers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BaseFile {
    pub base: Base,
    pub allow_bot_conclusions: bool,
}

pub const ALLOW_BOT_HEADER: &str = "!allow-bot-conclusions";

pub fn parse_base_file(text: &str) -> Result<BaseFile, ParseError> {
    let allow = text.lines().any(|l| l.trim() == ALLOW_BOT_HEADER);
    let mut base = Base::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(header) = body.strip_prefix('!') {
            if body != ALLOW_BOT_HEADER {
                return Err(ParseError::at(line, 0, format!("unknown header `!{header}`")).on_line(i + 1));
            }
            continue;
        }
        let r = parse_rule_with(body, allow).map_err(|e| e.on_line(i + 1))?;
        base.insert(r);
    }
    Ok(BaseFile {
        base,
        allow_bot_conclusions: allow,
    })
}
