//! Propositional formulas over atoms, `bot`, `&`, `|` and `->`.
//!
//! Negation is surface syntax only: `~A` parses to `A -> bot`, and the
//! printer renders any `A -> bot` back as `~A`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;
use crate::lexer::{Cursor, Tok};

/// Reserved spelling of falsum.
pub const FALSUM_NAME: &str = "bot";

/// An atomic sentence letter: `[a-z][a-zA-Z0-9_]*`, never `bot`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, ParseError> {
        if is_atom_name(name) {
            Ok(Atom(name.into()))
        } else {
            Err(ParseError::at(name, 0, format!("`{name}` is not a valid atom name")))
        }
    }

    /// The distinguished falsum atom used by bases that opt into rules
    /// concluding `bot`.
    pub fn falsum() -> Atom {
        Atom(FALSUM_NAME.into())
    }

    pub fn is_falsum(&self) -> bool {
        &*self.0 == FALSUM_NAME
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    name != FALSUM_NAME && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Bot,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    /// Shorthand for an atom formula. Panics on an invalid name; use
    /// [`Atom::new`] for untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("invalid atom name"))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// Left-nested conjunction of `parts`; `None` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Tree height with atoms and `bot` at depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of binary connectives.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Rename atoms through `map`; atoms it leaves out stay unchanged.
    pub fn rename(&self, map: &dyn Fn(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(map(a)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(a.rename(map), b.rename(map)),
            Formula::Or(a, b) => Formula::or(a.rename(map), b.rename(map)),
            Formula::Imp(a, b) => Formula::imp(a.rename(map), b.rename(map)),
        }
    }
}

pub fn atoms_of(f: &Formula) -> BTreeSet<Atom> {
    fn walk(f: &Formula, out: &mut BTreeSet<Atom>) {
        match f {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// True iff `f` is built from atoms, `&` and `->` only (no `|`, no `bot`).
pub fn is_disjunction_free(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => true,
        Formula::Bot | Formula::Or(..) => false,
        Formula::And(a, b) | Formula::Imp(a, b) => is_disjunction_free(a) && is_disjunction_free(b),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.is_empty() {
        return Err(ParseError::Empty);
    }
    let f = parse_imp(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// Parse a formula prefix of the token stream, leaving the cursor on the first
/// token that cannot continue it.
pub(crate) fn parse_imp(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    let lhs = parse_or(cur)?;
    if cur.peek() == Some(&Tok::Arrow) {
        cur.bump();
        let rhs = parse_imp(cur)?;
        return Ok(Formula::imp(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    let mut acc = parse_and(cur)?;
    while cur.peek() == Some(&Tok::Pipe) {
        cur.bump();
        let rhs = parse_and(cur)?;
        acc = Formula::or(acc, rhs);
    }
    Ok(acc)
}

fn parse_and(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    let mut acc = parse_neg(cur)?;
    while cur.peek() == Some(&Tok::Amp) {
        cur.bump();
        let rhs = parse_neg(cur)?;
        acc = Formula::and(acc, rhs);
    }
    Ok(acc)
}

fn parse_neg(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    match cur.peek() {
        Some(Tok::Tilde) => {
            cur.bump();
            Ok(Formula::not(parse_neg(cur)?))
        }
        Some(Tok::Falsum) => {
            cur.bump();
            Ok(Formula::Bot)
        }
        Some(Tok::Ident(name)) if name == FALSUM_NAME => {
            cur.bump();
            Ok(Formula::Bot)
        }
        Some(Tok::Ident(name)) => {
            if !is_atom_name(name) {
                return Err(cur.error(format!("`{name}` is not a valid atom name")));
            }
            let atom = Atom(name.as_str().into());
            cur.bump();
            Ok(Formula::Atom(atom))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let inner = parse_imp(cur)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(inner)
        }
        _ => Err(cur.unexpected("a formula")),
    }
}

// Binding strength used by the printer: higher binds tighter.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Bot => PREC_PREFIX,
        Formula::Imp(_, b) if **b == Formula::Bot => PREC_PREFIX,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Bot => f.write_str(FALSUM_NAME),
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                write_child(f, a, prec(a) < PREC_PREFIX)
            }
            Formula::Imp(a, b) => {
                write_child(f, a, prec(a) <= PREC_IMP)?;
                f.write_str(" -> ")?;
                write_child(f, b, prec(b) < PREC_IMP)
            }
            Formula::Or(a, b) => {
                write_child(f, a, prec(a) < PREC_OR)?;
                f.write_str(" | ")?;
                write_child(f, b, prec(b) <= PREC_OR)
            }
            Formula::And(a, b) => {
                write_child(f, a, prec(a) < PREC_AND)?;
                f.write_str(" & ")?;
                write_child(f, b, prec(b) <= PREC_AND)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
