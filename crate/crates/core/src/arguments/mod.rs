//! Natural-deduction arguments: trees of inferences with discharge labels,
//! their detour reductions, and their validity at a base.
//!
//! Text form is an S-expression per node:
//!
//! ```text
//! (assume h p -> q)
//! (impE q (assume h1 p -> q) (assume h2 p))
//! (impI p -> p [h] (assume h p))
//! (atomic "(p, q => r)" r (assume a p) (assume b q))
//! ```
//!
//! A discharge label `_` discharges nothing.

mod reduce;
mod validity;
mod wellformed;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::ParseError;
use crate::lexer::{Cursor, Tok};
use crate::rules::{parse_rule_with, Rule};
use crate::semantics::SemanticsError;
use crate::syntax::{parse_imp, Formula};

pub use reduce::{
    detour_at, detours, normalize, normalize_with, reduce_once, Connective, Normalized, ReductionStep, Strategy,
    DEFAULT_FUEL,
};
pub use validity::{classify, s_valid_argument, ArgumentCase};
pub use wellformed::{check_wellformed, Violation};

/// Label that discharges nothing.
pub const VACUOUS: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    BotE,
    Atomic(Rule),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::AndI => "andI",
            Kind::AndE1 => "andE1",
            Kind::AndE2 => "andE2",
            Kind::OrI1 => "orI1",
            Kind::OrI2 => "orI2",
            Kind::OrE => "orE",
            Kind::ImpI => "impI",
            Kind::ImpE => "impE",
            Kind::BotE => "botE",
            Kind::Atomic(_) => "atomic",
        }
    }

    pub fn is_introduction(&self) -> bool {
        matches!(self, Kind::AndI | Kind::OrI1 | Kind::OrI2 | Kind::ImpI)
    }

    fn from_name(name: &str) -> Option<Kind> {
        Some(match name {
            "andI" => Kind::AndI,
            "andE1" => Kind::AndE1,
            "andE2" => Kind::AndE2,
            "orI1" => Kind::OrI1,
            "orI2" => Kind::OrI2,
            "orE" => Kind::OrE,
            "impI" => Kind::ImpI,
            "impE" => Kind::ImpE,
            "botE" => Kind::BotE,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Argument {
    Assume {
        label: String,
        formula: Formula,
    },
    Infer {
        kind: Kind,
        conclusion: Formula,
        discharge: Vec<String>,
        children: Vec<Argument>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArgumentError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("ill-formed argument: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<Violation>),
    #[error("no detour at {}", path_string(.0))]
    NotADetour(Vec<usize>),
    #[error("normalization ran out of fuel after {steps} steps")]
    FuelExhausted { partial: Box<Argument>, steps: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// `/0/1` style rendering of a child-index path; the root is `/`.
pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        return "/".into();
    }
    path.iter().map(|i| format!("/{i}")).collect()
}

impl Argument {
    pub fn assume(label: &str, formula: Formula) -> Argument {
        Argument::Assume {
            label: label.into(),
            formula,
        }
    }

    pub fn infer(kind: Kind, conclusion: Formula, discharge: &[&str], children: Vec<Argument>) -> Argument {
        Argument::Infer {
            kind,
            conclusion,
            discharge: discharge.iter().map(|s| s.to_string()).collect(),
            children,
        }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Argument::Assume { formula, .. } => formula,
            Argument::Infer { conclusion, .. } => conclusion,
        }
    }

    pub fn children(&self) -> &[Argument] {
        match self {
            Argument::Assume { .. } => &[],
            Argument::Infer { children, .. } => children,
        }
    }

    pub fn kind(&self) -> Option<&Kind> {
        match self {
            Argument::Assume { .. } => None,
            Argument::Infer { kind, .. } => Some(kind),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Argument::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children().iter().map(Argument::height).max().unwrap_or(0)
    }

    /// Whether any atomic rule is applied.
    pub fn uses_atomic_rules(&self) -> bool {
        matches!(self.kind(), Some(Kind::Atomic(_))) || self.children().iter().any(Argument::uses_atomic_rules)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Argument> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at(rest),
        }
    }

    pub(crate) fn at_mut(&mut self, path: &[usize]) -> Option<&mut Argument> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Argument::Assume { .. } => None,
                Argument::Infer { children, .. } => children.get_mut(i)?.at_mut(rest),
            },
        }
    }

    /// Labels this node discharges in child `i`.
    pub(crate) fn binds_in(&self, i: usize) -> Vec<&str> {
        let Argument::Infer { kind, discharge, .. } = self else {
            return vec![];
        };
        let labels = match kind {
            Kind::ImpI if i == 0 => discharge.iter().collect(),
            Kind::OrE if i > 0 => discharge.get(i - 1).into_iter().collect(),
            Kind::Atomic(_) => discharge.iter().collect::<Vec<_>>(),
            _ => vec![],
        };
        labels
            .into_iter()
            .map(String::as_str)
            .filter(|l| *l != VACUOUS)
            .collect()
    }

    /// Undischarged assumptions by label. A label occurring open with two
    /// different formulas keeps the first.
    pub fn open_assumptions(&self) -> BTreeMap<String, Formula> {
        let mut out = BTreeMap::new();
        self.collect_open(&mut Vec::new(), &mut out);
        out
    }

    fn collect_open<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeMap<String, Formula>) {
        match self {
            Argument::Assume { label, formula } => {
                if !bound.contains(&label.as_str()) {
                    out.entry(label.clone()).or_insert_with(|| formula.clone());
                }
            }
            Argument::Infer { children, .. } => {
                for (i, c) in children.iter().enumerate() {
                    let binds = self.binds_in(i);
                    let n = bound.len();
                    bound.extend(binds);
                    c.collect_open(bound, out);
                    bound.truncate(n);
                }
            }
        }
    }

    /// Distinct formulas among the open assumptions.
    pub fn open_formulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.open_assumptions().into_values().collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_closed(&self) -> bool {
        self.open_assumptions().is_empty()
    }

    pub(crate) fn all_labels(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Argument::Assume { label, .. } => {
                out.insert(label.clone());
            }
            Argument::Infer {
                discharge, children, ..
            } => {
                out.extend(discharge.iter().cloned());
                for c in children {
                    c.all_labels(out);
                }
            }
        }
    }
}

pub fn parse_argument(text: &str) -> Result<Argument, ArgumentError> {
    let mut cur = Cursor::new(text)?;
    if cur.is_empty() {
        return Err(ParseError::Empty.into());
    }
    let a = parse_node(&mut cur)?;
    cur.finish()?;
    Ok(a)
}

fn ident(cur: &mut Cursor<'_>, wanted: &str) -> Result<String, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) => {
            let s = s.clone();
            cur.bump();
            Ok(s)
        }
        _ => Err(cur.unexpected(wanted)),
    }
}

fn parse_node(cur: &mut Cursor<'_>) -> Result<Argument, ParseError> {
    cur.expect(Tok::LParen, "`(`")?;
    let at = cur.offset();
    let head = ident(cur, "`assume` or an inference kind")?;
    if head == "assume" {
        let label = ident(cur, "an assumption label")?;
        let formula = parse_imp(cur)?;
        cur.expect(Tok::RParen, "`)`")?;
        return Ok(Argument::Assume { label, formula });
    }
    let kind = if head == "atomic" {
        let at = cur.offset();
        let Some(Tok::Str(text)) = cur.peek().cloned() else {
            return Err(cur.unexpected("a quoted rule"));
        };
        cur.bump();
        let rule = parse_rule_with(&text, true).map_err(|e| {
            let msg = match e {
                ParseError::Syntax { message, .. } => message,
                ParseError::Empty => "empty rule".into(),
            };
            ParseError::at(cur.text, at, format!("in rule \"{text}\": {msg}"))
        })?;
        Kind::Atomic(rule)
    } else {
        Kind::from_name(&head)
            .ok_or_else(|| ParseError::at(cur.text, at, format!("unknown inference kind `{head}`")))?
    };
    let conclusion = parse_imp(cur)?;
    let mut discharge = Vec::new();
    if cur.peek() == Some(&Tok::LBracket) {
        cur.bump();
        while cur.peek() != Some(&Tok::RBracket) {
            discharge.push(ident(cur, "a label or `]`")?);
        }
        cur.bump();
    }
    let mut children = Vec::new();
    while cur.peek() == Some(&Tok::LParen) {
        children.push(parse_node(cur)?);
    }
    cur.expect(Tok::RParen, "`)` or a sub-argument")?;
    Ok(Argument::Infer {
        kind,
        conclusion,
        discharge,
        children,
    })
}

/// Prints on one line when short, otherwise one sub-argument per line.
pub fn print_argument(a: &Argument) -> String {
    let mut out = String::new();
    write_node(a, 0, &mut out);
    out
}

const LINE_WIDTH: usize = 78;

fn head(a: &Argument) -> String {
    match a {
        Argument::Assume { label, formula } => format!("(assume {label} {formula}"),
        Argument::Infer {
            kind,
            conclusion,
            discharge,
            ..
        } => {
            let mut s = match kind {
                Kind::Atomic(r) => format!("(atomic \"{r}\" {conclusion}"),
                k => format!("({} {conclusion}", k.name()),
            };
            if !discharge.is_empty() {
                s.push_str(&format!(" [{}]", discharge.join(" ")));
            }
            s
        }
    }
}

fn flat(a: &Argument) -> String {
    let mut s = head(a);
    for c in a.children() {
        s.push(' ');
        s.push_str(&flat(c));
    }
    s.push(')');
    s
}

fn write_node(a: &Argument, indent: usize, out: &mut String) {
    let one = flat(a);
    if indent + one.len() <= LINE_WIDTH || a.children().is_empty() {
        out.push_str(&one);
        return;
    }
    out.push_str(&head(a));
    for c in a.children() {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        write_node(c, indent + 2, out);
    }
    out.push(')');
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_argument(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn parses_example_one() {
        let a = parse_argument("(impE q (assume h1 p -> q) (assume h2 p))").unwrap();
        assert_eq!(a.conclusion(), &parse_formula("q").unwrap());
        assert_eq!(a.children().len(), 2);
        assert_eq!(a.children()[0].conclusion(), &parse_formula("p -> q").unwrap());
        assert_eq!(a.open_assumptions().len(), 2);
    }

    #[test]
    fn identity_is_closed() {
        let a = parse_argument("(impI p -> p [h] (assume h p))").unwrap();
        assert!(a.is_closed());
        assert_eq!(print_argument(&a), "(impI p -> p [h] (assume h p))");
    }

    #[test]
    fn atomic_rule_nodes() {
        let a = parse_argument("# comment\n(atomic \"(p, q => r)\" r (assume a p) (assume b q))").unwrap();
        assert_eq!(
            a.kind(),
            Some(&Kind::Atomic(crate::rules::parse_rule("(p, q => r)").unwrap()))
        );
        let back = parse_argument(&print_argument(&a)).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_argument("").is_err());
        assert!(parse_argument("(frob p)").is_err());
        assert!(parse_argument("(atomic \"(p =>\" q)").is_err());
        assert!(parse_argument("(impI p -> p [h] (assume h p)").is_err());
    }

    #[test]
    fn long_arguments_break_lines() {
        let text = "(impI (p -> q) -> (q -> r) -> p -> r [f] (impI (q -> r) -> p -> r [g] (impI p -> r [x] (impE r (assume g q -> r) (impE q (assume f p -> q) (assume x p))))))";
        let a = parse_argument(text).unwrap();
        let printed = print_argument(&a);
        assert!(printed.contains('\n'));
        assert_eq!(parse_argument(&printed).unwrap(), a);
    }
}
