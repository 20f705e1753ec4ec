//! Searches systems for formulas that are valid everywhere in the system
//! but not intuitionistically provable, and runs the Harrop-family and
//! soundness checks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitSet;
use crate::bridge::{formula_to_rules, TranslateError};
use crate::ipc::Prover;
use crate::rules::{BotPolicy, Rule};
use crate::semantics::{Certificate, Evaluator, Goal, SemanticsError, SetAlgebra};
use crate::syntax::{Atom, Formula};
use crate::systems::System;

/// Certificates are attached to findings only for systems this small.
pub const CERTIFIED_BASES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("unknown report format `{0}` (expected text or csv)")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    /// Formulas use the first `max_atoms` atoms of the system.
    pub max_atoms: usize,
    pub max_depth: usize,
    /// Enumeration stops after this many formulas.
    pub max_formulas: usize,
    /// Reporting stops after this many findings.
    pub max_findings: usize,
    pub include_bot: bool,
    /// Attach a certificate to each finding (small systems only).
    pub certificates: bool,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_atoms: 3,
            max_depth: 3,
            max_formulas: 200_000,
            max_findings: 100,
            include_bot: true,
            certificates: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Imp,
}

impl Op {
    fn build(self, a: &Formula, b: &Formula) -> Formula {
        match self {
            Op::And => Formula::and(a.clone(), b.clone()),
            Op::Or => Formula::or(a.clone(), b.clone()),
            Op::Imp => Formula::imp(a.clone(), b.clone()),
        }
    }
}

/// Visits the operand pairs that build formulas of the next depth, given
/// that indices `..prev` have smaller depth and `prev..end` have the
/// current greatest depth. Conjunctions and disjunctions take `i <= j`
/// only. Stops early when `visit` returns false.
fn for_each_pair(prev: usize, end: usize, mut visit: impl FnMut(Op, usize, usize) -> bool) {
    for op in [Op::And, Op::Or, Op::Imp] {
        for i in 0..end {
            let from = match op {
                Op::Imp if i < prev => prev,
                Op::Imp => 0,
                _ if i < prev => prev,
                _ => i,
            };
            for j in from..end {
                if !visit(op, i, j) {
                    return;
                }
            }
        }
    }
}

/// Pairs with first operand `i`, as [`for_each_pair`] would visit them.
fn pairs_from(i: usize, prev: usize, end: usize, op: Op) -> std::ops::Range<usize> {
    match op {
        Op::Imp if i < prev => prev..end,
        Op::Imp => 0..end,
        _ if i < prev => prev..end,
        _ => i..end,
    }
}

/// Every formula over `atoms` (and `bot`, optionally) up to `max_depth`,
/// atoms having depth 1, with commutative operands in canonical order.
/// Ordered by depth, then connective (`&`, `|`, `->`), then operands.
#[derive(Clone, Debug)]
pub struct FormulaPool {
    formulas: Vec<Formula>,
    truncated: bool,
}

impl FormulaPool {
    pub fn new(atoms: &[Atom], include_bot: bool, max_depth: usize, max_formulas: usize) -> FormulaPool {
        let mut formulas: Vec<Formula> = atoms.iter().map(|a| Formula::Atom(a.clone())).collect();
        if include_bot {
            formulas.push(Formula::Bot);
        }
        let mut truncated = formulas.len() > max_formulas;
        formulas.truncate(max_formulas);
        let mut prev = 0;
        for _ in 1..max_depth {
            if truncated {
                break;
            }
            let end = formulas.len();
            let mut next = Vec::new();
            for_each_pair(prev, end, |op, i, j| {
                if end + next.len() == max_formulas {
                    truncated = true;
                    return false;
                }
                next.push(op.build(&formulas[i], &formulas[j]));
                true
            });
            formulas.extend(next);
            prev = end;
        }
        FormulaPool { formulas, truncated }
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Whether `max_formulas` cut the enumeration short.
    pub fn truncated(&self) -> bool {
        self.truncated
    }
}

/// Number of formulas [`FormulaPool::new`] produces without a cap.
pub fn pool_size(base: usize, max_depth: usize) -> u128 {
    let mut total = base as u128;
    let mut prev = 0u128;
    for _ in 1..max_depth {
        let end = total;
        let lower = prev;
        let imp = end * end - lower * lower;
        let sym = |n: u128| n * (n + 1) / 2;
        let comm = sym(end) - sym(lower);
        total = end + imp + 2 * comm;
        prev = end;
    }
    total
}

#[derive(Clone, Debug)]
pub struct Finding {
    pub formula: Formula,
    pub system: String,
    pub ptv: bool,
    pub ipc: bool,
    pub policy: BotPolicy,
    pub universe_size: usize,
    /// Absent when not requested or for systems with more than
    /// [`CERTIFIED_BASES`] bases.
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub findings: Vec<Finding>,
    /// Formulas examined.
    pub enumerated: usize,
    pub formulas_truncated: bool,
    pub findings_truncated: bool,
}

impl SearchOutcome {
    /// Lines describing any cap that cut the search short.
    pub fn notices(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.formulas_truncated {
            out.push(format!(
                "enumeration stopped at the formula cap ({} formulas)",
                self.enumerated
            ));
        }
        if self.findings_truncated {
            out.push(format!("findings truncated at {}", self.findings.len()));
        }
        out
    }
}

/// Formulas valid at every base of `sys` that intuitionistic logic does
/// not prove, in enumeration order.
pub fn find_superintuitionistic(
    sys: &System,
    caps: SearchCaps,
    policy: BotPolicy,
) -> Result<SearchOutcome, ExplorerError> {
    let atoms: Vec<Atom> = sys.atoms().iter().take(caps.max_atoms).cloned().collect();
    let layers = Layers::build(
        std::slice::from_ref(sys),
        &atoms,
        caps.include_bot,
        caps.max_depth,
        policy,
    )?;
    let all_rows = layers.all_rows;
    let scan = layers.scan(caps.max_formulas, |prover, build, t, sets| {
        if !sets[0].is_full() {
            return None;
        }
        let f = build();
        // Theorems are classical tautologies, so only those need the prover.
        (t != all_rows || !prover.provable(&f)).then_some(f)
    });
    let mut ev = Evaluator::new(sys, policy)?;
    let findings_truncated = scan.hits.len() > caps.max_findings;
    let findings = scan
        .hits
        .into_iter()
        .take(caps.max_findings)
        .map(|formula| {
            let certificate = if caps.certificates && sys.base_count() <= CERTIFIED_BASES {
                ev.certify(0, &Goal::Everywhere(formula.clone()))
            } else {
                None
            };
            Finding {
                formula,
                system: sys.name().to_string(),
                ptv: true,
                ipc: false,
                policy,
                universe_size: sys.universe().len(),
                certificate,
            }
        })
        .collect();
    Ok(SearchOutcome {
        findings,
        enumerated: scan.enumerated,
        formulas_truncated: scan.truncated,
        findings_truncated,
    })
}

/// Re-checks a finding pointwise by brute force at every base, against
/// the intuitionistic prover, and by replaying its certificate.
pub fn reverify(sys: &System, finding: &Finding) -> Result<bool, ExplorerError> {
    let mut ev = Evaluator::new(sys, finding.policy)?;
    Ok(recheck(sys, &mut ev, &mut Prover::new(), finding))
}

fn recheck(sys: &System, ev: &mut Evaluator<'_>, prover: &mut Prover, finding: &Finding) -> bool {
    let ptv = (0..sys.base_count()).all(|id| ev.valid_at(id, &finding.formula));
    let ipc = prover.provable(&finding.formula);
    let replay_ok = match &finding.certificate {
        Some(c) => c.replay(sys) == Ok(true),
        None => true,
    };
    ptv == finding.ptv && ipc == finding.ipc && replay_ok
}

/// Indices of findings that fail [`reverify`]. Findings are checked in
/// parallel batches, each with its own evaluator so memo tables stay small.
pub fn audit(sys: &System, findings: &[Finding]) -> Result<Vec<usize>, ExplorerError> {
    const BATCH: usize = 256;
    let failed = findings
        .par_chunks(BATCH)
        .enumerate()
        .map(|(b, chunk)| {
            let mut prover = Prover::new();
            let mut out = Vec::new();
            let mut evaluators: Vec<(BotPolicy, Evaluator<'_>)> = Vec::new();
            for (k, finding) in chunk.iter().enumerate() {
                let slot = match evaluators.iter().position(|(p, _)| *p == finding.policy) {
                    Some(slot) => slot,
                    None => {
                        evaluators.push((finding.policy, Evaluator::new(sys, finding.policy)?));
                        evaluators.len() - 1
                    }
                };
                if !recheck(sys, &mut evaluators[slot].1, &mut prover, finding) {
                    out.push(b * BATCH + k);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<Vec<usize>>, ExplorerError>>()?;
    Ok(failed.into_iter().flatten().collect())
}

/// `(A -> (q | r)) -> ((A -> q) | (A -> r))`.
pub fn harrop_instance(a: &Formula) -> Formula {
    let (q, r) = (Formula::atom("q"), Formula::atom("r"));
    Formula::imp(
        Formula::imp(a.clone(), Formula::or(q.clone(), r.clone())),
        Formula::or(Formula::imp(a.clone(), q), Formula::imp(a.clone(), r)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarropRow {
    pub antecedent: Formula,
    pub rules: BTreeSet<Rule>,
    pub instance: Formula,
    pub valid: bool,
}

/// Validity of the Harrop instance for each disjunction-free antecedent.
pub fn check_harrop_family(
    sys: &System,
    antecedents: &[Formula],
    policy: BotPolicy,
) -> Result<Vec<HarropRow>, ExplorerError> {
    let mut ev = Evaluator::new(sys, policy)?;
    antecedents
        .iter()
        .map(|a| {
            let rules = formula_to_rules(a)?;
            let instance = harrop_instance(a);
            let valid = ev.ptv(&instance);
            Ok(HarropRow {
                antecedent: a.clone(),
                rules,
                instance,
                valid,
            })
        })
        .collect()
}

pub fn harrop_table(sys: &System, rows: &[HarropRow]) -> String {
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|r| {
            let rules: Vec<String> = r.rules.iter().map(Rule::to_string).collect();
            [r.antecedent.to_string(), rules.join(" "), r.valid.to_string()]
        })
        .collect();
    let mut out = format!("# harrop family in system {}\n", sys.name());
    out.push_str(&table(["antecedent", "rules", "valid"], &cells));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ExplorerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(ExplorerError::Format(other.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Text => "text",
            ReportFormat::Csv => "csv",
        })
    }
}

const COLUMNS: [&str; 6] = ["formula", "system", "ptv", "ipc", "policy", "universe-size"];

pub fn report(findings: &[Finding], format: ReportFormat) -> String {
    let rows: Vec<[String; 6]> = findings
        .iter()
        .map(|f| {
            [
                f.formula.to_string(),
                f.system.clone(),
                f.ptv.to_string(),
                f.ipc.to_string(),
                f.policy.to_string(),
                f.universe_size.to_string(),
            ]
        })
        .collect();
    match format {
        ReportFormat::Text => table(COLUMNS, &rows),
        ReportFormat::Csv => {
            let mut out = COLUMNS.join(",");
            out.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn table<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> String {
    let mut width: [usize; N] = header.map(str::len);
    for row in rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessViolation {
    pub formula: Formula,
    pub system: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub formulas: u64,
    /// Classical tautologies among them; only these can be theorems.
    pub tautologies: u64,
    /// Tautologies failing somewhere, which the prover had to decide.
    pub candidates: u64,
    /// Intuitionistic theorems among the candidates.
    pub candidate_theorems: u64,
    pub violations: Vec<SoundnessViolation>,
}

/// Formulas up to a depth with their truth tables (atom `k` is bit `k` of
/// the row index) and validity sets in each system. All layers but the
/// deepest are stored; [`Layers::scan`] streams the deepest.
struct Layers<'s> {
    algebras: Vec<SetAlgebra<'s>>,
    max_depth: usize,
    formulas: Vec<Formula>,
    tt: Vec<u64>,
    sets: Vec<Vec<BitSet>>,
    /// The last stored layer is `prev..formulas.len()`.
    prev: usize,
    all_rows: u64,
}

struct Scan<T> {
    hits: Vec<T>,
    enumerated: usize,
    truncated: bool,
}

type Visit<'a, T> = dyn Fn(&mut Prover, &dyn Fn() -> Formula, u64, &[BitSet]) -> Option<T> + Sync + 'a;

impl<'s> Layers<'s> {
    fn build(
        systems: &'s [System],
        atoms: &[Atom],
        include_bot: bool,
        max_depth: usize,
        policy: BotPolicy,
    ) -> Result<Layers<'s>, ExplorerError> {
        assert!(atoms.len() <= 6, "truth tables are 64-bit");
        let algebras = systems
            .iter()
            .map(|s| SetAlgebra::new(s, policy))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = 1u32 << atoms.len();
        let all_rows = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
        let mut l = Layers {
            algebras,
            max_depth,
            formulas: Vec::new(),
            tt: Vec::new(),
            sets: Vec::new(),
            prev: 0,
            all_rows,
        };
        for (k, a) in atoms.iter().enumerate() {
            l.formulas.push(Formula::Atom(a.clone()));
            l.tt.push((0..rows).filter(|v| v >> k & 1 == 1).fold(0, |m, v| m | 1 << v));
            let s = l
                .algebras
                .iter()
                .map(|alg| alg.atom_set(alg.system().atoms().binary_search(a).ok()))
                .collect();
            l.sets.push(s);
        }
        if include_bot {
            l.formulas.push(Formula::Bot);
            l.tt.push(0);
            l.sets.push(l.algebras.iter().map(SetAlgebra::bot_set).collect());
        }
        for _ in 2..max_depth {
            let end = l.formulas.len();
            let mut next = Vec::new();
            for_each_pair(l.prev, end, |op, i, j| {
                next.push((op.build(&l.formulas[i], &l.formulas[j]), l.combine(op, i, j)));
                true
            });
            for (f, (t, s)) in next {
                l.formulas.push(f);
                l.tt.push(t);
                l.sets.push(s);
            }
            l.prev = end;
        }
        Ok(l)
    }

    fn combine(&self, op: Op, i: usize, j: usize) -> (u64, Vec<BitSet>) {
        let t = match op {
            Op::And => self.tt[i] & self.tt[j],
            Op::Or => self.tt[i] | self.tt[j],
            Op::Imp => (!self.tt[i] | self.tt[j]) & self.all_rows,
        };
        let s = self
            .algebras
            .iter()
            .enumerate()
            .map(|(k, alg)| match op {
                Op::And => alg.and(&self.sets[i][k], &self.sets[j][k]),
                Op::Or => alg.or(&self.sets[i][k], &self.sets[j][k]),
                Op::Imp => alg.imp(&self.sets[i][k], &self.sets[j][k]),
            })
            .collect();
        (t, s)
    }

    /// Visits the first `limit` formulas in pool order, keeping what
    /// `visit` returns. `visit` gets a thread-local prover, a builder for
    /// the formula, its truth table and its per-system sets.
    fn scan<T: Send>(
        &self,
        limit: usize,
        visit: impl Fn(&mut Prover, &dyn Fn() -> Formula, u64, &[BitSet]) -> Option<T> + Sync,
    ) -> Scan<T> {
        let visit: &Visit<'_, T> = &visit;
        let stored = self.formulas.len().min(limit);
        let mut prover = Prover::new();
        let mut hits: Vec<T> = (0..stored)
            .filter_map(|k| visit(&mut prover, &|| self.formulas[k].clone(), self.tt[k], &self.sets[k]))
            .collect();
        let mut enumerated = stored;
        let mut truncated = self.formulas.len() > limit;
        if self.max_depth >= 2 && !truncated {
            let (prev, end) = (self.prev, self.formulas.len());
            let mut jobs = Vec::new();
            'outer: for op in [Op::And, Op::Or, Op::Imp] {
                for i in 0..end {
                    let range = pairs_from(i, prev, end, op);
                    if enumerated + range.len() > limit {
                        let take = limit - enumerated;
                        jobs.push((op, i, range.start..range.start + take));
                        enumerated = limit;
                        truncated = true;
                        break 'outer;
                    }
                    enumerated += range.len();
                    jobs.push((op, i, range));
                }
            }
            let parts: Vec<Vec<T>> = jobs
                .into_par_iter()
                .map_init(Prover::new, |prover, (op, i, range)| {
                    range
                        .filter_map(|j| {
                            let (t, s) = self.combine(op, i, j);
                            visit(prover, &|| op.build(&self.formulas[i], &self.formulas[j]), t, &s)
                        })
                        .collect()
                })
                .collect();
            hits.extend(parts.into_iter().flatten());
        }
        Scan {
            hits,
            enumerated,
            truncated,
        }
    }
}

/// Checks that every intuitionistic theorem over `atoms` up to
/// `max_depth` is valid at every base of every system. The prover only
/// runs on classical tautologies that fail in some system.
pub fn ipc_soundness_sweep(
    systems: &[System],
    atoms: &[Atom],
    include_bot: bool,
    max_depth: usize,
    policy: BotPolicy,
) -> Result<SweepReport, ExplorerError> {
    let layers = Layers::build(systems, atoms, include_bot, max_depth, policy)?;
    let all_rows = layers.all_rows;
    // One entry per tautology: the failing systems, and the formula when
    // the prover decided it (None when valid everywhere).
    let scan = layers.scan(usize::MAX, |prover, build, t, sets| {
        if t != all_rows {
            return None;
        }
        let failing: Vec<usize> = (0..sets.len()).filter(|&k| !sets[k].is_full()).collect();
        if failing.is_empty() {
            return Some(None);
        }
        let f = build();
        let theorem = prover.provable(&f);
        Some(Some((f, failing, theorem)))
    });
    let mut report = SweepReport {
        formulas: scan.enumerated as u64,
        ..SweepReport::default()
    };
    for hit in scan.hits {
        report.tautologies += 1;
        let Some((formula, failing, theorem)) = hit else {
            continue;
        };
        report.candidates += 1;
        if theorem {
            report.candidate_theorems += 1;
            for k in failing {
                report.violations.push(SoundnessViolation {
                    formula: formula.clone(),
                    system: systems[k].name().to_string(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::systems::{parse_system, GeneratorSpec};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn toy1() -> System {
        parse_system("!explicit\n---\np\n(p => q)\n---\np\n(p => r)\n", None)
            .unwrap()
            .with_name("toy1")
    }

    fn atoms(names: &[&str]) -> Vec<Atom> {
        names.iter().map(|n| Atom::new(n).unwrap()).collect()
    }

    #[test]
    fn pool_counts_match_the_closed_form() {
        for (k, bot) in [(1, false), (2, false), (2, true), (3, false)] {
            let names = ["p", "q", "r"];
            let base = atoms(&names[..k]);
            for depth in 1..=3 {
                let pool = FormulaPool::new(&base, bot, depth, usize::MAX);
                assert_eq!(pool.len() as u128, pool_size(k + bot as usize, depth));
                let distinct: BTreeSet<&Formula> = pool.formulas().iter().collect();
                assert_eq!(distinct.len(), pool.len());
                assert!(pool.formulas().iter().all(|g| g.depth() <= depth));
            }
        }
        assert_eq!(pool_size(2, 2), 12);
        assert_eq!(pool_size(2, 3), 302);
    }

    #[test]
    fn pool_respects_the_formula_cap() {
        let pool = FormulaPool::new(&atoms(&["p", "q"]), true, 3, 50);
        assert_eq!(pool.len(), 50);
        assert!(pool.truncated());
    }

    #[test]
    fn toy_system_finding() {
        let caps = SearchCaps {
            include_bot: false,
            max_findings: 10_000,
            ..SearchCaps::default()
        };
        let out = find_superintuitionistic(&toy1(), caps, BotPolicy::Explosion).unwrap();
        assert!(out.findings.iter().any(|x| x.formula == f("p -> q | r")));
        for finding in &out.findings {
            assert!(reverify(&toy1(), finding).unwrap());
        }
    }

    #[test]
    fn double_negation_in_the_single_atom_system() {
        let sys = System::generated(GeneratorSpec::new(atoms(&["p"]), 1, 1)).unwrap();
        let caps = SearchCaps {
            max_atoms: 1,
            max_depth: 4,
            max_findings: usize::MAX,
            certificates: false,
            ..SearchCaps::default()
        };
        let dne = f("~~p -> p");
        let out = find_superintuitionistic(&sys, caps, BotPolicy::Explosion).unwrap();
        assert!(out.findings.iter().any(|x| x.formula == dne));
        assert!(!out.findings_truncated);
        let atom = find_superintuitionistic(&sys, caps, BotPolicy::Atom).unwrap();
        assert!(!atom.findings.iter().any(|x| x.formula == dne));
    }

    #[test]
    fn findings_are_capped_with_notice() {
        let caps = SearchCaps {
            max_findings: 3,
            ..SearchCaps::default()
        };
        let out = find_superintuitionistic(&toy1(), caps, BotPolicy::Explosion).unwrap();
        assert_eq!(out.findings.len(), 3);
        assert!(out.findings_truncated);
        assert!(out.notices().iter().any(|n| n.contains("truncated at 3")));
        assert_eq!(audit(&toy1(), &out.findings).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(
            report(&[], ReportFormat::Csv),
            "formula,system,ptv,ipc,policy,universe-size\n"
        );
        let one = Finding {
            formula: f("p -> q | r"),
            system: "toy1".into(),
            ptv: true,
            ipc: false,
            policy: BotPolicy::Explosion,
            universe_size: 3,
            certificate: None,
        };
        let csv = report(&[one], ReportFormat::Csv);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().nth(1), Some("p -> q | r,toy1,true,false,explosion,3"));
    }

    #[test]
    fn harrop_rows() {
        let universe = ["p", "q", "r", "(p => q)", "(p => r)", "(q => r)", "((p => q) => r)"]
            .map(|r| crate::rules::parse_rule(r).unwrap());
        let sys = System::generated(GeneratorSpec::from_universe(universe)).unwrap();
        let rows = check_harrop_family(&sys, &[f("p"), f("p -> q")], BotPolicy::Explosion).unwrap();
        assert!(rows[0].valid);
        assert_eq!(rows[0].instance, f("(p -> q | r) -> (p -> q) | (p -> r)"));
        assert!(rows[1].rules.contains(&crate::rules::parse_rule("(p => q)").unwrap()));
        assert!(matches!(
            check_harrop_family(&sys, &[f("p | q")], BotPolicy::Explosion),
            Err(ExplorerError::Translate(_))
        ));
    }

    #[test]
    fn small_soundness_sweep() {
        let r = ipc_soundness_sweep(&[toy1()], &atoms(&["p", "q"]), true, 3, BotPolicy::Explosion).unwrap();
        assert_eq!(r.formulas as u128, pool_size(3, 3));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.tautologies > 0);
    }
}
