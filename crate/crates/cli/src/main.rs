use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptv_core::arguments::{classify, normalize_with, Strategy, DEFAULT_FUEL};
use ptv_core::explorer::{
    check_harrop_family, find_superintuitionistic, harrop_table, report, reverify, ExplorerError, Finding,
    ReportFormat, SearchCaps,
};
use ptv_core::rules::{parse_base_file, print_rule, Deriver};
use ptv_core::{
    consequence, formula_to_rules, ipc_provable, kripke_counterexample, load_system, parse_argument, parse_formula,
    parse_rule, print_argument, ptv_valid, rule_to_formula, s_valid_argument, valid, valid_optimized, Argument,
    ArgumentError, Atom, Base, BotPolicy, Formula, ParseError, SemanticsError, System, SystemError, TranslateError,
    Verdict,
};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "ptv", version, about = "Proof-theoretic validity over atomic-rule systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derivability of an atom from a base file.
    Derive(DeriveArgs),
    /// Translate a rule to a formula, or a disjunction-free formula to rules.
    Translate(TranslateArgs),
    /// Validity of a formula at a base of a system.
    Check(CheckArgs),
    /// Consequence from assumptions at a base of a system.
    Entails(EntailsArgs),
    /// Validity of a natural-deduction argument.
    Argcheck(ArgcheckArgs),
    /// Remove detours from an argument.
    Normalize(NormalizeArgs),
    /// Intuitionistic provability, with an optional Kripke countermodel.
    Ipc(IpcArgs),
    /// Formulas valid in a system but not intuitionistically provable.
    Search(SearchArgs),
    /// Harrop instances for disjunction-free antecedents.
    Harrop(HarropArgs),
    /// Re-verify findings written by `search --format csv`.
    Report(ReportArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// System file.
    #[arg(long)]
    system: PathBuf,
    /// Zero-based base index in file order.
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long, default_value = "explosion")]
    policy: BotPolicy,
}

#[derive(Args)]
struct DeriveArgs {
    /// Base file, one rule per line.
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    goal: String,
    #[arg(long, default_value = "explosion")]
    policy: BotPolicy,
    /// Print the derivation found.
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TranslateArgs {
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    formula: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[arg(long)]
    formula: String,
    /// Validity at every base instead of the selected one.
    #[arg(long)]
    everywhere: bool,
    /// Use the minimal-witness evaluator.
    #[arg(long, conflicts_with = "everywhere")]
    optimized: bool,
    /// Print the certificate trace.
    #[arg(long)]
    certificate: bool,
}

#[derive(Args)]
struct EntailsArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[arg(long = "assume")]
    assumptions: Vec<String>,
    #[arg(long)]
    formula: String,
    #[arg(long)]
    certificate: bool,
}

#[derive(Args)]
struct ArgcheckArgs {
    #[command(flatten)]
    sys: SystemArgs,
    /// Argument file in s-expression form.
    #[arg(long)]
    arg: PathBuf,
    #[arg(long)]
    certificate: bool,
}

#[derive(Args)]
struct NormalizeArgs {
    #[arg(long)]
    arg: PathBuf,
    #[arg(long, default_value = "leftmost-outermost", value_parser = parse_strategy)]
    strategy: Strategy,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: usize,
    /// Print each reduction step.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct IpcArgs {
    #[arg(long)]
    formula: String,
    /// Search for a Kripke countermodel when unprovable.
    #[arg(long)]
    countermodel: bool,
    #[arg(long, default_value_t = 8)]
    max_worlds: usize,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, default_value = "explosion")]
    policy: BotPolicy,
    #[arg(long, default_value_t = SearchCaps::default().max_atoms)]
    max_atoms: usize,
    #[arg(long, default_value_t = SearchCaps::default().max_depth)]
    max_depth: usize,
    #[arg(long, default_value_t = SearchCaps::default().max_formulas)]
    max_formulas: usize,
    #[arg(long, default_value_t = SearchCaps::default().max_findings)]
    max_findings: usize,
    /// Leave `bot` out of the enumerated formulas.
    #[arg(long)]
    no_bot: bool,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the certificate of each finding.
    #[arg(long)]
    certificate: bool,
}

#[derive(Args)]
struct HarropArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, default_value = "explosion")]
    policy: BotPolicy,
    /// Disjunction-free antecedent; repeatable.
    #[arg(long = "antecedent", default_value = "p")]
    antecedents: Vec<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    system: PathBuf,
    /// CSV written by `search --format csv`.
    #[arg(long)]
    findings: PathBuf,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "leftmost-outermost" => Ok(Strategy::LeftmostOutermost),
        "rightmost-innermost" => Ok(Strategy::RightmostInnermost),
        other => Err(format!(
            "unknown strategy `{other}` (expected leftmost-outermost or rightmost-innermost)"
        )),
    }
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::LeftmostOutermost => "leftmost-outermost",
        Strategy::RightmostInnermost => "rightmost-innermost",
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Argument(#[from] ArgumentError),
    #[error(transparent)]
    Explorer(#[from] ExplorerError),
    #[error("{path}: {message}")]
    Findings { path: PathBuf, message: String },
}

/// Standard output and whether the answer was positive.
struct Run {
    out: String,
    yes: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn formula(text: &str) -> Result<Formula, CliError> {
    Ok(parse_formula(text)?)
}

fn verdict_word(v: bool) -> &'static str {
    if v {
        "valid"
    } else {
        "invalid"
    }
}

/// Loads the system and selected base, and writes the shared header.
fn open_system(args: &SystemArgs, command: &str, out: &mut String) -> Result<(System, Base), CliError> {
    let sys = load_system(&args.system)?;
    let base = sys.base_at(args.base)?;
    writeln!(out, "# ptv {command}").unwrap();
    writeln!(out, "# system: {}", sys.describe()).unwrap();
    writeln!(out, "# base {}: {base}", args.base).unwrap();
    writeln!(out, "# policy: {}", args.policy).unwrap();
    Ok((sys, base))
}

fn certificate(out: &mut String, verdict: &Verdict, wanted: bool) {
    if !wanted {
        return;
    }
    match &verdict.certificate {
        Some(c) => out.push_str(&c.render()),
        None => out.push_str("# no certificate: the system is too large to certify\n"),
    }
}

fn derive(a: DeriveArgs) -> Result<Run, CliError> {
    let file = parse_base_file(&read(&a.base)?)?;
    let goal = Atom::new(&a.goal)?;
    let mut d = Deriver::new(a.policy);
    let mut out = String::new();
    writeln!(out, "# ptv derive").unwrap();
    writeln!(out, "# base: {}", file.base).unwrap();
    writeln!(out, "# policy: {}", a.policy).unwrap();
    let yes = d.derives(&file.base, &goal);
    writeln!(out, "{goal}: {}", if yes { "derivable" } else { "not derivable" }).unwrap();
    if yes && a.explain {
        if let Some(proof) = d.explain(&file.base, &goal) {
            for line in proof.to_string().split("; ") {
                writeln!(out, "  {line}").unwrap();
            }
        }
    }
    Ok(Run { out, yes })
}

fn translate(a: TranslateArgs) -> Result<Run, CliError> {
    let mut out = String::new();
    if let Some(text) = a.rule {
        let r = parse_rule(&text)?;
        writeln!(out, "{}", rule_to_formula(&r)).unwrap();
    } else if let Some(text) = a.formula {
        for r in formula_to_rules(&formula(&text)?)? {
            writeln!(out, "{}", print_rule(&r)).unwrap();
        }
    }
    Ok(Run { out, yes: true })
}

fn check(a: CheckArgs) -> Result<Run, CliError> {
    let mut out = String::new();
    let (sys, base) = open_system(&a.sys, "check", &mut out)?;
    let f = formula(&a.formula)?;
    let route = if a.optimized {
        "minimal witnesses"
    } else {
        "validity sets"
    };
    writeln!(out, "# route: {route}").unwrap();
    let v = if a.everywhere {
        ptv_valid(&sys, &f, a.sys.policy)?
    } else if a.optimized {
        valid_optimized(&sys, &base, &f, a.sys.policy)?
    } else {
        valid(&sys, &base, &f, a.sys.policy)?
    };
    let scope = match (a.everywhere, v.valid) {
        (false, _) => "at this base",
        (true, true) => "at every base",
        (true, false) => "at some base",
    };
    writeln!(out, "{f}: {} {scope}", verdict_word(v.valid)).unwrap();
    certificate(&mut out, &v, a.certificate);
    Ok(Run { out, yes: v.valid })
}

fn entails(a: EntailsArgs) -> Result<Run, CliError> {
    let mut out = String::new();
    let (sys, base) = open_system(&a.sys, "entails", &mut out)?;
    let hyps = a
        .assumptions
        .iter()
        .map(|h| formula(h))
        .collect::<Result<Vec<_>, _>>()?;
    let goal = formula(&a.formula)?;
    let v = consequence(&sys, &base, &hyps, &goal, a.sys.policy)?;
    let shown: Vec<String> = hyps.iter().map(Formula::to_string).collect();
    writeln!(out, "{} |= {goal}: {}", shown.join(", "), verdict_word(v.valid)).unwrap();
    certificate(&mut out, &v, a.certificate);
    Ok(Run { out, yes: v.valid })
}

fn load_argument(path: &Path) -> Result<Argument, CliError> {
    Ok(parse_argument(&read(path)?)?)
}

fn argcheck(a: ArgcheckArgs) -> Result<Run, CliError> {
    let mut out = String::new();
    let (sys, base) = open_system(&a.sys, "argcheck", &mut out)?;
    let arg = load_argument(&a.arg)?;
    writeln!(out, "# case: {}", classify(&arg)).unwrap();
    let v = s_valid_argument(&sys, &base, &arg, a.sys.policy)?;
    let open: Vec<String> = arg.open_formulas().iter().map(Formula::to_string).collect();
    writeln!(
        out,
        "argument for {} from [{}]: {}",
        arg.conclusion(),
        open.join(", "),
        verdict_word(v.valid)
    )
    .unwrap();
    certificate(&mut out, &v, a.certificate);
    Ok(Run { out, yes: v.valid })
}

fn normalize(a: NormalizeArgs) -> Result<Run, CliError> {
    let arg = load_argument(&a.arg)?;
    let mut out = String::new();
    writeln!(out, "# ptv normalize").unwrap();
    writeln!(out, "# strategy: {}, fuel {}", strategy_name(a.strategy), a.fuel).unwrap();
    match normalize_with(&arg, a.fuel, a.strategy) {
        Ok(n) => {
            if a.trace {
                for step in &n.trace {
                    writeln!(out, "# step: {step}").unwrap();
                }
            }
            writeln!(out, "# {} steps", n.steps()).unwrap();
            writeln!(out, "{}", print_argument(&n.argument)).unwrap();
            Ok(Run { out, yes: true })
        }
        Err(ArgumentError::FuelExhausted { partial, steps }) => {
            writeln!(out, "# fuel exhausted after {steps} steps; partial result follows").unwrap();
            writeln!(out, "{}", print_argument(&partial)).unwrap();
            Ok(Run { out, yes: false })
        }
        Err(e) => Err(e.into()),
    }
}

fn ipc(a: IpcArgs) -> Result<Run, CliError> {
    let f = formula(&a.formula)?;
    let mut out = String::new();
    writeln!(out, "# ptv ipc").unwrap();
    let yes = ipc_provable(&f);
    writeln!(out, "{f}: {}", if yes { "provable" } else { "unprovable" }).unwrap();
    if !yes && a.countermodel {
        match kripke_counterexample(&f, a.max_worlds) {
            Some(m) => write!(out, "{m}").unwrap(),
            None => writeln!(out, "# no countermodel within {} worlds", a.max_worlds).unwrap(),
        }
    }
    Ok(Run { out, yes })
}

fn search(a: SearchArgs) -> Result<Run, CliError> {
    let sys = load_system(&a.system)?;
    let caps = SearchCaps {
        max_atoms: a.max_atoms,
        max_depth: a.max_depth,
        max_formulas: a.max_formulas,
        max_findings: a.max_findings,
        include_bot: !a.no_bot,
        certificates: a.certificate,
    };
    let outcome = find_superintuitionistic(&sys, caps, a.policy)?;
    let mut out = String::new();
    writeln!(out, "# ptv search").unwrap();
    writeln!(out, "# system: {}", sys.describe()).unwrap();
    writeln!(out, "# policy: {}", a.policy).unwrap();
    writeln!(
        out,
        "# caps: atoms {}, depth {}, formulas {}, findings {}, bot {}",
        caps.max_atoms,
        caps.max_depth,
        caps.max_formulas,
        caps.max_findings,
        if caps.include_bot { "included" } else { "excluded" }
    )
    .unwrap();
    writeln!(
        out,
        "# {} formulas enumerated, {} findings",
        outcome.enumerated,
        outcome.findings.len()
    )
    .unwrap();
    for notice in outcome.notices() {
        writeln!(out, "# {notice}").unwrap();
    }
    let body = report(&outcome.findings, a.format);
    match &a.output {
        Some(path) => {
            fs::write(path, &body).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            writeln!(out, "# report written to {}", path.display()).unwrap();
        }
        None => out.push_str(&body),
    }
    if a.certificate {
        for finding in &outcome.findings {
            writeln!(out, "# certificate for {}", finding.formula).unwrap();
            match &finding.certificate {
                Some(c) => out.push_str(&c.render()),
                None => out.push_str("# no certificate: the system is too large to certify\n"),
            }
        }
    }
    Ok(Run { out, yes: true })
}

fn harrop(a: HarropArgs) -> Result<Run, CliError> {
    let sys = load_system(&a.system)?;
    let antecedents = a
        .antecedents
        .iter()
        .map(|t| formula(t))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = check_harrop_family(&sys, &antecedents, a.policy)?;
    let mut out = String::new();
    writeln!(out, "# ptv harrop").unwrap();
    writeln!(out, "# system: {}", sys.describe()).unwrap();
    writeln!(out, "# policy: {}", a.policy).unwrap();
    out.push_str(&harrop_table(&sys, &rows));
    Ok(Run {
        out,
        yes: rows.iter().all(|r| r.valid),
    })
}

fn findings_error(path: &Path, message: impl ToString) -> CliError {
    CliError::Findings {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn read_findings(path: &Path, sys: &System) -> Result<Vec<Finding>, CliError> {
    let text = read(path)?;
    let text: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut findings = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = record.map_err(|e| findings_error(path, e))?;
        let cell = |k: usize| {
            row.get(k)
                .ok_or_else(|| findings_error(path, format!("row {}: missing column {k}", i + 1)))
        };
        let flag = |k: usize| -> Result<bool, CliError> {
            cell(k)?
                .parse()
                .map_err(|_| findings_error(path, format!("row {}: expected true or false", i + 1)))
        };
        if cell(1)? != sys.name() {
            return Err(findings_error(
                path,
                format!(
                    "row {}: finding is for system `{}`, not `{}`",
                    i + 1,
                    cell(1)?,
                    sys.name()
                ),
            ));
        }
        findings.push(Finding {
            formula: formula(cell(0)?)?,
            system: sys.name().to_string(),
            ptv: flag(2)?,
            ipc: flag(3)?,
            policy: cell(4)?.parse().map_err(|e: String| findings_error(path, e))?,
            universe_size: cell(5)?
                .parse()
                .map_err(|_| findings_error(path, format!("row {}: bad universe size", i + 1)))?,
            certificate: None,
        });
    }
    Ok(findings)
}

fn report_findings(a: ReportArgs) -> Result<Run, CliError> {
    let sys = load_system(&a.system)?;
    let findings = read_findings(&a.findings, &sys)?;
    let mut out = String::new();
    writeln!(out, "# ptv report").unwrap();
    writeln!(out, "# system: {}", sys.describe()).unwrap();
    let mut confirmed = 0;
    let mut lines = String::new();
    for finding in &findings {
        let ok = reverify(&sys, finding)?;
        confirmed += usize::from(ok);
        writeln!(
            lines,
            "{}  {}  {}",
            if ok { "confirmed" } else { "REJECTED " },
            finding.policy,
            finding.formula
        )
        .unwrap();
    }
    writeln!(out, "# {confirmed} of {} findings confirmed", findings.len()).unwrap();
    out.push_str(&lines);
    Ok(Run {
        out,
        yes: confirmed == findings.len(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive(a) => derive(a),
        Command::Translate(a) => translate(a),
        Command::Check(a) => check(a),
        Command::Entails(a) => entails(a),
        Command::Argcheck(a) => argcheck(a),
        Command::Normalize(a) => normalize(a),
        Command::Ipc(a) => ipc(a),
        Command::Search(a) => search(a),
        Command::Harrop(a) => harrop(a),
        Command::Report(a) => report_findings(a),
    };
    match result {
        Ok(run) => {
            print!("{}", run.out);
            ExitCode::from(if run.yes { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
