use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const CASES: &[(&str, &[&str])] = &[
    (
        "derive_derivable",
        &["derive", "--base", "base.txt", "--goal", "q", "--explain"],
    ),
    ("derive_underivable", &["derive", "--base", "base.txt", "--goal", "r"]),
    ("translate_rule", &["translate", "--rule", "(p, q => r)"]),
    (
        "translate_formula",
        &["translate", "--formula", "p & (q -> s) & (r -> s) -> s"],
    ),
    ("translate_disjunction", &["translate", "--formula", "p | q"]),
    (
        "check_toy1",
        &[
            "check",
            "--system",
            "toy1.sys",
            "--base",
            "0",
            "--formula",
            "p -> (q|r)",
            "--certificate",
        ],
    ),
    (
        "check_toy2",
        &["check", "--system", "toy2.sys", "--formula", "p -> (q|r)"],
    ),
    (
        "check_toy2_extension",
        &["check", "--system", "toy2.sys", "--base", "3", "--formula", "q | r"],
    ),
    (
        "check_harrop_optimized",
        &[
            "check",
            "--system",
            "harrop.sys",
            "--optimized",
            "--formula",
            "(p -> q | r) -> (p -> q) | (p -> r)",
        ],
    ),
    (
        "check_dne_explosion",
        &["check", "--system", "dne.sys", "--everywhere", "--formula", "~~p -> p"],
    ),
    (
        "check_dne_atom",
        &[
            "check",
            "--system",
            "dne.sys",
            "--everywhere",
            "--policy",
            "atom",
            "--formula",
            "~~p -> p",
            "--certificate",
        ],
    ),
    (
        "entails_toy1",
        &["entails", "--system", "toy1.sys", "--assume", "p", "--formula", "q|r"],
    ),
    (
        "entails_toy2",
        &[
            "entails",
            "--system",
            "toy2.sys",
            "--assume",
            "p",
            "--formula",
            "q|r",
            "--certificate",
        ],
    ),
    (
        "argcheck_modus_ponens",
        &[
            "argcheck",
            "--system",
            "toy1.sys",
            "--arg",
            "modus_ponens.sx",
            "--certificate",
        ],
    ),
    (
        "normalize_trace",
        &["normalize", "--arg", "double_detour.sx", "--trace"],
    ),
    (
        "normalize_innermost",
        &[
            "normalize",
            "--arg",
            "double_detour.sx",
            "--strategy",
            "rightmost-innermost",
            "--trace",
        ],
    ),
    (
        "normalize_out_of_fuel",
        &["normalize", "--arg", "double_detour.sx", "--fuel", "1"],
    ),
    ("ipc_theorem", &["ipc", "--formula", "p & q -> q & p"]),
    (
        "ipc_peirce",
        &["ipc", "--formula", "((p -> q) -> p) -> p", "--countermodel"],
    ),
    (
        "ipc_harrop",
        &[
            "ipc",
            "--formula",
            "(p -> (q|r)) -> ((p -> q) | (p -> r))",
            "--countermodel",
        ],
    ),
    (
        "search_text",
        &["search", "--system", "toy1.sys", "--no-bot", "--max-findings", "5"],
    ),
    (
        "search_csv",
        &["search", "--system", "toy1.sys", "--max-depth", "2", "--format", "csv"],
    ),
    (
        "harrop_family",
        &[
            "harrop",
            "--system",
            "harrop.sys",
            "--antecedent",
            "p",
            "--antecedent",
            "p -> q",
            "--antecedent",
            "p & q",
        ],
    ),
    (
        "report_findings",
        &["report", "--system", "toy1.sys", "--findings", "toy1_findings.csv"],
    ),
    (
        "error_base_index",
        &["check", "--system", "toy1.sys", "--base", "7", "--formula", "p"],
    ),
    ("error_syntax", &["check", "--system", "toy1.sys", "--formula", "p ->"]),
    (
        "error_unknown_flag",
        &["check", "--system", "toy1.sys", "--formula", "p", "--bogus"],
    ),
];

fn here() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn ptv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptv"))
        .args(args)
        .current_dir(here().join("fixtures"))
        .output()
        .unwrap()
}

fn quote(arg: &str) -> String {
    if arg.contains([' ', '|', '&', '>', '~', '(']) {
        format!("'{arg}'")
    } else {
        arg.to_string()
    }
}

/// The command line, standard output, standard error and exit code.
fn transcript(args: &[&str]) -> String {
    let out = ptv(args);
    let shown: Vec<String> = args.iter().map(|a| quote(a)).collect();
    format!(
        "$ ptv {}\n{}--- stderr\n{}--- exit {}\n",
        shown.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
        out.status.code().unwrap()
    )
}

/// Set PTV_BLESS=1 to rewrite the golden files.
#[test]
fn transcripts_match_golden_files() {
    let bless = std::env::var_os("PTV_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let path = here().join("golden").join(format!("{name}.txt"));
        let actual = transcript(args);
        if bless {
            fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_default();
        if expected != actual {
            eprintln!("--- {name}: expected\n{expected}--- {name}: actual\n{actual}");
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "transcripts differ: {mismatched:?}");
}

#[test]
fn every_subcommand_has_a_transcript() {
    for sub in [
        "derive",
        "translate",
        "check",
        "entails",
        "argcheck",
        "normalize",
        "ipc",
        "search",
        "harrop",
        "report",
    ] {
        assert!(CASES.iter().any(|(_, args)| args[0] == sub), "{sub}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| ptv(args).status.code().unwrap();
    assert_eq!(
        code(&["entails", "--system", "toy1.sys", "--assume", "p", "--formula", "q|r"]),
        0
    );
    assert_eq!(
        code(&["entails", "--system", "toy2.sys", "--assume", "p", "--formula", "q|r"]),
        1
    );
    assert_eq!(code(&["translate", "--formula", "p | q"]), 2);
    assert_eq!(code(&["translate", "--rule", "(p => q)", "--formula", "p"]), 2);
    assert_eq!(code(&["derive", "--base", "missing.txt", "--goal", "p"]), 2);
    assert_eq!(
        code(&["check", "--system", "toy1.sys", "--formula", "p", "--policy", "other"]),
        2
    );
}

#[test]
fn certificate_names_the_counterexample_extension() {
    let out = ptv(&[
        "entails",
        "--system",
        "toy2.sys",
        "--assume",
        "p",
        "--formula",
        "q|r",
        "--certificate",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("counterexample extension {p}"), "{text}");
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["search", "--system", "toy1.sys", "--max-findings", "50"];
    assert_eq!(ptv(&args).stdout, ptv(&args).stdout);
}

#[test]
fn search_csv_feeds_report() {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("toy1_search.csv");
    let csv_arg = csv.to_str().unwrap();
    let out = ptv(&["search", "--system", "toy1.sys", "--format", "csv", "--output", csv_arg]);
    assert_eq!(out.status.code(), Some(0));
    let written = fs::read_to_string(&csv).unwrap();
    assert!(written.starts_with("formula,system,ptv,ipc,policy,universe-size\n"));
    assert!(written.lines().any(|l| l.starts_with("p -> q | r,")), "{written}");
    let out = ptv(&["report", "--system", "toy1.sys", "--findings", csv_arg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
