//! One line per acceptance criterion. Run with
//! `cargo test -p ptv-core --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use ptv_core::arguments::{detours, reduce_once, DEFAULT_FUEL};
use ptv_core::explorer::{
    audit, find_superintuitionistic, harrop_instance, ipc_soundness_sweep, FormulaPool, SearchCaps, SearchOutcome,
};
use ptv_core::rules::Deriver;
use ptv_core::semantics::Evaluator;
use ptv_core::{
    consequence, formula_to_rules, ipc_provable, kripke_counterexample, normalize, parse_argument, parse_formula,
    parse_rule, ptv_valid, round_trip_check, rule_to_formula, s_valid_argument, Argument, Atom, Base, BotPolicy,
    GeneratorSpec, System,
};

type Outcome = Result<String, String>;

fn criterion(n: usize, name: &str, budget: Duration, check: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let result = match result {
        Ok(detail) if elapsed > budget => Err(format!("{detail}; over the time budget")),
        other => other,
    };
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {n} {tag}: {name}: {detail} [{elapsed:.2?} of {budget:?}]");
    assert!(result.is_ok(), "criterion {n} failed: {detail}");
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(s: &str) -> ptv_core::Formula {
    parse_formula(s).unwrap()
}

fn base(rules: &[&str]) -> Base {
    rules.iter().map(|r| parse_rule(r).unwrap()).collect()
}

#[test]
fn criterion_1_toy_systems() {
    criterion(1, "toy-system consequence", Duration::from_secs(1), || {
        let (t1, t2) = (toy1(), toy2());
        let one =
            consequence(&t1, &Base::new(), &[f("p")], &f("q | r"), BotPolicy::Explosion).map_err(|e| e.to_string())?;
        ensure(one.valid, || "p |= q | r should hold at the empty base of toy1".into())?;
        let two =
            consequence(&t2, &Base::new(), &[f("p")], &f("q | r"), BotPolicy::Explosion).map_err(|e| e.to_string())?;
        ensure(!two.valid, || "p |= q | r should fail at the empty base of toy2".into())?;
        let mut ev = Evaluator::new(&t2, BotPolicy::Explosion).map_err(|e| e.to_string())?;
        let empty = t2.require(&Base::new()).map_err(|e| e.to_string())?;
        let witness = ev
            .entailment_counterexample(empty, &[f("p")], &f("q | r"))
            .map(|id| t2.base(id));
        ensure(witness == Some(base(&["p"])), || {
            format!("witness {witness:?}, expected {{p}}")
        })?;
        Ok("toy1 valid, toy2 invalid with witness {p}".into())
    });
}

#[test]
fn criterion_2_harrop_instance() {
    criterion(2, "Harrop instance", Duration::from_secs(10), || {
        let sys = harrop_system();
        ensure(sys.base_count() == 128, || format!("{} bases", sys.base_count()))?;
        let h = f("(p -> (q | r)) -> ((p -> q) | (p -> r))");
        let v = ptv_valid(&sys, &h, BotPolicy::Explosion).map_err(|e| e.to_string())?;
        ensure(v.valid, || "not valid".into())?;
        ensure(!ipc_provable(&h), || "provable".into())?;
        ensure(kripke_counterexample(&h, 2).is_none(), || {
            "countermodel with 2 worlds".into()
        })?;
        let m = kripke_counterexample(&h, 3).ok_or("no countermodel with 3 worlds")?;
        ensure(m.worlds() == 3 && !m.forces(0, &h), || format!("bad countermodel\n{m}"))?;
        Ok("valid in 128 bases, unprovable, 3-world countermodel".into())
    });
}

#[test]
fn criterion_3_double_negation() {
    criterion(3, "double negation elimination", Duration::from_secs(30), || {
        let dne = f("~~p -> p");
        let mut details = Vec::new();
        for sys in [generated(&["p"], 1, 2), generated(&["p", "q"], 1, 2)] {
            let ex = ptv_valid(&sys, &dne, BotPolicy::Explosion)
                .map_err(|e| e.to_string())?
                .valid;
            let at = ptv_valid(&sys, &dne, BotPolicy::Atom).map_err(|e| e.to_string())?.valid;
            details.push(format!(
                "{} ({} rules): explosion {ex}, atom {at}",
                sys.name(),
                sys.universe().len()
            ));
            ensure(ex && !at, || details.join("; "))?;
        }
        Ok(details.join("; "))
    });
}

#[test]
fn criterion_4_rule_formula_round_trip() {
    criterion(4, "rule/formula round trip", Duration::from_secs(120), || {
        let rules = all_rules(&["p", "q", "r"], 3, 2);
        let failures: Vec<String> = rules
            .iter()
            .filter(|r| {
                !round_trip_check(r)
                    || formula_to_rules(&rule_to_formula(r)).ok() != Some(BTreeSet::from([(*r).clone()]))
            })
            .map(|r| r.to_string())
            .take(5)
            .collect();
        ensure(failures.is_empty(), || format!("failures: {failures:?}"))?;
        let pinned = [
            ("(p, q => r)", "p & q -> r"),
            ("((p => q) => r)", "(p -> q) -> r"),
            ("(((p => q) => r) => s)", "((p -> q) -> r) -> s"),
            ("(p, (q => s), (r => s) => s)", "p & (q -> s) & (r -> s) -> s"),
            ("p", "p"),
        ];
        for (rule, formula) in pinned {
            let r = parse_rule(rule).unwrap();
            ensure(rule_to_formula(&r) == f(formula), || {
                format!("{rule} gave {}", rule_to_formula(&r))
            })?;
            let back = formula_to_rules(&f(formula)).map_err(|e| e.to_string())?;
            ensure(back == BTreeSet::from([r]), || format!("{formula} gave {back:?}"))?;
        }
        Ok(format!(
            "{} rules, 0 failures, {} pinned translations",
            rules.len(),
            pinned.len()
        ))
    });
}

#[test]
fn criterion_5_derivability_examples() {
    criterion(5, "pinned derivations", Duration::from_secs(1), || {
        let mut d = Deriver::new(BotPolicy::Explosion);
        let atom = |n: &str| Atom::new(n).unwrap();
        let s_base = base(&["p", "(q => r)", "(((p => q) => r) => s)"]);
        ensure(d.derives(&s_base, &atom("s")), || "s not derived".into())?;
        let t_base = base(&["p", "(q => r)", "(((((p => q) => r) => s) => s) => t)"]);
        ensure(d.derives(&t_base, &atom("t")), || "t not derived".into())?;
        for (b, goal) in [(&s_base, "s"), (&t_base, "t")] {
            let proof = d.explain(b, &atom(goal)).ok_or("no derivation")?;
            ensure(proof.check(b, BotPolicy::Explosion), || {
                format!("{goal} derivation does not check")
            })?;
        }
        let cycle = base(&["(p => q)", "(q => p)"]);
        ensure(!d.derives(&cycle, &atom("p")), || "cyclic support accepted".into())?;
        // The literal level-4 rule asks for s with only ((p => q) => r) added.
        let literal = base(&["p", "(q => r)", "((((p => q) => r) => s) => t)"]);
        let lit = d.derives(&literal, &atom("t"));
        Ok(format!(
            "s and t derived, cycle rejected; literal level-4 rule derives t: {lit}"
        ))
    });
}

#[test]
fn criterion_6_ipc_soundness() {
    criterion(6, "IPC soundness sweep", Duration::from_secs(300), || {
        let systems = [toy1(), toy2(), harrop_system()];
        let mut details = Vec::new();
        for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
            let r = ipc_soundness_sweep(&systems, &atoms(&["p", "q"]), true, 4, policy).map_err(|e| e.to_string())?;
            ensure(r.violations.is_empty(), || {
                let v: Vec<String> = r
                    .violations
                    .iter()
                    .take(5)
                    .map(|v| format!("{} in {}", v.formula, v.system))
                    .collect();
                format!("{policy}: violations {v:?}")
            })?;
            details.push(format!(
                "{policy}: {} formulas, {} needed the prover, 0 violations",
                r.formulas, r.candidates
            ));
        }
        Ok(details.join("; "))
    });
}

fn corpus() -> Vec<(String, Argument)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                parse_argument(&text).unwrap(),
            )
        })
        .collect()
}

#[test]
fn criterion_7_normalization() {
    criterion(7, "normalization corpus", Duration::from_secs(60), || {
        let detour = parse_argument(include_str!("corpus/03_imp_detour.sx")).unwrap();
        let steps = detours(&detour);
        ensure(steps.len() == 1, || format!("{} detours", steps.len()))?;
        let reduced = reduce_once(&detour, &steps[0]).map_err(|e| e.to_string())?;
        let grafted = parse_argument("(andI q & p (assume k q) (assume m p))").unwrap();
        ensure(reduced == grafted, || format!("reduced to {reduced}"))?;

        let corpus = corpus();
        ensure(corpus.len() == 25, || format!("{} arguments", corpus.len()))?;
        let systems = [toy1(), toy2()];
        let mut total_steps = 0;
        for (name, a) in &corpus {
            let n = normalize(a, DEFAULT_FUEL).map_err(|e| format!("{name}: {e}"))?;
            total_steps += n.steps();
            let out = &n.argument;
            ensure(out.conclusion() == a.conclusion(), || {
                format!("{name}: conclusion changed")
            })?;
            let before: BTreeSet<_> = a.open_formulas().into_iter().collect();
            let after: BTreeSet<_> = out.open_formulas().into_iter().collect();
            ensure(after.is_subset(&before), || format!("{name}: open assumptions grew"))?;
            for sys in &systems {
                for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
                    let v0 = s_valid_argument(sys, &Base::new(), a, policy)
                        .map_err(|e| e.to_string())?
                        .valid;
                    let v1 = s_valid_argument(sys, &Base::new(), out, policy)
                        .map_err(|e| e.to_string())?
                        .valid;
                    ensure(v0 == v1, || {
                        format!("{name}: verdict changed in {} under {policy}", sys.name())
                    })?;
                }
            }
        }
        Ok(format!(
            "one-step graft; 25 arguments normalized in {total_steps} steps, verdicts unchanged"
        ))
    });
}

#[test]
fn criterion_8_monotonicity_and_differential() {
    criterion(
        8,
        "monotonicity and differential evaluation",
        Duration::from_secs(600),
        || {
            let universe = generated(&["p", "q"], 2, 1).universe().to_vec();
            ensure(universe.len() == 8, || format!("{} rules", universe.len()))?;
            let pool = FormulaPool::new(&atoms(&["p", "q"]), true, 3, usize::MAX);
            let mut pairs = 0u64;
            for mask in 0u32..1 << universe.len() {
                let rules = universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, r)| r.clone());
                let sys = System::generated(GeneratorSpec::from_universe(rules)).map_err(|e| e.to_string())?;
                let extensions: Vec<Vec<usize>> = (0..sys.base_count()).map(|id| sys.extension_ids(id)).collect();
                for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
                    let mut ev = Evaluator::new(&sys, policy).map_err(|e| e.to_string())?;
                    for g in pool.formulas() {
                        let set = ev.validity_set(g);
                        let opt = ev.optimized_set(g).map_err(|e| e.to_string())?;
                        for (id, exts) in extensions.iter().enumerate() {
                            pairs += 1;
                            let brute = ev.valid_at(id, g);
                            ensure(brute == set.contains(id) && brute == opt.contains(id), || {
                                format!("{g} at {} ({policy}): routes disagree", sys.base(id))
                            })?;
                            if brute {
                                if let Some(e) = exts.iter().find(|&&e| !set.contains(e)) {
                                    return Err(format!("{g} valid at {} but not at {}", sys.base(id), sys.base(*e)));
                                }
                            }
                        }
                    }
                }
            }
            Ok(format!(
                "256 universes, {} formulas, {pairs} (base, formula, policy) checks, 0 discrepancies",
                pool.len()
            ))
        },
    );
}

fn audited(sys: &System, out: &SearchOutcome) -> Result<(), String> {
    let bad = audit(sys, &out.findings).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || {
        let f: Vec<String> = bad
            .iter()
            .take(5)
            .map(|&i| out.findings[i].formula.to_string())
            .collect();
        format!("{}: findings fail re-verification: {f:?}", sys.name())
    })
}

#[test]
fn criterion_9_explorer_audit() {
    criterion(9, "explorer audit", Duration::from_secs(300), || {
        let systems = [
            toy1(),
            toy2(),
            harrop_system(),
            generated(&["p"], 1, 2),
            generated(&["p", "q"], 1, 2),
        ];
        let mut emitted = 0;
        let mut toy1_has_target = false;
        for sys in &systems {
            for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
                let out = find_superintuitionistic(sys, SearchCaps::default(), policy).map_err(|e| e.to_string())?;
                audited(sys, &out)?;
                emitted += out.findings.len();
                if sys.name() == "toy1" && policy == BotPolicy::Explosion {
                    toy1_has_target = out.findings.iter().any(|x| x.formula == f("p -> q | r"));
                }
            }
        }
        ensure(toy1_has_target, || "toy1 findings lack p -> q | r".into())?;

        // The Harrop instance has depth 4, beyond the default caps.
        let sys = harrop_system();
        let caps = SearchCaps {
            max_depth: 4,
            max_formulas: usize::MAX,
            max_findings: usize::MAX,
            include_bot: false,
            certificates: false,
            ..SearchCaps::default()
        };
        let out = find_superintuitionistic(&sys, caps, BotPolicy::Explosion).map_err(|e| e.to_string())?;
        let target = harrop_instance(&f("p"));
        let at = out.findings.iter().position(|x| x.formula == target);
        ensure(at.is_some(), || "Harrop findings lack the Harrop instance".into())?;
        audited(&sys, &out)?;
        Ok(format!(
            "{emitted} default-cap findings and {} depth-4 Harrop findings re-verified; p -> q | r found in toy1, Harrop instance at #{}",
            out.findings.len(),
            at.unwrap() + 1
        ))
    });
}
