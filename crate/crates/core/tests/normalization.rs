use std::path::{Path, PathBuf};

use ptv_core::arguments::{detours, normalize_with, s_valid_argument, Strategy, DEFAULT_FUEL};
use ptv_core::{
    check_wellformed, load_system, normalize, parse_argument, print_argument, Argument, Base, BotPolicy, System,
};

fn corpus() -> Vec<(String, Argument)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sx"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let a = parse_argument(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, a)
        })
        .collect()
}

fn fixture(name: &str) -> System {
    load_system(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)).unwrap()
}

#[test]
fn corpus_has_twenty_five_wellformed_arguments() {
    let c = corpus();
    assert_eq!(c.len(), 25);
    for (name, a) in &c {
        assert_eq!(check_wellformed(a), vec![], "{name}");
        assert_eq!(&parse_argument(&print_argument(a)).unwrap(), a, "{name}");
    }
}

#[test]
fn normalization_terminates_and_preserves_conclusion() {
    for (name, a) in corpus() {
        let n = normalize(&a, DEFAULT_FUEL).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(detours(&n.argument).is_empty(), "{name}");
        assert_eq!(n.argument.conclusion(), a.conclusion(), "{name}");
        let before = a.open_assumptions();
        for (label, f) in n.argument.open_assumptions() {
            assert_eq!(before.get(&label), Some(&f), "{name}: new open assumption {label}");
        }
        assert_eq!(check_wellformed(&n.argument), vec![], "{name}");
    }
}

#[test]
fn detour_counts() {
    let c = corpus();
    let steps = |name: &str| {
        let (_, a) = c.iter().find(|(n, _)| n.contains(name)).unwrap();
        normalize(a, DEFAULT_FUEL).unwrap().steps()
    };
    assert_eq!(steps("imp_detour"), 1);
    assert_eq!(steps("double_detour"), 2);
    assert_eq!(steps("modus_ponens"), 0);
}

#[test]
fn strategies_agree_on_pure_arguments() {
    for (name, a) in corpus() {
        if a.uses_atomic_rules() {
            continue;
        }
        let lo = normalize_with(&a, DEFAULT_FUEL, Strategy::LeftmostOutermost).unwrap();
        let ri = normalize_with(&a, DEFAULT_FUEL, Strategy::RightmostInnermost).unwrap();
        assert_eq!(lo.argument, ri.argument, "{name}");
    }
}

#[test]
fn closed_normal_pure_arguments_end_in_introductions() {
    for (name, a) in corpus() {
        if a.uses_atomic_rules() || !a.is_closed() {
            continue;
        }
        let n = normalize(&a, DEFAULT_FUEL).unwrap().argument;
        assert!(n.kind().is_some_and(|k| k.is_introduction()), "{name}");
    }
}

#[test]
fn validity_is_invariant_under_normalization() {
    let systems = [fixture("toy1.sys"), fixture("toy2.sys")];
    for sys in &systems {
        for policy in [BotPolicy::Explosion, BotPolicy::Atom] {
            for (name, a) in corpus() {
                let n = normalize(&a, DEFAULT_FUEL).unwrap().argument;
                let before = s_valid_argument(sys, &Base::default(), &a, policy).unwrap().valid;
                let after = s_valid_argument(sys, &Base::default(), &n, policy).unwrap().valid;
                assert_eq!(before, after, "{name} in {} under {policy}", sys.name());
            }
        }
    }
}

#[test]
fn modus_ponens_is_valid_in_toy_system_one() {
    let a = parse_argument("(impE q (assume h1 p -> q) (assume h2 p))").unwrap();
    let v = s_valid_argument(&fixture("toy1.sys"), &Base::default(), &a, BotPolicy::Explosion).unwrap();
    assert!(v.valid);
    let cert = v.certificate.unwrap();
    assert_eq!(cert.replay(&fixture("toy1.sys")), Ok(true));
}

#[test]
fn assumption_alone_is_valid_everywhere() {
    let a = parse_argument("(assume h p | q)").unwrap();
    for sys in [fixture("toy1.sys"), fixture("toy2.sys")] {
        for base in sys.enumerate_bases() {
            assert!(s_valid_argument(&sys, &base, &a, BotPolicy::Explosion).unwrap().valid);
        }
    }
}
