//! The law harness as a whole: sensitivity to corrupted structure,
//! reproducibility of reports and the command-line round trip.

use proptest::prelude::*;
use revdiff::cli;
use revdiff::laws::{run_suite, LawParams, LawReport, ModelKind, Suite, SuiteRun, Verdict};
use revdiff::model::Fault;

const MONOIDAL: [Suite; 6] = [Suite::Modality, Suite::Bialgebra, Suite::Differential, Suite::Reverse, Suite::Compact, Suite::Seely];

fn monoidal(params: &LawParams) -> Vec<LawReport> {
    MONOIDAL.iter().flat_map(|s| run_suite(*s, params).unwrap()).collect()
}

fn failed(reports: &[LawReport]) -> Vec<&str> {
    reports.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.law.as_str()).collect()
}

#[test]
fn every_mutant_policy_is_caught() {
    // alphabet 2: the !f coefficients only matter once two letters can mix
    let base = LawParams::new(ModelKind::Nat, 2);
    assert_eq!(failed(&monoidal(&base)), Vec::<&str>::new());
    for policy in ["both-multinomial", "plain-nabla", "d-const-one", "d-size-plus-one", "matchings"] {
        let reports = monoidal(&base.clone().with_policy(policy));
        assert!(!failed(&reports).is_empty(), "policy {policy} passed every law");
        for r in reports.iter().filter(|r| r.verdict == Verdict::Fail) {
            assert!(r.counterexample.is_some(), "{policy}: {} failed without a witness", r.law);
        }
    }
}

#[test]
fn every_fault_is_caught() {
    for kind in [ModelKind::Rel, ModelKind::Nat, ModelKind::Gf2rel, ModelKind::Ext2] {
        for fault in [Fault::DropEmptyD, Fault::EpsilonOnPairs, Fault::REmptyFirst] {
            let params = LawParams { fault: Some(fault), ..LawParams::new(kind, 2) };
            let reports = monoidal(&params);
            assert!(!failed(&reports).is_empty(), "{fault:?} on {kind} passed every law");
            assert!(reports.iter().filter(|r| r.verdict == Verdict::Fail).all(|r| r.counterexample.is_some()));
        }
    }
}

fn timeless(reports: Vec<LawReport>) -> Vec<LawReport> {
    reports.iter().map(LawReport::timeless).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_are_reproducible(seed in any::<u64>(), kind in prop::sample::select(vec![ModelKind::Rel, ModelKind::Nat, ModelKind::Ext2, ModelKind::Poly, ModelKind::Smooth])) {
        let params = LawParams { seed, samples: 4, ..LawParams::new(kind, 1) };
        let suite = if kind.is_cartesian() { Suite::CokleisliRd } else { Suite::Differential };
        let a = timeless(run_suite(suite, &params).unwrap());
        let b = timeless(run_suite(suite, &params).unwrap());
        prop_assert_eq!(a, b);
    }
}

fn run_to_string(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut full = vec!["revdiff"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let code = cli::run(full);
    (code, std::fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn structured_reports_parse_back_losslessly() {
    let (code, text) = run_to_string(&["laws", "--suite", "bialgebra", "--model", "nat", "--alphabet", "1", "--degree", "2", "--policy", "both-multinomial", "--format", "structured"]);
    assert_eq!(code, cli::EXIT_LAW_FAILED);
    let run: SuiteRun = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&run).unwrap() + "\n", text);
    let bimonoid = run.reports.iter().find(|r| r.law == "bimonoid").unwrap();
    assert_eq!(bimonoid.verdict, Verdict::Fail);
    let w = bimonoid.counterexample.as_ref().unwrap();
    assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("4", "2"));
}

#[test]
fn cli_output_is_deterministic() {
    for args in [
        &["laws", "--suite", "differential", "--model", "rel", "--alphabet", "2", "--seed", "7"][..],
        &["dump", "--model", "nat", "--map", "delta", "--alphabet", "1", "--degree", "2"][..],
        &["rderive", "--expr", "(x1*x2, sin(x1))", "--point", "0.5,1", "--cotangent", "1,2"][..],
    ] {
        let (c1, a) = run_to_string(args);
        let (c2, b) = run_to_string(args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        // the wall-time column is the only thing allowed to differ
        let strip = |s: &str| {
            s.lines().map(|l| if l.ends_with("ms") { l.rsplit_once(' ').map_or(l, |(h, _)| h) } else { l }.to_string()).collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b), "{args:?}");
    }
}

#[test]
fn dumps_match_the_row_formulas() {
    let (_, r) = run_to_string(&["dump", "--model", "rel", "--map", "r", "--alphabet", "1", "--degree", "2"]);
    assert!(r.lines().any(|l| l == "([a],[a,a])\ta\t1"), "{r}");
    let (_, d) = run_to_string(&["dump", "--model", "ext2", "--n", "1", "--map", "d"]);
    assert_eq!(d, "({},v1)\t{1}\t1\n");
    let (_, rd) = run_to_string(&["rderive", "--expr", "x1^2*x2 + sin(x2)", "--point", "1,0", "--cotangent", "1"]);
    assert!(rd.ends_with("R[f]((1, 0), (1)) = (0, 2)\n"), "{rd}");
}

#[test]
fn cli_errors_have_their_codes() {
    let code = |args: &[&str]| run_to_string(args).0;
    assert_eq!(code(&["laws", "--model", "smooth", "--suite", "seely"]), cli::EXIT_USAGE);
    assert_eq!(code(&["rderive", "--expr", "x1*x2", "--point", "1,2,3"]), cli::EXIT_USAGE);
    assert_eq!(code(&["descend", "--expr", "x1^2", "--lr", "-0.5"]), cli::EXIT_USAGE);
    assert_eq!(code(&["descend", "--expr", "x1^4", "--init", "10", "--lr", "10", "--steps", "50"]), cli::EXIT_DIVERGED);
    let (c, traj) = run_to_string(&["descend", "--expr", "x1^2 + x2^2", "--init", "1,2", "--steps", "0"]);
    assert_eq!(c, 0);
    assert_eq!(traj, "0\t1.0 2.0\t5.0\n");
}
