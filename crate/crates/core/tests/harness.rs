mod common;

use std::path::Path;

use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::harness::{
    self, classify, compute_rates, format_counterexample, parse_manifest, rate, Category, Counts,
    Expectation, RateError, SuiteError, Verdict,
};
use proptest::prelude::*;

const FRONT_EMPTY: &str =
    "#include <QList>\n\nint main() {\n    QList<int> l;\n    l.front();\n    return 0;\n}\n";

#[test]
fn successful_prints_exactly_the_verdict() {
    let r = harness::verify_source(
        "int main() { assert(1 + 1 == 2); return 0; }",
        "t.cpp",
        &VerifierConfig::default(),
    );
    assert_eq!(format_counterexample(&r), "VERIFICATION SUCCESSFUL");
}

#[test]
fn failure_report_names_property_location_and_steps() {
    let r = harness::verify_source(FRONT_EMPTY, "front.cpp", &common::config());
    let text = format_counterexample(&r);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("VERIFICATION FAILED"));
    assert_eq!(
        lines.next(),
        Some("Violated property: The list must not be empty")
    );
    assert!(text.contains("QList.mqt:27"), "{text}");
    assert!(
        text.contains("call QList_int::front(&main::l) (front.cpp:5)"),
        "{text}"
    );
    assert!(text.lines().any(|l| l.starts_with("State 1: ")));
}

#[test]
fn nondet_violation_shows_the_input() {
    let src = "int main() {\n    int x = nondet_int();\n    assert(x != 3);\n    return 0;\n}\n";
    let r = harness::verify_source(src, "n.cpp", &VerifierConfig::default());
    let text = format_counterexample(&r);
    assert!(text.contains("State 1: main::x = 3 (n.cpp:2)"), "{text}");
}

#[test]
fn frontend_errors_become_tool_errors() {
    let r = harness::verify_source(
        "#include <QList>\nint main() { return 0; }",
        "t.cpp",
        &VerifierConfig::default(),
    );
    assert!(matches!(&r.verdict, Verdict::ToolError { message } if message.contains("QList")));
    let r = harness::verify_file(
        Path::new("/nonexistent/file.cpp"),
        &VerifierConfig::default(),
    );
    assert!(matches!(r.verdict, Verdict::ToolError { .. }));
}

#[test]
fn invalid_configuration_is_a_tool_error() {
    let r = harness::verify_source(
        "int main() { return 0; }",
        "t.cpp",
        &VerifierConfig::default().with_unwind(0),
    );
    assert!(matches!(r.verdict, Verdict::ToolError { .. }));
}

/// Factoring a 32-bit semiprime is far beyond one second of search.
const HARD: &str = "int main() {\n    int x = nondet_int();\n    int y = nondet_int();\n    __VERIFIER_assume(x > 1 && y > 1 && x < 65536 && y < 65536);\n    assert(x * y != 1073602561);\n    return 0;\n}\n";

#[test]
fn hard_query_times_out() {
    let cfg = VerifierConfig {
        timeout_seconds: 1,
        ..VerifierConfig::default()
    };
    let r = harness::verify_source(HARD, "hard.cpp", &cfg);
    assert_eq!(r.verdict, Verdict::Timeout);
    assert!(r.wall_time_seconds < 5.0);
}

#[test]
fn tiny_memory_limit_reports_memout() {
    let mut cfg = common::config();
    cfg.mem_limit_kb = 1;
    let src =
        std::fs::read_to_string(common::benchmarks_dir().join("qlist/overflow_push_front.cpp"))
            .unwrap();
    assert_eq!(
        harness::verify_source(&src, "t.cpp", &cfg).verdict,
        Verdict::MemOut
    );
}

#[test]
fn manifest_parsing() {
    let root = common::benchmarks_dir();
    let cases = parse_manifest(
        "# comment\n\nqlist/fig3.cpp TRUE # the figure\nqlist/front_empty.cpp FALSE \"The list must not be empty\"\nqfile/read_unopened.cpp FALSE\n",
        &root,
    )
    .unwrap();
    assert_eq!(cases.len(), 3);
    assert_eq!(cases[0].expected, Expectation::Successful);
    assert_eq!(cases[0].description, "the figure");
    assert_eq!(
        cases[1].expected,
        Expectation::Failed {
            message: Some("The list must not be empty".into())
        }
    );
    assert_eq!(cases[2].expected, Expectation::Failed { message: None });
}

#[test]
fn manifest_errors_abort_before_running() {
    let root = common::benchmarks_dir();
    assert!(matches!(
        parse_manifest("qlist/fig3.cpp MAYBE\n", &root),
        Err(SuiteError::Syntax { line: 1, .. })
    ));
    assert!(matches!(
        parse_manifest("qlist/fig3.cpp\n", &root),
        Err(SuiteError::Syntax { .. })
    ));
    assert!(matches!(
        parse_manifest("qlist/fig3.cpp TRUE \"x\"\n", &root),
        Err(SuiteError::Syntax { .. })
    ));
    assert!(matches!(
        parse_manifest("nope.cpp TRUE\n", &root),
        Err(SuiteError::MissingCase { .. })
    ));
    assert!(matches!(
        parse_manifest("# nothing\n", &root),
        Err(SuiteError::Empty)
    ));
    assert!(matches!(
        harness::run_suite(
            Path::new("/nonexistent/manifest.txt"),
            &VerifierConfig::default(),
            1
        ),
        Err(SuiteError::Io { .. })
    ));
}

#[test]
fn one_passing_case() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("ok.cpp"),
        "int main() { assert(2 > 1); return 0; }",
    )
    .unwrap();
    std::fs::write(dir.path().join("m.txt"), "ok.cpp TRUE\n").unwrap();
    let report =
        harness::run_suite(&dir.path().join("m.txt"), &VerifierConfig::default(), 1).unwrap();
    assert_eq!(report.counts.successful, 1);
    assert_eq!(report.total, 1);
    assert_eq!(report.rates.successful.to_string(), "100.00%");
}

#[test]
fn every_mismatch_category_is_reachable() {
    let dir = tempfile::tempdir().unwrap();
    let w = |name: &str, src: &str| std::fs::write(dir.path().join(name), src).unwrap();
    w("safe.cpp", "int main() { return 0; }");
    w("bug.cpp", "int main() { assert(false); return 0; }");
    w("broken.cpp", "int main( { }");
    std::fs::write(
        dir.path().join("m.txt"),
        "bug.cpp TRUE\nsafe.cpp FALSE\nbug.cpp FALSE \"no such message\"\nbroken.cpp TRUE\nsafe.cpp TRUE\n",
    )
    .unwrap();
    let report =
        harness::run_suite(&dir.path().join("m.txt"), &VerifierConfig::default(), 2).unwrap();
    let cats: Vec<Category> = report.cases.iter().map(|c| c.category).collect();
    assert_eq!(
        cats,
        [
            Category::FalseIncorrect,
            Category::FalseCorrect,
            Category::WrongProperty,
            Category::Failed,
            Category::Successful
        ]
    );
    assert_eq!(report.counts.total(), 5);
    let table = report.to_table();
    assert!(table.contains("false incorrect"));
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let first = &json["cases"][0];
    for key in [
        "path",
        "expected",
        "actual",
        "category",
        "wall_time_seconds",
        "peak_memory_kb",
    ] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let cfg = common::config();
    let strip = |mut v: serde_json::Value| {
        v["total_wall_time_seconds"] = 0.into();
        for c in v["cases"].as_array_mut().unwrap() {
            c["wall_time_seconds"] = 0.into();
        }
        v
    };
    let a = harness::run_suite(&common::manifest(), &cfg, 4).unwrap();
    let b = harness::run_suite(&common::manifest(), &cfg, 1).unwrap();
    let ja = strip(serde_json::from_str(&a.to_json()).unwrap());
    let jb = strip(serde_json::from_str(&b.to_json()).unwrap());
    assert_eq!(ja, jb);
}

#[test]
fn rates_for_a_fixed_split() {
    let counts = Counts {
        successful: 51,
        false_incorrect: 1,
        failed: 2,
        ..Counts::default()
    };
    let r = compute_rates(&counts).unwrap();
    assert_eq!(
        (
            r.successful.to_string(),
            r.false_incorrect.to_string(),
            r.failed.to_string()
        ),
        ("94.44%".into(), "1.85%".into(), "3.70%".into())
    );
    assert_eq!(compute_rates(&Counts::default()), Err(RateError::ZeroTotal));
}

fn verdict_strategy() -> impl Strategy<Value = Verdict> {
    prop_oneof![
        Just(Verdict::Successful),
        Just(Verdict::Timeout),
        Just(Verdict::MemOut),
        Just(Verdict::ToolError {
            message: "x".into()
        }),
    ]
}

proptest! {
    /// Rounded rates add up to 100% within the rounding of each category.
    #[test]
    fn rates_sum_to_one_hundred(c in prop::array::uniform7(0u64..200)) {
        let counts = Counts {
            successful: c[0], false_incorrect: c[1], false_correct: c[2], wrong_property: c[3],
            failed: c[4], timeout: c[5], memout: c[6],
        };
        prop_assume!(counts.total() > 0);
        let r = compute_rates(&counts).unwrap();
        let sum: i64 = Category::ALL.iter().map(|k| r.get(*k).0 as i64).sum();
        prop_assert!((sum - 10_000).abs() <= 4, "sum {}", sum);
    }

    /// Half-up rounding of `100 * count / total` to hundredths.
    #[test]
    fn rate_rounds_half_up(total in 1u64..10_000, frac in 0.0f64..=1.0) {
        let count = (frac * total as f64) as u64;
        let r = rate(count, total).unwrap().0;
        let exact = 10_000.0 * count as f64 / total as f64;
        prop_assert!((r as f64 - exact) <= 0.5 + 1e-9 && (exact - r as f64) < 0.5 + 1e-9);
    }

    /// Classification depends only on the expectation and the verdict.
    #[test]
    fn classification_is_pure(v in verdict_strategy(), expect_ok in any::<bool>()) {
        let e = if expect_ok { Expectation::Successful } else { Expectation::Failed { message: None } };
        prop_assert_eq!(classify(&e, &v), classify(&e.clone(), &v.clone()));
        let expected = match (&v, expect_ok) {
            (Verdict::Successful, true) => Category::Successful,
            (Verdict::Successful, false) => Category::FalseCorrect,
            (Verdict::Timeout, _) => Category::Timeout,
            (Verdict::MemOut, _) => Category::MemOut,
            _ => Category::Failed,
        };
        prop_assert_eq!(classify(&e, &v), expected);
    }
}
