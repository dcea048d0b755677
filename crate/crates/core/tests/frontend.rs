mod common;

use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::frontend::{self, pretty, FrontendError};
use proptest::prelude::*;

fn parse(src: &str) -> frontend::ast::Program {
    let tokens = frontend::tokenize(src, "t.cpp").expect("lexes");
    frontend::parse(&tokens).expect("parses")
}

/// Printing and reparsing yields the same printed text.
fn assert_round_trip(src: &str) {
    let once = pretty::print_program(&parse(src));
    let twice = pretty::print_program(&parse(&once));
    assert_eq!(once, twice);
}

#[test]
fn corpus_round_trips() {
    for path in common::corpus() {
        let src = std::fs::read_to_string(&path).unwrap();
        assert_round_trip(&src);
    }
}

#[test]
fn models_round_trip() {
    for name in ["QList.mqt", "QTimer.mqt", "QFile.mqt"] {
        let src = std::fs::read_to_string(common::models_dir().join(name)).unwrap();
        assert_round_trip(&src);
    }
}

#[test]
fn corpus_typechecks() {
    let cfg = common::config();
    for path in common::corpus() {
        frontend::load_file(&path, &cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn template_instantiation_is_mangled() {
    let ast = frontend::load_source(
        "#include <QList>\nint main() { QList<int> l; l.push_back(1); return 0; }\n",
        "t.cpp",
        &common::config(),
    )
    .unwrap();
    assert!(ast.class("QList_int").is_some());
    assert!(ast.function("QList_int::push_back").is_some());
}

#[test]
fn missing_include_directory_is_reported() {
    let err = frontend::load_source(
        "#include <QList>\nint main() { return 0; }\n",
        "t.cpp",
        &VerifierConfig::default(),
    )
    .unwrap_err();
    assert!(matches!(err, FrontendError::IncludeNotFound { ref name, .. } if name == "QList"));
}

#[test]
fn parse_error_carries_location() {
    let tokens = frontend::tokenize("int main() {\n    int x = ;\n}\n", "bad.cpp").unwrap();
    let err = frontend::parse(&tokens).unwrap_err();
    let loc = err.loc().expect("located");
    assert_eq!((loc.line, &*loc.file), (2, "bad.cpp"));
}

#[test]
fn type_errors_are_rejected() {
    let cfg = VerifierConfig::default();
    for src in [
        "int main() { bool b = 1 + true; return 0; }",
        "int main() { return y; }",
        "int main() { int x = 0; x.push_back(1); return 0; }",
        "int f(int a) { return a; } int main() { return f(1, 2); }",
    ] {
        assert!(frontend::load_source(src, "t.cpp", &cfg).is_err(), "{src}");
    }
}

#[test]
fn entry_point_is_required() {
    let err = frontend::load_source("int f() { return 0; }", "t.cpp", &VerifierConfig::default())
        .unwrap_err();
    assert!(matches!(
        err,
        FrontendError::UndefinedSymbol { .. } | FrontendError::Type { .. }
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_programs_round_trip(seed in any::<u64>()) {
        let p = common::programs::generate(&mut common::rng(seed));
        assert_round_trip(&p.print().source);
    }
}
