mod common;

use std::path::Path;

use common::sequences::{self, Expected};
use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::harness::{verify_source, Verdict};
use miniqt_bmc::opmodel::{
    self, CatalogError, ModelCatalog, ModelDiagnosticKind, EMPTY_LIST_MESSAGE,
    NONPOSITIVE_INTERVAL_MESSAGE, UNOPENED_FILE_MESSAGE,
};
use rand::Rng;

fn catalog_path(dir: &Path) -> std::path::PathBuf {
    dir.join("catalog.txt")
}

/// A private copy of the shipped models, for tampering.
fn copy_models() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(common::models_dir()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    dir
}

fn edit(dir: &Path, file: &str, f: impl Fn(&str) -> String) {
    let p = dir.join(file);
    let text = std::fs::read_to_string(&p).unwrap();
    std::fs::write(&p, f(&text)).unwrap();
}

#[test]
fn shipped_models_validate() {
    let catalog = ModelCatalog::load(&catalog_path(&common::models_dir())).unwrap();
    assert_eq!(catalog.models.len(), 3);
    let diags = opmodel::validate_models(&catalog, &VerifierConfig::default());
    assert!(diags.is_empty(), "{diags:?}");
}

#[test]
fn catalog_requirements_match_contracts() {
    let catalog = ModelCatalog::load(&catalog_path(&common::models_dir())).unwrap();
    let contracts = opmodel::shipped_contracts();
    for req in &catalog.required {
        let c = contracts
            .iter()
            .find(|c| c.method == req.method)
            .unwrap_or_else(|| panic!("{}", req.method));
        assert!(
            c.preconditions.iter().any(|(_, m)| *m == req.message),
            "{}",
            req.method
        );
    }
}

#[test]
fn deleted_assertion_is_reported() {
    let dir = copy_models();
    edit(dir.path(), "QList.mqt", |t| {
        let mut seen = false;
        t.lines()
            .filter(|l| {
                // Drop only the first precondition, the one in front().
                let drop = !seen && l.contains(EMPTY_LIST_MESSAGE);
                seen |= drop;
                !drop
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    let catalog = ModelCatalog::load(&catalog_path(dir.path())).unwrap();
    let diags = opmodel::validate_models(&catalog, &VerifierConfig::default());
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].kind, ModelDiagnosticKind::MissingRequiredAssertion);
    assert_eq!(diags[0].subject, "QList_int::front");
}

#[test]
fn reworded_assertion_is_reported() {
    let dir = copy_models();
    edit(dir.path(), "QFile.mqt", |t| {
        t.replace(UNOPENED_FILE_MESSAGE, "file should be open")
    });
    let catalog = ModelCatalog::load(&catalog_path(dir.path())).unwrap();
    let diags = opmodel::validate_models(&catalog, &VerifierConfig::default());
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].subject, "QFile::read");
}

#[test]
fn syntax_error_is_a_parse_diagnostic() {
    let dir = copy_models();
    edit(dir.path(), "QTimer.mqt", |t| {
        t.replacen("_active = true;", "_active = ;", 1)
    });
    let catalog = ModelCatalog::load(&catalog_path(dir.path())).unwrap();
    let diags = opmodel::validate_models(&catalog, &VerifierConfig::default());
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].kind, ModelDiagnosticKind::Parse);
    assert_eq!(diags[0].subject, "QTimer");
    assert!(diags[0].loc.is_some());
}

#[test]
fn catalog_syntax_errors_name_the_line() {
    let err = ModelCatalog::parse(
        "QList = QList.mqt\nrequire QList_int::front unquoted\n",
        Path::new("."),
    )
    .unwrap_err();
    assert!(matches!(err, CatalogError::Syntax { line: 2, .. }));
    let err = ModelCatalog::parse("what is this\n", Path::new(".")).unwrap_err();
    assert!(matches!(err, CatalogError::Syntax { line: 1, .. }));
}

#[test]
fn strict_interval_rejects_zero() {
    let src = "#include <QTimer>\nint main() { QTimer t; t.setInterval(0); return 0; }\n";
    let lax = common::config();
    assert_eq!(
        verify_source(src, "t.cpp", &lax).verdict,
        Verdict::Successful
    );
    let mut strict = common::config();
    strict.strict_positive_interval = true;
    let r = verify_source(src, "t.cpp", &strict);
    assert_eq!(
        r.verdict
            .counterexample()
            .expect("violation")
            .violated
            .message,
        NONPOSITIVE_INTERVAL_MESSAGE
    );
}

#[test]
fn missing_file_is_possible() {
    let src = "#include <QFile>\nint main() { QFile f(\"x\"); assert(f.exists()); return 0; }\n";
    let r = verify_source(src, "t.cpp", &common::config());
    assert!(r.verdict.counterexample().is_some());
}

/// Random operation sequences on a small-capacity list produce the verdict
/// a bounded deque predicts, in FIFO and LIFO use alike.
#[test]
fn list_model_follows_a_bounded_deque() {
    let mut rng = common::rng(0x1157);
    let (mut safe, mut unsafe_) = (0, 0);
    for case in 0..150 {
        let capacity = rng.gen_range(1..=4);
        let len = rng.gen_range(1..=8);
        let ops = sequences::random_ops(&mut rng, len, case % 2 == 0);
        let src = sequences::program(&ops, capacity);
        let cfg = common::config().with_container_capacity(capacity as u32);
        let r = verify_source(&src, "seq.cpp", &cfg);
        match sequences::expected(&ops, capacity) {
            Expected::Safe => {
                safe += 1;
                assert_eq!(r.verdict, Verdict::Successful, "case {case}\n{src}");
            }
            Expected::Violation(msg) => {
                unsafe_ += 1;
                let cex = r
                    .verdict
                    .counterexample()
                    .unwrap_or_else(|| panic!("case {case}\n{src}"));
                assert_eq!(cex.violated.message, msg, "case {case}\n{src}");
            }
        }
    }
    assert!(safe >= 20 && unsafe_ >= 20, "safe {safe} unsafe {unsafe_}");
}
