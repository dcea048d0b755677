mod common;

use common::programs::{self, Outcome, UNWIND, WIDTH};
use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::frontend;
use miniqt_bmc::goto::{self, InstrKind, LoopRole, PropertyClass};
use miniqt_bmc::symex::{concrete_interpret, Verdict};

fn lower(src: &str, cfg: &VerifierConfig) -> goto::GotoProgram {
    goto::lower_to_goto(&frontend::load_source(src, "gen.cpp", cfg).expect("frontend"))
}

#[test]
fn corpus_lowers_to_well_formed_programs() {
    let cfg = common::config();
    for path in common::corpus() {
        let p = goto::lower_to_goto(&frontend::load_file(&path, &cfg).unwrap());
        let diags = goto::validate_goto(&p);
        assert!(diags.is_empty(), "{}: {diags:?}", path.display());
        for (f, i, ins) in p.instructions() {
            if let InstrKind::Goto { target, .. } = ins.kind {
                assert!(target < f.body.len(), "{}@{i}", f.name);
            }
            if let InstrKind::Assert { message, .. } = &ins.kind {
                assert!(!message.is_empty());
                assert!(ins.loc.line > 0);
            }
        }
    }
}

#[test]
fn loops_have_one_exit_and_one_back_edge() {
    let cfg = common::config();
    let p = lower(
        "int main() { int s = 0; for (int i = 0; i < 3; i++) { while (s < 10) { s++; } } return s; }",
        &cfg,
    );
    let main = p.function("main").unwrap();
    let heads = main.loop_heads();
    assert_eq!(heads.len(), 2);
    for id in heads.keys() {
        let count = |role| {
            main.body
                .iter()
                .filter(|i| matches!(&i.kind, InstrKind::Goto { loop_tag: Some(t), .. } if t.loop_id == *id && t.role == role))
                .count()
        };
        assert_eq!((count(LoopRole::Exit), count(LoopRole::BackEdge)), (1, 1));
    }
}

#[test]
fn array_accesses_get_bounds_assertions() {
    let p = lower(
        "#include <QList>\nint main() { QList<int> l; l.push_back(1); return 0; }\n",
        &common::config(),
    );
    let push = p.function("QList_int::push_back").unwrap();
    assert!(push.body.iter().any(|i| matches!(
        &i.kind,
        InstrKind::Assert { class: PropertyClass::ArrayBounds, message, .. } if message == goto::ARRAY_BOUNDS_MESSAGE
    )));
    assert!(push.is_model);
    assert_eq!(push.params[0].name, "this");
}

#[test]
fn display_lists_every_function() {
    let p = lower(
        "int sq(int x) { return x * x; }\nint main() { assert(sq(3) == 9); return 0; }\n",
        &VerifierConfig::default(),
    );
    let text = p.to_string();
    assert!(text.contains("main"));
    assert!(text.contains("sq"));
}

/// Lowering preserves the meaning of generated programs: the GOTO
/// interpreter and the reference evaluator agree on every input.
#[test]
fn lowering_preserves_semantics() {
    let cfg = VerifierConfig::default()
        .with_int_width(WIDTH)
        .with_unwind(UNWIND);
    let mut rng = common::rng(0x601d);
    for case in 0..100 {
        let gp = programs::generate(&mut rng);
        let printed = gp.print();
        let p = lower(&printed.source, &cfg);
        for inputs in gp.inputs() {
            let expected = gp.evaluate(&inputs);
            let trace = concrete_interpret(&p, &inputs, 1_000_000).expect("interprets");
            let actual = match trace.verdict {
                Verdict::Completed => Outcome::Completed,
                Verdict::AssertionViolated { loc, .. } => Outcome::Violated(loc.line),
                Verdict::AssumptionFailed { .. } => Outcome::AssumeFailed,
                Verdict::StepLimit => panic!("case {case}: step limit"),
            };
            assert_eq!(
                actual, expected,
                "case {case} inputs {inputs:?}\n{}",
                printed.source
            );
        }
    }
}
