mod common;

use std::collections::HashMap;

use common::programs::{self, UNWIND, WIDTH};
use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::frontend;
use miniqt_bmc::goto::{self, PropertyClass, RECURSION_MESSAGE, UNWINDING_MESSAGE};
use miniqt_bmc::harness::{verify_source, Verdict};
use miniqt_bmc::smt::{Node, Sort, TermId};
use miniqt_bmc::symex::{self, SsaSystem};

fn ssa_of(src: &str, cfg: &VerifierConfig) -> SsaSystem {
    let ast = frontend::load_source(src, "t.cpp", cfg).expect("frontend");
    symex::symex(&goto::lower_to_goto(&ast), cfg).expect("symex")
}

/// Every guard is Boolean and every term mentions only variables defined
/// earlier in execution order.
fn assert_well_formed(ssa: &SsaSystem, what: &str) {
    assert!(
        ssa.duplicate_definitions().is_empty(),
        "{what}: {:?}",
        ssa.duplicate_definitions()
    );
    let mut defined_at: HashMap<_, u64> = HashMap::new();
    for e in &ssa.equations {
        defined_at.insert(e.lhs.clone(), e.seq);
        assert!(
            matches!(ssa.pool.node(e.lhs_term), Node::Var(v, _) if *v == e.lhs),
            "{what}"
        );
        assert_eq!(
            ssa.pool.sort(e.lhs_term),
            ssa.pool.sort(e.rhs),
            "{what}: {}",
            e.lhs
        );
    }
    for i in &ssa.inputs {
        defined_at.insert(i.var.clone(), i.seq);
    }
    let check = |roots: &[TermId], seq: u64| {
        for t in ssa.pool.reachable(roots) {
            if let Node::Var(v, _) = ssa.pool.node(t) {
                let d = defined_at
                    .get(v)
                    .unwrap_or_else(|| panic!("{what}: {v} never defined"));
                assert!(
                    *d <= seq,
                    "{what}: {v} used at {seq} before its definition at {d}"
                );
            }
        }
    };
    for e in &ssa.equations {
        assert_eq!(ssa.pool.sort(e.guard), Sort::Bool);
        check(&[e.guard], e.seq);
        check(&[e.rhs], e.seq);
    }
    for c in &ssa.claims {
        assert_eq!(ssa.pool.sort(c.guard), Sort::Bool);
        assert_eq!(ssa.pool.sort(c.condition), Sort::Bool);
        check(&[c.guard, c.condition], c.seq);
    }
    let mut seqs: Vec<u64> = ssa
        .equations
        .iter()
        .map(|e| e.seq)
        .chain(ssa.claims.iter().map(|c| c.seq))
        .chain(ssa.inputs.iter().map(|i| i.seq))
        .chain(ssa.calls.iter().map(|c| c.seq))
        .collect();
    let n = seqs.len();
    seqs.sort_unstable();
    seqs.dedup();
    assert_eq!(seqs.len(), n, "{what}: sequence numbers are unique");
}

#[test]
fn corpus_ssa_is_well_formed() {
    let cfg = common::config();
    for path in common::corpus() {
        let ast = frontend::load_file(&path, &cfg).unwrap();
        let ssa = symex::symex(&goto::lower_to_goto(&ast), &cfg).unwrap();
        assert_well_formed(&ssa, &path.display().to_string());
    }
}

#[test]
fn generated_ssa_is_well_formed() {
    let cfg = VerifierConfig::default()
        .with_int_width(WIDTH)
        .with_unwind(UNWIND);
    let mut rng = common::rng(0x55a);
    for i in 0..100 {
        let src = programs::generate(&mut rng).print().source;
        assert_well_formed(&ssa_of(&src, &cfg), &format!("generated #{i}"));
    }
}

#[test]
fn assignments_get_fresh_versions() {
    let cfg = VerifierConfig::default().with_constant_propagation(false);
    let ssa = ssa_of(
        "int main() { int x = nondet_int(); x = x + 2; assert(x != 5); return 0; }",
        &cfg,
    );
    let text = ssa.to_string();
    assert!(text.contains("main::x#3 := (main::x#2 + 2)"), "{text}");
}

#[test]
fn constant_propagation_folds_known_values() {
    let on = ssa_of(
        "int main() { int x = 1; x = x + 2; assert(x == 3); return 0; }",
        &VerifierConfig::default(),
    );
    assert!(on
        .claims
        .iter()
        .all(|c| on.pool.as_bool(c.condition) == Some(true)));
    let off = ssa_of(
        "int main() { int x = 1; x = x + 2; assert(x == 3); return 0; }",
        &VerifierConfig::default().with_constant_propagation(false),
    );
    assert!(off
        .claims
        .iter()
        .any(|c| off.pool.as_bool(c.condition).is_none()));
}

#[test]
fn branches_merge_with_phi() {
    let ssa = ssa_of(
        "int main() { int x = nondet_int(); int y = 0; if (x > 0) { y = 1; } else { y = 2; } assert(y > 0); return 0; }",
        &VerifierConfig::default(),
    );
    assert!(ssa
        .equations
        .iter()
        .any(|e| e.kind == symex::EquationKind::Phi));
}

fn loop_program(iterations: u32) -> String {
    format!("int main() {{ int i = 0; while (i < {iterations}) {{ i++; }} assert(i == {iterations}); return 0; }}")
}

#[test]
fn loop_within_bound_verifies() {
    let cfg = VerifierConfig::default().with_unwind(5);
    assert_eq!(
        verify_source(&loop_program(5), "t.cpp", &cfg).verdict,
        Verdict::Successful
    );
}

#[test]
fn loop_beyond_bound_fails_only_the_unwinding_claim() {
    let cfg = VerifierConfig::default().with_unwind(5);
    let r = verify_source(&loop_program(6), "t.cpp", &cfg);
    let cex = r.verdict.counterexample().expect("violation");
    assert_eq!(cex.violated.message, UNWINDING_MESSAGE);
    assert_eq!(cex.violated.class, PropertyClass::Unwinding);

    let off = cfg.with_unwinding_assertions(false);
    assert_eq!(
        verify_source(&loop_program(6), "t.cpp", &off).verdict,
        Verdict::Successful
    );
}

#[test]
fn unwinding_claim_is_the_only_unwinding_claim_per_loop() {
    let cfg = VerifierConfig::default().with_unwind(3);
    let ssa = ssa_of(&loop_program(10), &cfg);
    let unwinding: Vec<_> = ssa
        .claims
        .iter()
        .filter(|c| c.class == PropertyClass::Unwinding)
        .collect();
    assert_eq!(unwinding.len(), 1);
    let off = ssa_of(
        &loop_program(10),
        &cfg.clone().with_unwinding_assertions(false),
    );
    assert!(off
        .claims
        .iter()
        .all(|c| c.class != PropertyClass::Unwinding));
}

#[test]
fn deep_recursion_hits_the_recursion_bound() {
    let src = "int down(int n) { if (n == 0) { return 0; } return down(n - 1); }\n\
               int main() { int r = down(8); return r; }";
    let r = verify_source(src, "t.cpp", &VerifierConfig::default().with_unwind(4));
    assert_eq!(
        r.verdict
            .counterexample()
            .expect("violation")
            .violated
            .message,
        RECURSION_MESSAGE
    );
    let r = verify_source(src, "t.cpp", &VerifierConfig::default().with_unwind(10));
    assert_eq!(r.verdict, Verdict::Successful);
}

#[test]
fn assumptions_restrict_paths() {
    let src = "int main() { int x = nondet_int(); __VERIFIER_assume(x > 3 && x < 6); assert(x == 4 || x == 5); return 0; }";
    assert_eq!(
        verify_source(src, "t.cpp", &VerifierConfig::default()).verdict,
        Verdict::Successful
    );
}

#[test]
fn nondet_inputs_are_recorded() {
    let ssa = ssa_of(
        "int main() { int a = nondet_int(); int b = nondet_int(); assert(a != b); return 0; }",
        &VerifierConfig::default(),
    );
    assert_eq!(ssa.inputs.len(), 2);
    assert!(ssa.inputs[0].seq < ssa.inputs[1].seq);
}

#[test]
fn symex_respects_a_past_deadline() {
    let cfg = VerifierConfig::default().with_unwind(50);
    let ast = frontend::load_source(&loop_program(200), "t.cpp", &cfg).unwrap();
    let p = goto::lower_to_goto(&ast);
    let past = std::time::Instant::now() - std::time::Duration::from_secs(1);
    assert!(matches!(
        symex::symex_until(&p, &cfg, Some(past)),
        Err(symex::SymexError::Timeout)
    ));
}
