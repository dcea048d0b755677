//! SMT-LIB 2 output in the QF_BV logic.

use std::fmt::Write;

use super::term::{Node, Sort, TermId, TermPool};

/// Renders `root` as a self-contained script: declarations, one
/// `define-fun` per shared subterm, a single assertion, `check-sat` and
/// `get-model`.
pub fn emit_smtlib(pool: &TermPool, root: TermId) -> String {
    assert_eq!(
        pool.sort(root),
        Sort::Bool,
        "emit_smtlib needs a Boolean term"
    );
    let mut out = String::from("(set-logic QF_BV)\n");
    let reachable = pool.reachable(&[root]);
    for &t in &reachable {
        if let Node::Var(v, sort) = pool.node(t) {
            let _ = writeln!(out, "(declare-const |{v}| {sort})");
        }
    }
    for &t in &reachable {
        if is_compound(pool.node(t)) {
            let _ = writeln!(
                out,
                "(define-fun t{} () {} {})",
                t.0,
                pool.sort(t),
                render(pool, t)
            );
        }
    }
    let _ = writeln!(out, "(assert {})", atom(pool, root));
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

fn is_compound(n: &Node) -> bool {
    !matches!(n, Node::BoolConst(_) | Node::BvConst { .. } | Node::Var(..))
}

/// A reference to `t` inside another term.
fn atom(pool: &TermPool, t: TermId) -> String {
    match pool.node(t) {
        Node::BoolConst(b) => b.to_string(),
        Node::BvConst { width, bits } => format!("(_ bv{bits} {width})"),
        Node::Var(v, _) => format!("|{v}|"),
        _ => format!("t{}", t.0),
    }
}

fn render(pool: &TermPool, t: TermId) -> String {
    let a = |x: &TermId| atom(pool, *x);
    let bin = |op: &str, x: &TermId, y: &TermId| format!("({op} {} {})", a(x), a(y));
    match pool.node(t) {
        Node::Not(x) => format!("(not {})", a(x)),
        Node::And(x, y) => bin("and", x, y),
        Node::Or(x, y) => bin("or", x, y),
        Node::Implies(x, y) => bin("=>", x, y),
        Node::Eq(x, y) => bin("=", x, y),
        Node::BvAdd(x, y) => bin("bvadd", x, y),
        Node::BvSub(x, y) => bin("bvsub", x, y),
        Node::BvMul(x, y) => bin("bvmul", x, y),
        Node::BvNeg(x) => format!("(bvneg {})", a(x)),
        Node::BvSdiv(x, y) => bin("bvsdiv", x, y),
        Node::BvSrem(x, y) => bin("bvsrem", x, y),
        Node::BvSlt(x, y) => bin("bvslt", x, y),
        Node::BvSle(x, y) => bin("bvsle", x, y),
        Node::Ite(c, x, y) => format!("(ite {} {} {})", a(c), a(x), a(y)),
        _ => atom(pool, t),
    }
}
