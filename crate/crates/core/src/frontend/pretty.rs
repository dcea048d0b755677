//! Source-level pretty printer for the untyped tree.
//!
//! Output re-parses to the same tree (modulo locations). Expression printing
//! is also used for the default message of a plain `assert(e)`.

use std::fmt::Write;

use super::ast::*;

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for item in &p.items {
        match item {
            Item::Include(inc) => {
                let _ = writeln!(out, "#include <{}>", inc.name);
            }
            Item::Class(c) => print_class(&mut out, c),
            Item::Function(f) => print_func(&mut out, f, 0),
        }
    }
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

pub fn print_type(t: &TypeName) -> String {
    match &t.arg {
        Some(a) => format!("{}<{}>", t.name, print_type(a)),
        None => t.name.clone(),
    }
}

fn print_class(out: &mut String, c: &ClassDecl) {
    if let Some(tp) = &c.type_param {
        let _ = writeln!(out, "template<class {tp}>");
    }
    let _ = writeln!(out, "class {} {{", c.name);
    for f in &c.fields {
        indent(out, 1);
        let _ = write!(out, "{} {}", print_type(&f.ty), f.name);
        match &f.array {
            Some(ArraySize::Literal(n)) => {
                let _ = write!(out, "[{n}]");
            }
            Some(ArraySize::Named(n)) => {
                let _ = write!(out, "[{n}]");
            }
            None => {}
        }
        out.push_str(";\n");
    }
    for m in &c.methods {
        print_func(out, m, 1);
    }
    out.push_str("};\n");
}

fn print_func(out: &mut String, f: &FuncDecl, level: usize) {
    indent(out, level);
    if let Some(r) = &f.ret {
        let _ = write!(out, "{} ", print_type(r));
    }
    let params: Vec<String> = f
        .params
        .iter()
        .map(|p| format!("{} {}", print_type(&p.ty), p.name))
        .collect();
    let _ = write!(out, "{}({}) ", f.name, params.join(", "));
    print_block(out, &f.body, level);
    out.push('\n');
}

fn print_block(out: &mut String, b: &Block, level: usize) {
    out.push_str("{\n");
    for s in &b.stmts {
        print_stmt(out, s, level + 1);
    }
    indent(out, level);
    out.push('}');
}

/// Prints a statement without indentation or trailing semicolon; used for
/// `for` headers.
fn simple_stmt(s: &Stmt) -> String {
    match s {
        Stmt::VarDecl {
            ty,
            name,
            ctor_args,
            init,
            ..
        } => {
            let mut t = format!("{} {}", print_type(ty), name);
            if let Some(args) = ctor_args {
                let args: Vec<_> = args.iter().map(print_expr).collect();
                let _ = write!(t, "({})", args.join(", "));
            }
            if let Some(e) = init {
                let _ = write!(t, " = {}", print_expr(e));
            }
            t
        }
        Stmt::Assign {
            target, op, value, ..
        } => {
            let op = match op {
                AssignOp::Set => "=",
                AssignOp::Add => "+=",
                AssignOp::Sub => "-=",
            };
            format!("{} {} {}", print_expr(target), op, print_expr(value))
        }
        Stmt::Step {
            target, increment, ..
        } => format!(
            "{}{}",
            print_expr(target),
            if *increment { "++" } else { "--" }
        ),
        Stmt::Expr { expr, .. } => print_expr(expr),
        _ => unreachable!("not a simple statement"),
    }
}

fn print_stmt(out: &mut String, s: &Stmt, level: usize) {
    indent(out, level);
    match s {
        Stmt::VarDecl { .. } | Stmt::Assign { .. } | Stmt::Step { .. } | Stmt::Expr { .. } => {
            let _ = writeln!(out, "{};", simple_stmt(s));
        }
        Stmt::If {
            cond,
            then_block,
            else_block,
            ..
        } => {
            let _ = write!(out, "if ({}) ", print_expr(cond));
            print_block(out, then_block, level);
            if let Some(e) = else_block {
                out.push_str(" else ");
                print_block(out, e, level);
            }
            out.push('\n');
        }
        Stmt::While { cond, body, .. } => {
            let _ = write!(out, "while ({}) ", print_expr(cond));
            print_block(out, body, level);
            out.push('\n');
        }
        Stmt::For {
            init,
            cond,
            step,
            body,
            ..
        } => {
            let init = init.as_deref().map(simple_stmt).unwrap_or_default();
            let cond = cond.as_ref().map(print_expr).unwrap_or_default();
            let step = step.as_deref().map(simple_stmt).unwrap_or_default();
            let _ = write!(out, "for ({init}; {cond}; {step}) ");
            print_block(out, body, level);
            out.push('\n');
        }
        Stmt::Assert { cond, .. } => {
            let _ = writeln!(out, "assert({});", print_expr(cond));
        }
        Stmt::Return { value, .. } => match value {
            Some(v) => {
                let _ = writeln!(out, "return {};", print_expr(v));
            }
            None => out.push_str("return;\n"),
        },
        Stmt::Block(b) => {
            print_block(out, b, level);
            out.push('\n');
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_args(out: &mut String, args: &[Expr]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a, 0);
    }
    out.push(')');
}

/// `min_prec` is the precedence the surrounding context requires; anything
/// binding looser gets parenthesized.
fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        ExprKind::Str(s) => {
            let _ = write!(out, "\"{s}\"");
        }
        ExprKind::Ident(n) => out.push_str(n),
        ExprKind::This => out.push_str("this"),
        ExprKind::Member {
            object,
            name,
            arrow,
        } => {
            write_expr(out, object, 7);
            out.push_str(if *arrow { "->" } else { "." });
            out.push_str(name);
        }
        ExprKind::Index { base, index } => {
            write_expr(out, base, 7);
            out.push('[');
            write_expr(out, index, 0);
            out.push(']');
        }
        ExprKind::Call { callee, args } => {
            out.push_str(callee);
            write_args(out, args);
        }
        ExprKind::MethodCall {
            receiver,
            method,
            args,
            arrow,
        } => {
            write_expr(out, receiver, 7);
            out.push_str(if *arrow { "->" } else { "." });
            out.push_str(method);
            write_args(out, args);
        }
        ExprKind::Unary(op, a) => {
            let (sym, needs_parens) = match op {
                UnaryOp::Not => ("!", false),
                // `--` would lex as a decrement.
                UnaryOp::Neg => ("-", matches!(a.kind, ExprKind::Unary(UnaryOp::Neg, _))),
            };
            out.push_str(sym);
            if needs_parens {
                out.push('(');
                write_expr(out, a, 0);
                out.push(')');
            } else {
                write_expr(out, a, 6);
            }
        }
        ExprKind::Binary(op, a, b) => {
            let p = op.precedence();
            let parens = p < min_prec;
            if parens {
                out.push('(');
            }
            write_expr(out, a, p);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, b, p + 1);
            if parens {
                out.push(')');
            }
        }
    }
}
