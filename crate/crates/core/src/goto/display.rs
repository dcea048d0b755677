use std::fmt;

use crate::frontend::typed::UnaryOp;

use super::*;

fn expr_prec(e: &GExpr) -> u8 {
    match e {
        GExpr::Binary(op, _, _) => op.precedence(),
        _ => 7,
    }
}

fn write_sub(f: &mut fmt::Formatter<'_>, e: &GExpr, min: u8) -> fmt::Result {
    if expr_prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for GExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GExpr::Int(v) => write!(f, "{v}"),
            GExpr::Bool(b) => write!(f, "{b}"),
            GExpr::Load(p) => write!(f, "{p}"),
            GExpr::Unary(op, a) => {
                f.write_str(match op {
                    UnaryOp::Not => "!",
                    UnaryOp::Neg => "-",
                })?;
                write_sub(f, a, 7)
            }
            GExpr::Binary(op, a, b) => {
                let p = op.precedence();
                write_sub(f, a, p)?;
                write!(f, " {} ", op.symbol())?;
                write_sub(f, b, p + 1)
            }
            GExpr::NondetInt => f.write_str("nondet_int()"),
            GExpr::NondetBool => f.write_str("nondet_bool()"),
        }
    }
}

impl fmt::Display for GPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let obj = |f: &mut fmt::Formatter<'_>, o: &ObjRef| match o {
            ObjRef::This => f.write_str("this->"),
            ObjRef::Local(n) => write!(f, "{n}."),
        };
        match self {
            GPlace::Local(n) => f.write_str(n),
            GPlace::Field { obj: o, field } => {
                obj(f, o)?;
                f.write_str(field)
            }
            GPlace::Element {
                obj: o,
                field,
                index,
                ..
            } => {
                obj(f, o)?;
                write!(f, "{field}[{index}]")
            }
        }
    }
}

impl fmt::Display for CallArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CallArg::Value(e) => write!(f, "{e}"),
            CallArg::Object(o) => write!(f, "&{o}"),
            CallArg::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

impl fmt::Display for InstrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstrKind::Decl { var, ty } => write!(f, "DECL {var} : {ty}"),
            InstrKind::Assign { lhs, rhs } => write!(f, "ASSIGN {lhs} := {rhs}"),
            InstrKind::Assume(c) => write!(f, "ASSUME {c}"),
            InstrKind::Assert {
                cond,
                message,
                class,
            } => write!(f, "ASSERT {cond} \"{message}\" [{class}]"),
            InstrKind::Goto {
                target,
                guard,
                loop_tag,
            } => {
                write!(f, "GOTO {target}")?;
                if let Some(g) = guard {
                    write!(f, " if {g}")?;
                }
                if let Some(tag) = loop_tag {
                    let role = match tag.role {
                        LoopRole::Exit => "exit",
                        LoopRole::BackEdge => "back-edge",
                    };
                    write!(f, " [loop {} {role}]", tag.loop_id)?;
                }
                Ok(())
            }
            InstrKind::Call {
                result,
                callee,
                args,
            } => {
                f.write_str("CALL ")?;
                if let Some(r) = result {
                    write!(f, "{r} := ")?;
                }
                write!(f, "{callee}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            InstrKind::Return(Some(e)) => write!(f, "RETURN {e}"),
            InstrKind::Return(None) => f.write_str("RETURN"),
            InstrKind::Skip => f.write_str("SKIP"),
            InstrKind::EndFunction => f.write_str("END_FUNCTION"),
        }
    }
}

impl fmt::Display for GotoFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|p| format!("{}: {}", p.name, p.ty))
            .collect();
        writeln!(f, "{}({}) -> {}", self.name, params.join(", "), self.ret)?;
        for (i, ins) in self.body.iter().enumerate() {
            writeln!(f, "{i}: {} // {}", ins.kind, ins.loc.file_line())?;
        }
        Ok(())
    }
}

impl fmt::Display for GotoProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, func) in self.functions.values().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{func}")?;
        }
        Ok(())
    }
}
