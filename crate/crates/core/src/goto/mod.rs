//! Flat GOTO-program intermediate form.
//!
//! Structured control flow is gone: branching is expressed only through
//! guarded `GOTO`s. Loops keep a tag on their exit test and back-edge so the
//! unwinder can find them without recomputing dominators.

mod display;
mod lower;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::frontend::typed::{BinaryOp, FieldDef, Local, ObjRef, SemType, UnaryOp};
use crate::loc::SourceLocation;

pub use lower::lower_to_goto;
pub use validate::{validate_goto, Diagnostic, DiagnosticKind};

/// Where an assertion came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyClass {
    UserAssertion,
    ModelPrecondition,
    ArrayBounds,
    Unwinding,
}

impl fmt::Display for PropertyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyClass::UserAssertion => "user-assertion",
            PropertyClass::ModelPrecondition => "model-precondition",
            PropertyClass::ArrayBounds => "array-bounds",
            PropertyClass::Unwinding => "unwinding",
        })
    }
}

pub const ARRAY_BOUNDS_MESSAGE: &str = "array bounds violated";
pub const UNWINDING_MESSAGE: &str = "unwinding assertion";
pub const RECURSION_MESSAGE: &str = "recursion unwinding assertion";

#[derive(Clone, Debug, PartialEq)]
pub enum GPlace {
    Local(String),
    Field {
        obj: ObjRef,
        field: String,
    },
    Element {
        obj: ObjRef,
        field: String,
        index: Box<GExpr>,
        capacity: u32,
    },
}

/// Side-effect free expression, except that `Nondet*` yields a fresh value
/// each time it is evaluated. Lowering only places `Nondet*` at the top of
/// an assignment's right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub enum GExpr {
    Int(i64),
    Bool(bool),
    Load(GPlace),
    Unary(UnaryOp, Box<GExpr>),
    Binary(BinaryOp, Box<GExpr>, Box<GExpr>),
    NondetInt,
    NondetBool,
}

impl GExpr {
    pub fn negate(self) -> GExpr {
        match self {
            GExpr::Bool(b) => GExpr::Bool(!b),
            GExpr::Unary(UnaryOp::Not, inner) => *inner,
            e => GExpr::Unary(UnaryOp::Not, Box::new(e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CallArg {
    Value(GExpr),
    /// Receiver object, passed by reference.
    Object(ObjRef),
    /// Opaque string atom; carries no runtime value.
    Str(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopRole {
    /// The test that leaves the loop.
    Exit,
    /// The unconditional jump back to the loop head.
    BackEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopTag {
    pub loop_id: u32,
    pub role: LoopRole,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstrKind {
    Decl {
        var: String,
        ty: SemType,
    },
    Assign {
        lhs: GPlace,
        rhs: GExpr,
    },
    Assume(GExpr),
    Assert {
        cond: GExpr,
        message: String,
        class: PropertyClass,
    },
    /// Jumps to `target` when `guard` holds (always, when `None`).
    Goto {
        target: usize,
        guard: Option<GExpr>,
        loop_tag: Option<LoopTag>,
    },
    Call {
        result: Option<GPlace>,
        callee: String,
        args: Vec<CallArg>,
    },
    Return(Option<GExpr>),
    Skip,
    EndFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub kind: InstrKind,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GotoFunction {
    pub name: String,
    /// Methods take their receiver as a first parameter named `this`.
    pub params: Vec<Local>,
    pub ret: SemType,
    pub body: Vec<Instruction>,
    pub is_model: bool,
    pub loc: SourceLocation,
}

impl GotoFunction {
    /// Index of the loop-head instruction for each loop id.
    pub fn loop_heads(&self) -> BTreeMap<u32, usize> {
        self.body
            .iter()
            .filter_map(|i| match &i.kind {
                InstrKind::Goto {
                    target,
                    loop_tag:
                        Some(LoopTag {
                            loop_id,
                            role: LoopRole::BackEdge,
                        }),
                    ..
                } => Some((*loop_id, *target)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GotoProgram {
    pub functions: BTreeMap<String, GotoFunction>,
    pub entry: String,
    /// Field layout of every class, used to explode objects into scalars.
    pub classes: BTreeMap<String, Vec<FieldDef>>,
    pub int_width: u32,
}

impl GotoProgram {
    pub fn function(&self, name: &str) -> Option<&GotoFunction> {
        self.functions.get(name)
    }

    pub fn instructions(&self) -> impl Iterator<Item = (&GotoFunction, usize, &Instruction)> {
        self.functions
            .values()
            .flat_map(|f| f.body.iter().enumerate().map(move |(i, ins)| (f, i, ins)))
    }
}
