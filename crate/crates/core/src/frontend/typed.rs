//! The type-annotated, monomorphized program.

use std::fmt;

use crate::goto::PropertyClass;
use crate::loc::SourceLocation;

pub use super::ast::{BinaryOp, Origin, UnaryOp};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SemType {
    Bool,
    /// Two's complement integer of the program-wide width.
    Int,
    Void,
    /// Opaque string atom; only assertion messages and file names.
    Str,
    Class(String),
    Array(Box<SemType>, u32),
}

impl SemType {
    pub fn is_scalar(&self) -> bool {
        matches!(self, SemType::Bool | SemType::Int)
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Bool => f.write_str("bool"),
            SemType::Int => f.write_str("int"),
            SemType::Void => f.write_str("void"),
            SemType::Str => f.write_str("string"),
            SemType::Class(n) => f.write_str(n),
            SemType::Array(e, n) => write!(f, "{e}[{n}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypedAst {
    pub classes: Vec<ClassDef>,
    pub functions: Vec<FunctionDef>,
    pub int_width: u32,
}

impl TypedAst {
    /// Free functions followed by every method, in declaration order.
    pub fn all_functions(&self) -> impl Iterator<Item = &FunctionDef> {
        self.functions
            .iter()
            .chain(self.classes.iter().flat_map(|c| c.methods.iter()))
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn function(&self, mangled: &str) -> Option<&FunctionDef> {
        self.all_functions().find(|f| f.name == mangled)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassDef {
    /// Concrete name; template instances are named like `QList_int`.
    pub name: String,
    pub fields: Vec<FieldDef>,
    pub methods: Vec<FunctionDef>,
    pub origin: Origin,
    pub loc: SourceLocation,
}

impl ClassDef {
    pub fn field(&self, name: &str) -> Option<&FieldDef> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn constructors(&self) -> impl Iterator<Item = &FunctionDef> {
        self.methods.iter().filter(|m| m.is_constructor)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDef {
    pub name: String,
    pub ty: SemType,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Local {
    /// Unique within the enclosing function.
    pub name: String,
    pub ty: SemType,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionDef {
    /// `main`, `helper`, or `Class::method` (with an `_N` arity suffix
    /// when the method name is overloaded).
    pub name: String,
    /// Source-level method or function name.
    pub short_name: String,
    pub class: Option<String>,
    pub is_constructor: bool,
    pub params: Vec<Local>,
    pub ret: SemType,
    pub body: Vec<TStmt>,
    /// Every local declared in the body, after renaming.
    pub locals: Vec<Local>,
    pub origin: Origin,
    pub loc: SourceLocation,
}

/// The object a field access goes through.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjRef {
    This,
    Local(String),
}

impl fmt::Display for ObjRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjRef::This => f.write_str("this"),
            ObjRef::Local(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Local(String),
    Field {
        obj: ObjRef,
        field: String,
    },
    Element {
        obj: ObjRef,
        field: String,
        index: Box<TExpr>,
        capacity: u32,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum TExprKind {
    Int(i64),
    Bool(bool),
    Str(String),
    Load(Place),
    Unary(UnaryOp, Box<TExpr>),
    Binary(BinaryOp, Box<TExpr>, Box<TExpr>),
    Call {
        function: String,
        receiver: Option<ObjRef>,
        args: Vec<TExpr>,
    },
    NondetInt,
    NondetBool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TExpr {
    pub kind: TExprKind,
    pub ty: SemType,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CtorCall {
    pub function: String,
    pub args: Vec<TExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TStmt {
    Decl {
        var: String,
        ty: SemType,
        init: Option<TExpr>,
        ctor: Option<CtorCall>,
        loc: SourceLocation,
    },
    Assign {
        target: Place,
        value: TExpr,
        loc: SourceLocation,
    },
    If {
        cond: TExpr,
        then_body: Vec<TStmt>,
        else_body: Vec<TStmt>,
        loc: SourceLocation,
    },
    While {
        cond: TExpr,
        body: Vec<TStmt>,
        loc: SourceLocation,
    },
    For {
        init: Vec<TStmt>,
        cond: Option<TExpr>,
        step: Vec<TStmt>,
        body: Vec<TStmt>,
        loc: SourceLocation,
    },
    Expr {
        expr: TExpr,
        loc: SourceLocation,
    },
    Assert {
        cond: TExpr,
        message: String,
        class: PropertyClass,
        loc: SourceLocation,
    },
    Assume {
        cond: TExpr,
        loc: SourceLocation,
    },
    Return {
        value: Option<TExpr>,
        loc: SourceLocation,
    },
    Block(Vec<TStmt>),
}
