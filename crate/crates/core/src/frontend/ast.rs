//! Untyped syntax tree produced by the parser.

use crate::loc::SourceLocation;

/// Where a declaration came from.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Origin {
    #[default]
    User,
    /// Loaded from an operational-model file through the include path.
    Model(String),
}

impl Origin {
    pub fn is_model(&self) -> bool {
        matches!(self, Origin::Model(_))
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Program {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Include(Include),
    Class(ClassDecl),
    Function(FuncDecl),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Include {
    pub name: String,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassDecl {
    pub name: String,
    pub type_param: Option<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<FuncDecl>,
    pub origin: Origin,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ArraySize {
    Literal(u64),
    /// A named compile-time constant such as `__CONTAINER_CAPACITY`.
    Named(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDecl {
    pub ty: TypeName,
    pub name: String,
    pub array: Option<ArraySize>,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeName {
    pub name: String,
    pub arg: Option<Box<TypeName>>,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub ty: TypeName,
    pub name: String,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuncDecl {
    /// `None` for constructors.
    pub ret: Option<TypeName>,
    pub name: String,
    pub params: Vec<Param>,
    pub body: Block,
    pub origin: Origin,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignOp {
    Set,
    Add,
    Sub,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    VarDecl {
        ty: TypeName,
        name: String,
        ctor_args: Option<Vec<Expr>>,
        init: Option<Expr>,
        loc: SourceLocation,
    },
    Assign {
        target: Expr,
        op: AssignOp,
        value: Expr,
        loc: SourceLocation,
    },
    /// `x++` / `x--`.
    Step {
        target: Expr,
        increment: bool,
        loc: SourceLocation,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
        loc: SourceLocation,
    },
    While {
        cond: Expr,
        body: Block,
        loc: SourceLocation,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        step: Option<Box<Stmt>>,
        body: Block,
        loc: SourceLocation,
    },
    Expr {
        expr: Expr,
        loc: SourceLocation,
    },
    Assert {
        cond: Expr,
        loc: SourceLocation,
    },
    Return {
        value: Option<Expr>,
        loc: SourceLocation,
    },
    Block(Block),
}

impl Stmt {
    pub fn loc(&self) -> Option<&SourceLocation> {
        match self {
            Stmt::VarDecl { loc, .. }
            | Stmt::Assign { loc, .. }
            | Stmt::Step { loc, .. }
            | Stmt::If { loc, .. }
            | Stmt::While { loc, .. }
            | Stmt::For { loc, .. }
            | Stmt::Expr { loc, .. }
            | Stmt::Assert { loc, .. }
            | Stmt::Return { loc, .. } => Some(loc),
            Stmt::Block(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Mul,
    Div,
    Rem,
    Add,
    Sub,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem => 5,
            BinaryOp::Add | BinaryOp::Sub => 4,
            BinaryOp::Lt
            | BinaryOp::Le
            | BinaryOp::Gt
            | BinaryOp::Ge
            | BinaryOp::Eq
            | BinaryOp::Ne => 3,
            BinaryOp::And => 2,
            BinaryOp::Or => 1,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 3
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(u64),
    Bool(bool),
    Str(String),
    Ident(String),
    This,
    /// `obj.name` or `obj->name`.
    Member {
        object: Box<Expr>,
        name: String,
        arrow: bool,
    },
    Index {
        base: Box<Expr>,
        index: Box<Expr>,
    },
    Call {
        callee: String,
        args: Vec<Expr>,
    },
    MethodCall {
        receiver: Box<Expr>,
        method: String,
        args: Vec<Expr>,
        arrow: bool,
    },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub loc: SourceLocation,
}

impl Expr {
    pub fn new(kind: ExprKind, loc: SourceLocation) -> Self {
        Expr { kind, loc }
    }
}

impl Program {
    pub fn includes(&self) -> impl Iterator<Item = &Include> {
        self.items.iter().filter_map(|i| match i {
            Item::Include(inc) => Some(inc),
            _ => None,
        })
    }

    /// Replaces every source location with a fixed placeholder, leaving only
    /// the tree structure. Used to compare trees that came from different
    /// texts.
    pub fn erase_locations(&mut self) {
        let blank = SourceLocation::builtin();
        for item in &mut self.items {
            match item {
                Item::Include(inc) => inc.loc = blank.clone(),
                Item::Class(c) => {
                    c.loc = blank.clone();
                    for f in &mut c.fields {
                        f.loc = blank.clone();
                        erase_type(&mut f.ty);
                    }
                    for m in &mut c.methods {
                        erase_func(m);
                    }
                }
                Item::Function(f) => erase_func(f),
            }
        }
    }
}

fn erase_type(t: &mut TypeName) {
    t.loc = SourceLocation::builtin();
    if let Some(a) = &mut t.arg {
        erase_type(a);
    }
}

fn erase_func(f: &mut FuncDecl) {
    f.loc = SourceLocation::builtin();
    if let Some(r) = &mut f.ret {
        erase_type(r);
    }
    for p in &mut f.params {
        p.loc = SourceLocation::builtin();
        erase_type(&mut p.ty);
    }
    erase_block(&mut f.body);
}

fn erase_block(b: &mut Block) {
    for s in &mut b.stmts {
        erase_stmt(s);
    }
}

fn erase_stmt(s: &mut Stmt) {
    let blank = SourceLocation::builtin();
    match s {
        Stmt::VarDecl {
            ty,
            ctor_args,
            init,
            loc,
            ..
        } => {
            *loc = blank;
            erase_type(ty);
            for a in ctor_args.iter_mut().flatten() {
                erase_expr(a);
            }
            if let Some(e) = init {
                erase_expr(e);
            }
        }
        Stmt::Assign {
            target, value, loc, ..
        } => {
            *loc = blank;
            erase_expr(target);
            erase_expr(value);
        }
        Stmt::Step { target, loc, .. } => {
            *loc = blank;
            erase_expr(target);
        }
        Stmt::If {
            cond,
            then_block,
            else_block,
            loc,
        } => {
            *loc = blank;
            erase_expr(cond);
            erase_block(then_block);
            if let Some(b) = else_block {
                erase_block(b);
            }
        }
        Stmt::While { cond, body, loc } => {
            *loc = blank;
            erase_expr(cond);
            erase_block(body);
        }
        Stmt::For {
            init,
            cond,
            step,
            body,
            loc,
        } => {
            *loc = blank;
            if let Some(i) = init {
                erase_stmt(i);
            }
            if let Some(c) = cond {
                erase_expr(c);
            }
            if let Some(s) = step {
                erase_stmt(s);
            }
            erase_block(body);
        }
        Stmt::Expr { expr, loc } | Stmt::Assert { cond: expr, loc } => {
            *loc = blank;
            erase_expr(expr);
        }
        Stmt::Return { value, loc } => {
            *loc = blank;
            if let Some(v) = value {
                erase_expr(v);
            }
        }
        Stmt::Block(b) => erase_block(b),
    }
}

fn erase_expr(e: &mut Expr) {
    e.loc = SourceLocation::builtin();
    match &mut e.kind {
        ExprKind::Member { object, .. } => erase_expr(object),
        ExprKind::Index { base, index } => {
            erase_expr(base);
            erase_expr(index);
        }
        ExprKind::Call { args, .. } => args.iter_mut().for_each(erase_expr),
        ExprKind::MethodCall { receiver, args, .. } => {
            erase_expr(receiver);
            args.iter_mut().for_each(erase_expr);
        }
        ExprKind::Unary(_, a) => erase_expr(a),
        ExprKind::Binary(_, a, b) => {
            erase_expr(a);
            erase_expr(b);
        }
        _ => {}
    }
}
