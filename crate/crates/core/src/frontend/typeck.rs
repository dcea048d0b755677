//! Name resolution, type checking and template monomorphization.

use std::collections::HashMap;

use crate::bv;
use crate::config::VerifierConfig;
use crate::goto::PropertyClass;
use crate::loc::SourceLocation;

use super::ast::{
    self, ArraySize, AssignOp, ClassDecl, Expr, ExprKind, FuncDecl, Item, Program, Stmt, TypeName,
};
use super::pretty::print_expr;
use super::typed::*;
use super::FrontendError;

pub const CAPACITY_CONSTANT: &str = "__CONTAINER_CAPACITY";
pub const STRICT_INTERVAL_CONSTANT: &str = "__STRICT_POSITIVE_INTERVAL";
pub const ASSERT_BUILTIN: &str = "__VERIFIER_assert";
pub const ASSUME_BUILTIN: &str = "__VERIFIER_assume";
const BUILTINS: &[&str] = &["nondet_int", "nondet_bool", ASSERT_BUILTIN, ASSUME_BUILTIN];

#[derive(Clone, Copy, Debug)]
pub struct TypeckOptions {
    /// Demand exactly one zero-argument `main`.
    pub require_main: bool,
    /// Instantiate every template at `int` even if nothing uses it. Model
    /// validation uses this to check model bodies in isolation.
    pub instantiate_templates: bool,
}

impl Default for TypeckOptions {
    fn default() -> Self {
        TypeckOptions {
            require_main: true,
            instantiate_templates: false,
        }
    }
}

type TResult<T> = Result<T, FrontendError>;

fn type_error(loc: &SourceLocation, message: impl Into<String>) -> FrontendError {
    FrontendError::Type {
        loc: loc.clone(),
        message: message.into(),
    }
}

fn undefined(loc: &SourceLocation, name: &str) -> FrontendError {
    FrontendError::UndefinedSymbol {
        loc: loc.clone(),
        name: name.to_string(),
    }
}

/// Type-checks a program whose includes are already resolved.
pub fn typecheck(program: &Program, config: &VerifierConfig) -> TResult<TypedAst> {
    typecheck_with(program, config, TypeckOptions::default())
}

pub fn typecheck_with(
    program: &Program,
    config: &VerifierConfig,
    opts: TypeckOptions,
) -> TResult<TypedAst> {
    let mut ck = Checker {
        config,
        templates: HashMap::new(),
        plain: HashMap::new(),
        functions: Vec::new(),
        function_sigs: HashMap::new(),
        classes: HashMap::new(),
        class_order: Vec::new(),
        queue: Vec::new(),
    };

    for item in &program.items {
        match item {
            Item::Class(c) => {
                if ck.templates.contains_key(&c.name) || ck.plain.contains_key(&c.name) {
                    return Err(type_error(
                        &c.loc,
                        format!("class `{}` declared twice", c.name),
                    ));
                }
                if c.type_param.is_some() {
                    ck.templates.insert(c.name.clone(), c);
                } else {
                    ck.plain.insert(c.name.clone(), c);
                }
            }
            Item::Function(f) => {
                if ck.functions.iter().any(|g: &&FuncDecl| g.name == f.name) {
                    return Err(type_error(
                        &f.loc,
                        format!("function `{}` defined twice", f.name),
                    ));
                }
                if BUILTINS.contains(&f.name.as_str()) {
                    return Err(type_error(&f.loc, format!("`{}` is a builtin", f.name)));
                }
                ck.functions.push(f);
            }
            Item::Include(_) => {}
        }
    }

    for item in &program.items {
        if let Item::Class(c) = item {
            if c.type_param.is_none() {
                ck.register_class(c, c.name.clone(), None)?;
            }
        }
    }

    let functions = ck.functions.clone();
    for f in &functions {
        let params = f
            .params
            .iter()
            .map(|p| ck.resolve_value_type(&p.ty, None, true))
            .collect::<TResult<Vec<_>>>()?;
        let ret = match &f.ret {
            Some(r) => ck.resolve_return_type(r, None)?,
            None => unreachable!("free functions always have a return type"),
        };
        ck.function_sigs.insert(f.name.clone(), (params, ret));
    }

    if opts.require_main {
        match functions.iter().find(|f| f.name == "main") {
            None => {
                let loc = program
                    .items
                    .first()
                    .map(|i| match i {
                        Item::Include(x) => x.loc.clone(),
                        Item::Class(x) => x.loc.clone(),
                        Item::Function(x) => x.loc.clone(),
                    })
                    .unwrap_or_else(SourceLocation::builtin);
                return Err(undefined(&loc, "main"));
            }
            Some(m) if !m.params.is_empty() => {
                return Err(type_error(&m.loc, "`main` must take no parameters"));
            }
            _ => {}
        }
    }

    let mut checked_functions = Vec::new();
    for f in &functions {
        checked_functions.push(ck.check_function(f, None, None)?);
    }

    if opts.instantiate_templates {
        let mut names: Vec<&String> = ck.templates.keys().collect();
        names.sort();
        for n in names.into_iter().cloned().collect::<Vec<_>>() {
            let decl = ck.templates[&n];
            ck.instantiate(decl, SemType::Int, &decl.loc)?;
        }
    }

    let mut checked_methods: HashMap<String, Vec<FunctionDef>> = HashMap::new();
    while let Some(cname) = ck.queue.pop() {
        let info = ck.classes[&cname].clone();
        let mut methods = Vec::new();
        for (sig, decl) in info.methods.iter().zip(info.decl.methods.iter()) {
            let mut def = ck.check_function(decl, Some(&info), info.subst.clone())?;
            def.name = sig.mangled.clone();
            methods.push(def);
        }
        checked_methods.insert(cname, methods);
    }

    let classes = ck
        .class_order
        .iter()
        .map(|name| {
            let info = &ck.classes[name];
            ClassDef {
                name: name.clone(),
                fields: info.fields.clone(),
                methods: checked_methods.remove(name).unwrap_or_default(),
                origin: info.decl.origin.clone(),
                loc: info.decl.loc.clone(),
            }
        })
        .collect();

    Ok(TypedAst {
        classes,
        functions: checked_functions,
        int_width: config.int_width,
    })
}

#[derive(Clone)]
struct MethodSig {
    mangled: String,
    short: String,
    params: Vec<SemType>,
    ret: SemType,
    is_ctor: bool,
}

#[derive(Clone)]
struct ClassInfo<'a> {
    name: String,
    decl: &'a ClassDecl,
    subst: Option<(String, SemType)>,
    fields: Vec<FieldDef>,
    methods: Vec<MethodSig>,
}

impl ClassInfo<'_> {
    fn method(&self, name: &str, arity: usize) -> Option<&MethodSig> {
        self.methods
            .iter()
            .find(|m| !m.is_ctor && m.short == name && m.params.len() == arity)
    }

    fn constructor(&self, arity: usize) -> Option<&MethodSig> {
        self.methods
            .iter()
            .find(|m| m.is_ctor && m.params.len() == arity)
    }
}

struct Checker<'a> {
    config: &'a VerifierConfig,
    templates: HashMap<String, &'a ClassDecl>,
    plain: HashMap<String, &'a ClassDecl>,
    functions: Vec<&'a FuncDecl>,
    function_sigs: HashMap<String, (Vec<SemType>, SemType)>,
    classes: HashMap<String, ClassInfo<'a>>,
    class_order: Vec<String>,
    queue: Vec<String>,
}

struct FnCtx<'i> {
    class: Option<&'i ClassInfo<'i>>,
    subst: Option<(String, SemType)>,
    ret: SemType,
    scopes: Vec<HashMap<String, (String, SemType)>>,
    locals: Vec<Local>,
    used_names: HashMap<String, u32>,
    property_class: PropertyClass,
}

impl FnCtx<'_> {
    fn declare(&mut self, name: &str, ty: SemType, loc: &SourceLocation) -> TResult<String> {
        let scope = self.scopes.last_mut().unwrap();
        if scope.contains_key(name) {
            return Err(type_error(
                loc,
                format!("`{name}` declared twice in the same scope"),
            ));
        }
        let n = self.used_names.entry(name.to_string()).or_insert(0);
        let unique = if *n == 0 {
            name.to_string()
        } else {
            format!("{name}${n}")
        };
        *n += 1;
        scope.insert(name.to_string(), (unique.clone(), ty.clone()));
        self.locals.push(Local {
            name: unique.clone(),
            ty,
        });
        Ok(unique)
    }

    fn lookup(&self, name: &str) -> Option<&(String, SemType)> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }
}

impl<'a> Checker<'a> {
    fn register_class(
        &mut self,
        decl: &'a ClassDecl,
        name: String,
        subst: Option<(String, SemType)>,
    ) -> TResult<()> {
        let mut fields: Vec<FieldDef> = Vec::new();
        for f in &decl.fields {
            if fields.iter().any(|g| g.name == f.name) {
                return Err(type_error(
                    &f.loc,
                    format!("field `{}` declared twice", f.name),
                ));
            }
            let elem = self.resolve_type(&f.ty, subst.as_ref())?;
            if !elem.is_scalar() {
                return Err(type_error(
                    &f.loc,
                    format!(
                        "field `{}` must have type int or bool, found {elem}",
                        f.name
                    ),
                ));
            }
            let ty = match &f.array {
                None => elem,
                Some(size) => {
                    let n = match size {
                        ArraySize::Literal(n) => *n,
                        ArraySize::Named(c) if c == CAPACITY_CONSTANT => {
                            self.config.container_capacity as u64
                        }
                        ArraySize::Named(c) => return Err(undefined(&f.loc, c)),
                    };
                    if n < 1 || n > u32::MAX as u64 {
                        return Err(type_error(&f.loc, "array capacity must be at least 1"));
                    }
                    SemType::Array(Box::new(elem), n as u32)
                }
            };
            fields.push(FieldDef {
                name: f.name.clone(),
                ty,
                loc: f.loc.clone(),
            });
        }

        // Register a placeholder first so that methods may mention their own
        // class in signatures.
        self.classes.insert(
            name.clone(),
            ClassInfo {
                name: name.clone(),
                decl,
                subst: subst.clone(),
                fields,
                methods: Vec::new(),
            },
        );
        self.class_order.push(name.clone());

        let mut methods: Vec<MethodSig> = Vec::new();
        for m in &decl.methods {
            let is_ctor = m.ret.is_none();
            if is_ctor && m.name != decl.name {
                return Err(type_error(&m.loc, "constructor name must match the class"));
            }
            let params = m
                .params
                .iter()
                .map(|p| self.resolve_value_type(&p.ty, subst.as_ref(), true))
                .collect::<TResult<Vec<_>>>()?;
            let ret = match &m.ret {
                Some(r) => self.resolve_return_type(r, subst.as_ref())?,
                None => SemType::Void,
            };
            if methods
                .iter()
                .any(|o| o.short == m.name && o.params.len() == params.len())
            {
                return Err(type_error(
                    &m.loc,
                    format!(
                        "method `{}` with {} parameters defined twice",
                        m.name,
                        params.len()
                    ),
                ));
            }
            methods.push(MethodSig {
                mangled: String::new(),
                short: m.name.clone(),
                params,
                ret,
                is_ctor,
            });
        }
        let counts = methods.iter().fold(HashMap::new(), |mut acc, m| {
            *acc.entry(m.short.clone()).or_insert(0usize) += 1;
            acc
        });
        for m in &mut methods {
            m.mangled = if counts[&m.short] > 1 {
                format!("{}::{}_{}", name, m.short, m.params.len())
            } else {
                format!("{}::{}", name, m.short)
            };
        }
        self.classes.get_mut(&name).unwrap().methods = methods;
        self.queue.insert(0, name);
        Ok(())
    }

    fn instantiate(
        &mut self,
        template: &'a ClassDecl,
        arg: SemType,
        loc: &SourceLocation,
    ) -> TResult<String> {
        if arg != SemType::Int {
            return Err(type_error(
                loc,
                format!(
                    "template `{}` can only be instantiated at int",
                    template.name
                ),
            ));
        }
        let name = format!("{}_int", template.name);
        if !self.classes.contains_key(&name) {
            let tp = template.type_param.clone().unwrap();
            self.register_class(template, name.clone(), Some((tp, arg)))?;
        }
        Ok(name)
    }

    fn resolve_type(
        &mut self,
        t: &TypeName,
        subst: Option<&(String, SemType)>,
    ) -> TResult<SemType> {
        let base = match t.name.as_str() {
            "int" => Some(SemType::Int),
            "bool" => Some(SemType::Bool),
            "void" => Some(SemType::Void),
            "string" => Some(SemType::Str),
            _ => None,
        };
        if let Some(b) = base {
            if t.arg.is_some() {
                return Err(type_error(
                    &t.loc,
                    format!("`{}` takes no type argument", t.name),
                ));
            }
            return Ok(b);
        }
        if let Some((param, ty)) = subst {
            if *param == t.name {
                if t.arg.is_some() {
                    return Err(type_error(&t.loc, "type parameter takes no argument"));
                }
                return Ok(ty.clone());
            }
        }
        if self.plain.contains_key(&t.name) {
            if t.arg.is_some() {
                return Err(type_error(
                    &t.loc,
                    format!("`{}` is not a template", t.name),
                ));
            }
            return Ok(SemType::Class(t.name.clone()));
        }
        if let Some(&template) = self.templates.get(&t.name) {
            let Some(arg) = &t.arg else {
                return Err(type_error(
                    &t.loc,
                    format!("template `{}` needs a type argument", t.name),
                ));
            };
            let arg = self.resolve_type(arg, subst)?;
            let name = self.instantiate(template, arg, &t.loc)?;
            return Ok(SemType::Class(name));
        }
        Err(undefined(&t.loc, &t.name))
    }

    /// Types allowed for parameters (and, with `allow_str`, string atoms).
    fn resolve_value_type(
        &mut self,
        t: &TypeName,
        subst: Option<&(String, SemType)>,
        allow_str: bool,
    ) -> TResult<SemType> {
        let ty = self.resolve_type(t, subst)?;
        match ty {
            SemType::Int | SemType::Bool => Ok(ty),
            SemType::Str if allow_str => Ok(ty),
            other => Err(type_error(
                &t.loc,
                format!("parameters of type {other} are not supported"),
            )),
        }
    }

    fn resolve_return_type(
        &mut self,
        t: &TypeName,
        subst: Option<&(String, SemType)>,
    ) -> TResult<SemType> {
        let ty = self.resolve_type(t, subst)?;
        match ty {
            SemType::Int | SemType::Bool | SemType::Void => Ok(ty),
            other => Err(type_error(
                &t.loc,
                format!("functions cannot return {other}"),
            )),
        }
    }

    fn check_function(
        &mut self,
        f: &'a FuncDecl,
        class: Option<&ClassInfo<'a>>,
        subst: Option<(String, SemType)>,
    ) -> TResult<FunctionDef> {
        let origin = class
            .map(|c| c.decl.origin.clone())
            .unwrap_or_else(|| f.origin.clone());
        let (params, ret) = match class {
            Some(c) => {
                let sig = c
                    .methods
                    .iter()
                    .zip(&c.decl.methods)
                    .find(|(_, d)| std::ptr::eq(*d, f))
                    .map(|(s, _)| s)
                    .unwrap();
                (sig.params.clone(), sig.ret.clone())
            }
            None => self.function_sigs[&f.name].clone(),
        };
        let mut ctx = FnCtx {
            class,
            subst,
            ret: ret.clone(),
            scopes: vec![HashMap::new()],
            locals: Vec::new(),
            used_names: HashMap::new(),
            property_class: if origin.is_model() {
                PropertyClass::ModelPrecondition
            } else {
                PropertyClass::UserAssertion
            },
        };
        let mut param_locals = Vec::new();
        for (p, ty) in f.params.iter().zip(&params) {
            let unique = ctx.declare(&p.name, ty.clone(), &p.loc)?;
            param_locals.push(Local {
                name: unique,
                ty: ty.clone(),
            });
        }
        ctx.locals.clear();
        let body = self.block(&mut ctx, &f.body.stmts)?;
        if ret != SemType::Void && !always_returns(&body) {
            return Err(type_error(
                &f.loc,
                format!("`{}` may finish without returning a value", f.name),
            ));
        }
        let (name, class_name) = match class {
            Some(c) => (format!("{}::{}", c.name, f.name), Some(c.name.clone())),
            None => (f.name.clone(), None),
        };
        Ok(FunctionDef {
            name,
            short_name: f.name.clone(),
            class: class_name,
            is_constructor: f.ret.is_none(),
            params: param_locals,
            ret,
            body,
            locals: ctx.locals,
            origin,
            loc: f.loc.clone(),
        })
    }

    fn block(&mut self, ctx: &mut FnCtx<'_>, stmts: &[Stmt]) -> TResult<Vec<TStmt>> {
        ctx.scopes.push(HashMap::new());
        let out = stmts
            .iter()
            .map(|s| self.stmt(ctx, s))
            .collect::<TResult<Vec<_>>>();
        ctx.scopes.pop();
        out
    }

    fn stmt(&mut self, ctx: &mut FnCtx<'_>, s: &Stmt) -> TResult<TStmt> {
        match s {
            Stmt::VarDecl {
                ty,
                name,
                ctor_args,
                init,
                loc,
            } => {
                let sem = self.resolve_type(ty, ctx.subst.as_ref())?;
                match &sem {
                    SemType::Int | SemType::Bool => {
                        if ctor_args.is_some() {
                            return Err(type_error(loc, "scalars have no constructor"));
                        }
                        let init = match init {
                            Some(e) => Some(self.expect_type(ctx, e, &sem)?),
                            None => None,
                        };
                        let var = ctx.declare(name, sem.clone(), loc)?;
                        Ok(TStmt::Decl {
                            var,
                            ty: sem,
                            init,
                            ctor: None,
                            loc: loc.clone(),
                        })
                    }
                    SemType::Class(cname) => {
                        if init.is_some() {
                            return Err(type_error(loc, "objects cannot be copied"));
                        }
                        let args = ctor_args.as_deref().unwrap_or(&[]);
                        let info = self.classes[cname].clone();
                        let has_ctors = info.methods.iter().any(|m| m.is_ctor);
                        let ctor = match info.constructor(args.len()) {
                            Some(sig) => Some(CtorCall {
                                function: sig.mangled.clone(),
                                args: self.call_args(ctx, &sig.params, args, loc)?,
                            }),
                            None if !has_ctors && args.is_empty() => None,
                            None => {
                                return Err(type_error(
                                    loc,
                                    format!(
                                        "no constructor of `{cname}` takes {} arguments",
                                        args.len()
                                    ),
                                ))
                            }
                        };
                        let var = ctx.declare(name, sem.clone(), loc)?;
                        Ok(TStmt::Decl {
                            var,
                            ty: sem,
                            init: None,
                            ctor,
                            loc: loc.clone(),
                        })
                    }
                    other => Err(type_error(
                        loc,
                        format!("cannot declare a variable of type {other}"),
                    )),
                }
            }
            Stmt::Assign {
                target,
                op,
                value,
                loc,
            } => {
                let (place, ty) = self.place(ctx, target)?;
                let rhs = match op {
                    AssignOp::Set => self.expect_type(ctx, value, &ty)?,
                    AssignOp::Add | AssignOp::Sub => {
                        if ty != SemType::Int {
                            return Err(type_error(loc, "compound assignment needs an int"));
                        }
                        let v = self.expect_type(ctx, value, &SemType::Int)?;
                        let bop = if *op == AssignOp::Add {
                            ast::BinaryOp::Add
                        } else {
                            ast::BinaryOp::Sub
                        };
                        self.load_binop(place.clone(), bop, v, loc)
                    }
                };
                Ok(TStmt::Assign {
                    target: place,
                    value: rhs,
                    loc: loc.clone(),
                })
            }
            Stmt::Step {
                target,
                increment,
                loc,
            } => {
                let (place, ty) = self.place(ctx, target)?;
                if ty != SemType::Int {
                    return Err(type_error(loc, "`++`/`--` need an int"));
                }
                let one = TExpr {
                    kind: TExprKind::Int(1),
                    ty: SemType::Int,
                    loc: loc.clone(),
                };
                let bop = if *increment {
                    ast::BinaryOp::Add
                } else {
                    ast::BinaryOp::Sub
                };
                let value = self.load_binop(place.clone(), bop, one, loc);
                Ok(TStmt::Assign {
                    target: place,
                    value,
                    loc: loc.clone(),
                })
            }
            Stmt::If {
                cond,
                then_block,
                else_block,
                loc,
            } => Ok(TStmt::If {
                cond: self.cond(ctx, cond)?,
                then_body: self.block(ctx, &then_block.stmts)?,
                else_body: match else_block {
                    Some(b) => self.block(ctx, &b.stmts)?,
                    None => Vec::new(),
                },
                loc: loc.clone(),
            }),
            Stmt::While { cond, body, loc } => Ok(TStmt::While {
                cond: self.cond(ctx, cond)?,
                body: self.block(ctx, &body.stmts)?,
                loc: loc.clone(),
            }),
            Stmt::For {
                init,
                cond,
                step,
                body,
                loc,
            } => {
                ctx.scopes.push(HashMap::new());
                let result = (|| {
                    let init = match init {
                        Some(s) => vec![self.stmt(ctx, s)?],
                        None => Vec::new(),
                    };
                    let cond = match cond {
                        Some(c) => Some(self.cond(ctx, c)?),
                        None => None,
                    };
                    let step = match step {
                        Some(s) => vec![self.stmt(ctx, s)?],
                        None => Vec::new(),
                    };
                    let body = self.block(ctx, &body.stmts)?;
                    Ok(TStmt::For {
                        init,
                        cond,
                        step,
                        body,
                        loc: loc.clone(),
                    })
                })();
                ctx.scopes.pop();
                result
            }
            Stmt::Expr { expr, loc } => {
                if let ExprKind::Call { callee, args } = &expr.kind {
                    if callee == ASSERT_BUILTIN {
                        if args.len() != 2 {
                            return Err(type_error(
                                loc,
                                "__VERIFIER_assert takes a condition and a message",
                            ));
                        }
                        let cond = self.expect_type(ctx, &args[0], &SemType::Bool)?;
                        let ExprKind::Str(message) = &args[1].kind else {
                            return Err(type_error(
                                &args[1].loc,
                                "assertion message must be a string literal",
                            ));
                        };
                        if message.is_empty() {
                            return Err(type_error(
                                &args[1].loc,
                                "assertion message must not be empty",
                            ));
                        }
                        return Ok(TStmt::Assert {
                            cond,
                            message: message.clone(),
                            class: ctx.property_class,
                            loc: loc.clone(),
                        });
                    }
                    if callee == ASSUME_BUILTIN {
                        if args.len() != 1 {
                            return Err(type_error(loc, "__VERIFIER_assume takes one condition"));
                        }
                        return Ok(TStmt::Assume {
                            cond: self.cond(ctx, &args[0])?,
                            loc: loc.clone(),
                        });
                    }
                }
                let e = self.expr_allow_void(ctx, expr)?;
                Ok(TStmt::Expr {
                    expr: e,
                    loc: loc.clone(),
                })
            }
            Stmt::Assert { cond, loc } => Ok(TStmt::Assert {
                cond: self.cond(ctx, cond)?,
                message: format!("assertion {}", print_expr(cond)),
                class: ctx.property_class,
                loc: loc.clone(),
            }),
            Stmt::Return { value, loc } => {
                let ret = ctx.ret.clone();
                let value = match (value, &ret) {
                    (None, SemType::Void) => None,
                    (None, _) => {
                        return Err(type_error(
                            loc,
                            format!("missing return value of type {ret}"),
                        ))
                    }
                    (Some(_), SemType::Void) => {
                        return Err(type_error(loc, "void function returns a value"))
                    }
                    (Some(v), _) => Some(self.expect_type(ctx, v, &ret)?),
                };
                Ok(TStmt::Return {
                    value,
                    loc: loc.clone(),
                })
            }
            Stmt::Block(b) => Ok(TStmt::Block(self.block(ctx, &b.stmts)?)),
        }
    }

    fn load_binop(
        &self,
        place: Place,
        op: ast::BinaryOp,
        rhs: TExpr,
        loc: &SourceLocation,
    ) -> TExpr {
        let load = TExpr {
            kind: TExprKind::Load(place),
            ty: SemType::Int,
            loc: loc.clone(),
        };
        TExpr {
            kind: TExprKind::Binary(op, Box::new(load), Box::new(rhs)),
            ty: SemType::Int,
            loc: loc.clone(),
        }
    }

    fn expect_type(&mut self, ctx: &mut FnCtx<'_>, e: &Expr, ty: &SemType) -> TResult<TExpr> {
        let t = self.expr(ctx, e)?;
        if &t.ty != ty {
            return Err(type_error(&e.loc, format!("expected {ty}, found {}", t.ty)));
        }
        Ok(t)
    }

    /// A condition; integers are compared against zero as in C.
    fn cond(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<TExpr> {
        let t = self.expr(ctx, e)?;
        to_bool(t, &e.loc)
    }

    fn int_literal(&self, v: i64, loc: &SourceLocation) -> TExpr {
        TExpr {
            kind: TExprKind::Int(bv::wrap(v, self.config.int_width)),
            ty: SemType::Int,
            loc: loc.clone(),
        }
    }

    fn expr_allow_void(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<TExpr> {
        match &e.kind {
            ExprKind::Call { .. } | ExprKind::MethodCall { .. } => self.call(ctx, e),
            _ => self.expr(ctx, e),
        }
    }

    fn expr(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<TExpr> {
        let loc = &e.loc;
        let (kind, ty) = match &e.kind {
            ExprKind::Int(v) => return Ok(self.int_literal(*v as i64, loc)),
            ExprKind::Bool(b) => (TExprKind::Bool(*b), SemType::Bool),
            ExprKind::Str(_) => {
                return Err(type_error(
                    loc,
                    "string literals are only allowed as arguments",
                ))
            }
            ExprKind::This => return Err(type_error(loc, "`this` is not a value")),
            ExprKind::Ident(name) => {
                if ctx.lookup(name).is_none() && ctx.class.and_then(|c| field_of(c, name)).is_none()
                {
                    if name == CAPACITY_CONSTANT {
                        return Ok(self.int_literal(self.config.container_capacity as i64, loc));
                    }
                    if name == STRICT_INTERVAL_CONSTANT {
                        return Ok(TExpr {
                            kind: TExprKind::Bool(self.config.strict_positive_interval),
                            ty: SemType::Bool,
                            loc: loc.clone(),
                        });
                    }
                }
                let (place, ty) = self.place(ctx, e)?;
                (TExprKind::Load(place), ty)
            }
            ExprKind::Member { .. } | ExprKind::Index { .. } => {
                let (place, ty) = self.place(ctx, e)?;
                (TExprKind::Load(place), ty)
            }
            ExprKind::Call { .. } | ExprKind::MethodCall { .. } => {
                let t = self.call(ctx, e)?;
                if t.ty == SemType::Void {
                    return Err(type_error(loc, "a void call has no value"));
                }
                return Ok(t);
            }
            ExprKind::Unary(op, a) => {
                let a_t = self.expr(ctx, a)?;
                match op {
                    ast::UnaryOp::Neg => {
                        if a_t.ty != SemType::Int {
                            return Err(type_error(loc, format!("cannot negate {}", a_t.ty)));
                        }
                        if let TExprKind::Int(v) = a_t.kind {
                            return Ok(self.int_literal(v.wrapping_neg(), loc));
                        }
                        (TExprKind::Unary(*op, Box::new(a_t)), SemType::Int)
                    }
                    ast::UnaryOp::Not => {
                        let a_t = to_bool(a_t, &a.loc)?;
                        (TExprKind::Unary(*op, Box::new(a_t)), SemType::Bool)
                    }
                }
            }
            ExprKind::Binary(op, a, b) => {
                use ast::BinaryOp::*;
                let a_t = self.expr(ctx, a)?;
                let b_t = self.expr(ctx, b)?;
                match op {
                    Mul | Div | Rem | Add | Sub => {
                        if a_t.ty != SemType::Int || b_t.ty != SemType::Int {
                            return Err(type_error(
                                loc,
                                format!("no `{}` for {} and {}", op.symbol(), a_t.ty, b_t.ty),
                            ));
                        }
                        (
                            TExprKind::Binary(*op, Box::new(a_t), Box::new(b_t)),
                            SemType::Int,
                        )
                    }
                    Lt | Le | Gt | Ge => {
                        if a_t.ty != SemType::Int || b_t.ty != SemType::Int {
                            return Err(type_error(
                                loc,
                                format!("no `{}` for {} and {}", op.symbol(), a_t.ty, b_t.ty),
                            ));
                        }
                        (
                            TExprKind::Binary(*op, Box::new(a_t), Box::new(b_t)),
                            SemType::Bool,
                        )
                    }
                    Eq | Ne => {
                        if a_t.ty != b_t.ty || !a_t.ty.is_scalar() {
                            return Err(type_error(
                                loc,
                                format!("cannot compare {} with {}", a_t.ty, b_t.ty),
                            ));
                        }
                        (
                            TExprKind::Binary(*op, Box::new(a_t), Box::new(b_t)),
                            SemType::Bool,
                        )
                    }
                    And | Or => {
                        let a_t = to_bool(a_t, &a.loc)?;
                        let b_t = to_bool(b_t, &b.loc)?;
                        (
                            TExprKind::Binary(*op, Box::new(a_t), Box::new(b_t)),
                            SemType::Bool,
                        )
                    }
                }
            }
        };
        Ok(TExpr {
            kind,
            ty,
            loc: loc.clone(),
        })
    }

    fn object(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<(ObjRef, String)> {
        match &e.kind {
            ExprKind::This => match ctx.class {
                Some(c) => Ok((ObjRef::This, c.name.clone())),
                None => Err(type_error(&e.loc, "`this` outside of a method")),
            },
            ExprKind::Ident(n) => match ctx.lookup(n) {
                Some((unique, SemType::Class(c))) => Ok((ObjRef::Local(unique.clone()), c.clone())),
                Some((_, ty)) => Err(type_error(
                    &e.loc,
                    format!("`{n}` has type {ty}, not a class"),
                )),
                None => Err(undefined(&e.loc, n)),
            },
            _ => Err(type_error(&e.loc, "expected an object")),
        }
    }

    fn place(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<(Place, SemType)> {
        match &e.kind {
            ExprKind::Ident(name) => {
                if let Some((unique, ty)) = ctx.lookup(name) {
                    if !ty.is_scalar() {
                        return Err(type_error(&e.loc, format!("`{name}` is not a scalar")));
                    }
                    return Ok((Place::Local(unique.clone()), ty.clone()));
                }
                if let Some(f) = ctx.class.and_then(|c| field_of(c, name)) {
                    if !f.ty.is_scalar() {
                        return Err(type_error(
                            &e.loc,
                            format!("array `{name}` must be indexed"),
                        ));
                    }
                    return Ok((
                        Place::Field {
                            obj: ObjRef::This,
                            field: name.clone(),
                        },
                        f.ty.clone(),
                    ));
                }
                Err(undefined(&e.loc, name))
            }
            ExprKind::Member { object, name, .. } => {
                let (obj, cname) = self.object(ctx, object)?;
                let f = self.classes[&cname]
                    .fields
                    .iter()
                    .find(|f| f.name == *name)
                    .cloned()
                    .ok_or_else(|| undefined(&e.loc, &format!("{cname}::{name}")))?;
                if !f.ty.is_scalar() {
                    return Err(type_error(
                        &e.loc,
                        format!("array `{name}` must be indexed"),
                    ));
                }
                Ok((
                    Place::Field {
                        obj,
                        field: name.clone(),
                    },
                    f.ty,
                ))
            }
            ExprKind::Index { base, index } => {
                let (obj, field, fty) = match &base.kind {
                    ExprKind::Member { object, name, .. } => {
                        let (obj, cname) = self.object(ctx, object)?;
                        let f = self.classes[&cname]
                            .fields
                            .iter()
                            .find(|f| f.name == *name)
                            .cloned()
                            .ok_or_else(|| undefined(&base.loc, &format!("{cname}::{name}")))?;
                        (obj, name.clone(), f.ty)
                    }
                    ExprKind::Ident(name) if ctx.lookup(name).is_none() => {
                        let f = ctx
                            .class
                            .and_then(|c| field_of(c, name))
                            .cloned()
                            .ok_or_else(|| undefined(&base.loc, name))?;
                        (ObjRef::This, name.clone(), f.ty)
                    }
                    _ => return Err(type_error(&base.loc, "only array fields can be indexed")),
                };
                let SemType::Array(elem, capacity) = fty else {
                    return Err(type_error(&base.loc, format!("`{field}` is not an array")));
                };
                let idx = self.expect_type(ctx, index, &SemType::Int)?;
                Ok((
                    Place::Element {
                        obj,
                        field,
                        index: Box::new(idx),
                        capacity,
                    },
                    *elem,
                ))
            }
            _ => Err(type_error(&e.loc, "expression is not assignable")),
        }
    }

    fn call_args(
        &mut self,
        ctx: &mut FnCtx<'_>,
        params: &[SemType],
        args: &[Expr],
        loc: &SourceLocation,
    ) -> TResult<Vec<TExpr>> {
        if params.len() != args.len() {
            return Err(type_error(
                loc,
                format!("expected {} arguments, found {}", params.len(), args.len()),
            ));
        }
        params
            .iter()
            .zip(args)
            .map(|(p, a)| {
                if *p == SemType::Str {
                    match &a.kind {
                        ExprKind::Str(s) => Ok(TExpr {
                            kind: TExprKind::Str(s.clone()),
                            ty: SemType::Str,
                            loc: a.loc.clone(),
                        }),
                        _ => Err(type_error(&a.loc, "expected a string literal")),
                    }
                } else {
                    self.expect_type(ctx, a, p)
                }
            })
            .collect()
    }

    fn call(&mut self, ctx: &mut FnCtx<'_>, e: &Expr) -> TResult<TExpr> {
        let loc = &e.loc;
        let (function, receiver, params, ret, args) = match &e.kind {
            ExprKind::Call { callee, args } => {
                match callee.as_str() {
                    "nondet_int" | "nondet_bool" => {
                        if !args.is_empty() {
                            return Err(type_error(loc, format!("`{callee}` takes no arguments")));
                        }
                        let (kind, ty) = if callee == "nondet_int" {
                            (TExprKind::NondetInt, SemType::Int)
                        } else {
                            (TExprKind::NondetBool, SemType::Bool)
                        };
                        return Ok(TExpr {
                            kind,
                            ty,
                            loc: loc.clone(),
                        });
                    }
                    ASSERT_BUILTIN | ASSUME_BUILTIN => {
                        return Err(type_error(
                            loc,
                            format!("`{callee}` can only be used as a statement"),
                        ))
                    }
                    _ => {}
                }
                if let Some(sig) = ctx.class.and_then(|c| c.method(callee, args.len())) {
                    (
                        sig.mangled.clone(),
                        Some(ObjRef::This),
                        sig.params.clone(),
                        sig.ret.clone(),
                        args,
                    )
                } else if let Some((params, ret)) = self.function_sigs.get(callee) {
                    (callee.clone(), None, params.clone(), ret.clone(), args)
                } else {
                    return Err(undefined(loc, callee));
                }
            }
            ExprKind::MethodCall {
                receiver,
                method,
                args,
                ..
            } => {
                let (obj, cname) = self.object(ctx, receiver)?;
                let info = &self.classes[&cname];
                let Some(sig) = info.method(method, args.len()) else {
                    return Err(undefined(loc, &format!("{cname}::{method}")));
                };
                (
                    sig.mangled.clone(),
                    Some(obj),
                    sig.params.clone(),
                    sig.ret.clone(),
                    args,
                )
            }
            _ => unreachable!(),
        };
        let args = self.call_args(ctx, &params, args, loc)?;
        Ok(TExpr {
            kind: TExprKind::Call {
                function,
                receiver,
                args,
            },
            ty: ret,
            loc: loc.clone(),
        })
    }
}

fn field_of<'c>(c: &'c ClassInfo<'_>, name: &str) -> Option<&'c FieldDef> {
    c.fields.iter().find(|f| f.name == name)
}

fn to_bool(t: TExpr, loc: &SourceLocation) -> TResult<TExpr> {
    match t.ty {
        SemType::Bool => Ok(t),
        SemType::Int => {
            let zero = TExpr {
                kind: TExprKind::Int(0),
                ty: SemType::Int,
                loc: loc.clone(),
            };
            Ok(TExpr {
                kind: TExprKind::Binary(ast::BinaryOp::Ne, Box::new(t), Box::new(zero)),
                ty: SemType::Bool,
                loc: loc.clone(),
            })
        }
        other => Err(type_error(
            loc,
            format!("expected a condition, found {other}"),
        )),
    }
}

fn always_returns(stmts: &[TStmt]) -> bool {
    match stmts.last() {
        Some(TStmt::Return { .. }) => true,
        Some(TStmt::If {
            then_body,
            else_body,
            ..
        }) => always_returns(then_body) && always_returns(else_body),
        Some(TStmt::Block(b)) => always_returns(b),
        _ => false,
    }
}
