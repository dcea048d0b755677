use std::collections::BTreeMap;

use crate::frontend::typed::*;
use crate::loc::SourceLocation;

use super::*;

/// Lowers a typed program into one GOTO function per source function or
/// method.
pub fn lower_to_goto(ast: &TypedAst) -> GotoProgram {
    let classes: BTreeMap<String, Vec<FieldDef>> = ast
        .classes
        .iter()
        .map(|c| (c.name.clone(), c.fields.clone()))
        .collect();
    let mut functions = BTreeMap::new();
    for f in ast.all_functions() {
        let lowered = FunctionLowerer::new().lower(f);
        functions.insert(lowered.name.clone(), lowered);
    }
    GotoProgram {
        functions,
        entry: "main".to_string(),
        classes,
        int_width: ast.int_width,
    }
}

struct FunctionLowerer {
    body: Vec<Instruction>,
    next_temp: u32,
    next_loop: u32,
}

fn is_pure(e: &TExpr) -> bool {
    match &e.kind {
        TExprKind::Int(_) | TExprKind::Bool(_) | TExprKind::Str(_) => true,
        TExprKind::Load(Place::Element { .. }) => false,
        TExprKind::Load(_) => true,
        TExprKind::Unary(_, a) => is_pure(a),
        TExprKind::Binary(_, a, b) => is_pure(a) && is_pure(b),
        TExprKind::Call { .. } | TExprKind::NondetInt | TExprKind::NondetBool => false,
    }
}

fn is_constant(e: &GExpr) -> bool {
    matches!(e, GExpr::Int(_) | GExpr::Bool(_))
}

impl FunctionLowerer {
    fn new() -> Self {
        FunctionLowerer {
            body: Vec::new(),
            next_temp: 0,
            next_loop: 0,
        }
    }

    fn lower(mut self, f: &FunctionDef) -> GotoFunction {
        let mut params = Vec::new();
        if let Some(c) = &f.class {
            params.push(Local {
                name: "this".to_string(),
                ty: SemType::Class(c.clone()),
            });
        }
        params.extend(f.params.iter().cloned());
        self.stmts(&f.body);
        self.emit(InstrKind::EndFunction, &f.loc);
        GotoFunction {
            name: f.name.clone(),
            params,
            ret: f.ret.clone(),
            body: self.body,
            is_model: f.origin.is_model(),
            loc: f.loc.clone(),
        }
    }

    fn emit(&mut self, kind: InstrKind, loc: &SourceLocation) -> usize {
        self.body.push(Instruction {
            kind,
            loc: loc.clone(),
        });
        self.body.len() - 1
    }

    fn emit_goto(
        &mut self,
        guard: Option<GExpr>,
        tag: Option<LoopTag>,
        loc: &SourceLocation,
    ) -> usize {
        self.emit(
            InstrKind::Goto {
                target: usize::MAX,
                guard,
                loop_tag: tag,
            },
            loc,
        )
    }

    fn patch(&mut self, goto: usize, target: usize) {
        if let InstrKind::Goto { target: t, .. } = &mut self.body[goto].kind {
            *t = target;
        }
    }

    fn temp(&mut self) -> String {
        self.next_temp += 1;
        format!("$tmp{}", self.next_temp)
    }

    fn stmts(&mut self, stmts: &[TStmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &TStmt) {
        match s {
            TStmt::Decl {
                var,
                ty,
                init,
                ctor,
                loc,
            } => {
                self.emit(
                    InstrKind::Decl {
                        var: var.clone(),
                        ty: ty.clone(),
                    },
                    loc,
                );
                if let Some(e) = init {
                    self.assign(GPlace::Local(var.clone()), e, loc);
                }
                if let Some(c) = ctor {
                    let mut args = vec![CallArg::Object(ObjRef::Local(var.clone()))];
                    args.extend(self.args(&c.args));
                    self.emit(
                        InstrKind::Call {
                            result: None,
                            callee: c.function.clone(),
                            args,
                        },
                        loc,
                    );
                }
            }
            TStmt::Assign { target, value, loc } => {
                let mut place = self.place(target, loc);
                if !is_pure(value) {
                    place = self.snapshot_place_index(place, loc);
                }
                self.assign(place, value, loc);
            }
            TStmt::If {
                cond,
                then_body,
                else_body,
                loc,
            } => {
                let g = self.expr(cond);
                let skip_then = self.emit_goto(Some(g.negate()), None, loc);
                self.stmts(then_body);
                if else_body.is_empty() {
                    let end = self.emit(InstrKind::Skip, loc);
                    self.patch(skip_then, end);
                } else {
                    let skip_else = self.emit_goto(None, None, loc);
                    let else_start = self.body.len();
                    self.patch(skip_then, else_start);
                    self.stmts(else_body);
                    let end = self.emit(InstrKind::Skip, loc);
                    self.patch(skip_else, end);
                }
            }
            TStmt::While { cond, body, loc } => self.lower_loop(Some(cond), body, &[], loc),
            TStmt::For {
                init,
                cond,
                step,
                body,
                loc,
            } => {
                self.stmts(init);
                self.lower_loop(cond.as_ref(), body, step, loc);
            }
            TStmt::Expr { expr, loc } => match &expr.kind {
                TExprKind::Call { .. } => {
                    self.call(expr, None);
                }
                _ => {
                    // Evaluate for the bounds checks it implies.
                    let _ = self.expr(expr);
                    let _ = loc;
                }
            },
            TStmt::Assert {
                cond,
                message,
                class,
                loc,
            } => {
                let g = self.expr(cond);
                self.emit(
                    InstrKind::Assert {
                        cond: g,
                        message: message.clone(),
                        class: *class,
                    },
                    loc,
                );
            }
            TStmt::Assume { cond, loc } => {
                let g = self.expr(cond);
                self.emit(InstrKind::Assume(g), loc);
            }
            TStmt::Return { value, loc } => {
                let v = value.as_ref().map(|e| self.expr(e));
                self.emit(InstrKind::Return(v), loc);
            }
            TStmt::Block(b) => self.stmts(b),
        }
    }

    /// `while (cond) { body; step }` as
    /// `head: GOTO end if !cond; body; step; GOTO head; end: SKIP`.
    fn lower_loop(
        &mut self,
        cond: Option<&TExpr>,
        body: &[TStmt],
        step: &[TStmt],
        loc: &SourceLocation,
    ) {
        let loop_id = self.next_loop;
        self.next_loop += 1;
        let head = self.body.len();
        let g = match cond {
            Some(c) => self.expr(c),
            None => GExpr::Bool(true),
        };
        let exit = self.emit_goto(
            Some(g.negate()),
            Some(LoopTag {
                loop_id,
                role: LoopRole::Exit,
            }),
            loc,
        );
        self.stmts(body);
        self.stmts(step);
        self.emit(
            InstrKind::Goto {
                target: head,
                guard: None,
                loop_tag: Some(LoopTag {
                    loop_id,
                    role: LoopRole::BackEdge,
                }),
            },
            loc,
        );
        let end = self.emit(InstrKind::Skip, loc);
        self.patch(exit, end);
    }

    fn assign(&mut self, place: GPlace, value: &TExpr, loc: &SourceLocation) {
        let rhs = match &value.kind {
            TExprKind::NondetInt => GExpr::NondetInt,
            TExprKind::NondetBool => GExpr::NondetBool,
            TExprKind::Call { .. } => {
                if let Some(v) = self.call(value, Some(place.clone())) {
                    // The call already wrote its result into `place`.
                    let _ = v;
                    return;
                }
                unreachable!("value call without result")
            }
            _ => self.expr(value),
        };
        self.emit(InstrKind::Assign { lhs: place, rhs }, loc);
    }

    /// If the element index of `place` reads state, copy it to a temporary
    /// so that a later call cannot change which element is written.
    fn snapshot_place_index(&mut self, place: GPlace, loc: &SourceLocation) -> GPlace {
        match place {
            GPlace::Element {
                obj,
                field,
                index,
                capacity,
            } if !is_constant(&index) => {
                let t = self.temp();
                self.emit(
                    InstrKind::Assign {
                        lhs: GPlace::Local(t.clone()),
                        rhs: *index,
                    },
                    loc,
                );
                GPlace::Element {
                    obj,
                    field,
                    index: Box::new(GExpr::Load(GPlace::Local(t))),
                    capacity,
                }
            }
            p => p,
        }
    }

    fn place(&mut self, p: &Place, loc: &SourceLocation) -> GPlace {
        match p {
            Place::Local(n) => GPlace::Local(n.clone()),
            Place::Field { obj, field } => GPlace::Field {
                obj: obj.clone(),
                field: field.clone(),
            },
            Place::Element {
                obj,
                field,
                index,
                capacity,
            } => {
                let idx = self.expr(index);
                let bounds = GExpr::Binary(
                    BinaryOp::And,
                    Box::new(GExpr::Binary(
                        BinaryOp::Le,
                        Box::new(GExpr::Int(0)),
                        Box::new(idx.clone()),
                    )),
                    Box::new(GExpr::Binary(
                        BinaryOp::Lt,
                        Box::new(idx.clone()),
                        Box::new(GExpr::Int(*capacity as i64)),
                    )),
                );
                self.emit(
                    InstrKind::Assert {
                        cond: bounds,
                        message: ARRAY_BOUNDS_MESSAGE.to_string(),
                        class: PropertyClass::ArrayBounds,
                    },
                    loc,
                );
                GPlace::Element {
                    obj: obj.clone(),
                    field: field.clone(),
                    index: Box::new(idx),
                    capacity: *capacity,
                }
            }
        }
    }

    /// Copies `g` into a temporary unless it is a constant.
    fn freeze(&mut self, g: GExpr, loc: &SourceLocation) -> GExpr {
        if is_constant(&g) {
            return g;
        }
        let t = self.temp();
        self.emit(
            InstrKind::Assign {
                lhs: GPlace::Local(t.clone()),
                rhs: g,
            },
            loc,
        );
        GExpr::Load(GPlace::Local(t))
    }

    /// Lowers the arguments left to right. An argument that is followed by
    /// an impure one is frozen first.
    fn args(&mut self, args: &[TExpr]) -> Vec<CallArg> {
        let mut out = Vec::new();
        for (i, a) in args.iter().enumerate() {
            if let TExprKind::Str(s) = &a.kind {
                out.push(CallArg::Str(s.clone()));
                continue;
            }
            let mut g = self.expr(a);
            if args[i + 1..].iter().any(|b| !is_pure(b)) {
                g = self.freeze(g, &a.loc);
            }
            out.push(CallArg::Value(g));
        }
        out
    }

    /// Emits a CALL; returns the loaded result when the callee has one.
    fn call(&mut self, e: &TExpr, into: Option<GPlace>) -> Option<GExpr> {
        let TExprKind::Call {
            function,
            receiver,
            args,
        } = &e.kind
        else {
            unreachable!()
        };
        let mut call_args = Vec::new();
        if let Some(r) = receiver {
            call_args.push(CallArg::Object(r.clone()));
        }
        call_args.extend(self.args(args));
        let (result, value) = if e.ty == SemType::Void {
            (None, None)
        } else {
            match into {
                Some(p) => (Some(p.clone()), Some(GExpr::Load(p))),
                None => {
                    let t = self.temp();
                    let p = GPlace::Local(t);
                    (Some(p.clone()), Some(GExpr::Load(p)))
                }
            }
        };
        self.emit(
            InstrKind::Call {
                result,
                callee: function.clone(),
                args: call_args,
            },
            &e.loc,
        );
        value
    }

    fn expr(&mut self, e: &TExpr) -> GExpr {
        match &e.kind {
            TExprKind::Int(v) => GExpr::Int(*v),
            TExprKind::Bool(b) => GExpr::Bool(*b),
            TExprKind::Str(_) => unreachable!("typecheck keeps strings out of expressions"),
            TExprKind::Load(p) => GExpr::Load(self.place(p, &e.loc)),
            TExprKind::Unary(op, a) => GExpr::Unary(*op, Box::new(self.expr(a))),
            TExprKind::Binary(op @ (BinaryOp::And | BinaryOp::Or), a, b) if !is_pure(b) => {
                // Short circuit: the right operand runs only when needed.
                let ga = self.expr(a);
                let t = self.temp();
                let tp = GPlace::Local(t.clone());
                self.emit(
                    InstrKind::Assign {
                        lhs: tp.clone(),
                        rhs: ga,
                    },
                    &e.loc,
                );
                let tv = GExpr::Load(tp.clone());
                let skip_guard = if *op == BinaryOp::And {
                    tv.clone().negate()
                } else {
                    tv.clone()
                };
                let skip = self.emit_goto(Some(skip_guard), None, &e.loc);
                let gb = self.expr(b);
                self.emit(InstrKind::Assign { lhs: tp, rhs: gb }, &e.loc);
                let end = self.emit(InstrKind::Skip, &e.loc);
                self.patch(skip, end);
                tv
            }
            TExprKind::Binary(op, a, b) => {
                let mut ga = self.expr(a);
                if !is_pure(b) {
                    ga = self.freeze(ga, &e.loc);
                }
                let gb = self.expr(b);
                GExpr::Binary(*op, Box::new(ga), Box::new(gb))
            }
            TExprKind::Call { .. } => self
                .call(e, None)
                .expect("typecheck rejects void calls in expressions"),
            TExprKind::NondetInt | TExprKind::NondetBool => {
                let t = self.temp();
                let rhs = if matches!(e.kind, TExprKind::NondetInt) {
                    GExpr::NondetInt
                } else {
                    GExpr::NondetBool
                };
                self.emit(
                    InstrKind::Assign {
                        lhs: GPlace::Local(t.clone()),
                        rhs,
                    },
                    &e.loc,
                );
                GExpr::Load(GPlace::Local(t))
            }
        }
    }
}
