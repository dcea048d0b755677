//! Path-merging symbolic execution with loop unwinding and call inlining.
//!
//! Each function invocation is walked once. States waiting at a program
//! counter are merged on arrival, and the walk always resumes at the
//! smallest waiting program counter, so a join point is processed only after
//! every forward edge into it. Loop back-edges are the only backward jumps;
//! they are followed until the bound is reached, after which the loop
//! condition is evaluated one last time and its negation is claimed (or
//! assumed).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::config::VerifierConfig;
use crate::frontend::typed::{BinaryOp, ObjRef, SemType, UnaryOp};
use crate::goto::{
    CallArg, GExpr, GPlace, GotoFunction, GotoProgram, InstrKind, LoopRole, PropertyClass,
    RECURSION_MESSAGE, UNWINDING_MESSAGE,
};
use crate::loc::SourceLocation;
use crate::smt::term::{Sort, SsaVariable, TermId};

use super::ssa::{CallArgument, CallEvent, Claim, Equation, EquationKind, Input, SsaSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymexError {
    #[error("time limit exceeded during symbolic execution")]
    Timeout,
    #[error("memory limit exceeded during symbolic execution")]
    MemOut,
    #[error("call to unknown function `{0}`")]
    UnknownFunction(String),
    #[error("program has no entry function `{0}`")]
    MissingEntry(String),
}

/// How a place maps onto flattened scalar variables.
enum ScalarPlace {
    Base(Arc<str>),
    /// A constant index outside the array.
    OutOfRange,
    Symbolic {
        obj: Arc<str>,
        field: String,
        idx: TermId,
        cap: u32,
    },
}

/// Name of the pseudo-variable that carries a function's result.
pub const RETURN_SLOT: &str = "$return";

/// Symbolically executes `p` with the bounds in `config`.
pub fn symex(p: &GotoProgram, config: &VerifierConfig) -> Result<SsaSystem, SymexError> {
    symex_until(p, config, None)
}

/// Like [`symex`], giving up with [`SymexError::Timeout`] at `deadline`.
pub fn symex_until(
    p: &GotoProgram,
    config: &VerifierConfig,
    deadline: Option<Instant>,
) -> Result<SsaSystem, SymexError> {
    let mut engine = Engine {
        program: p,
        config,
        ssa: SsaSystem {
            int_width: p.int_width,
            ..SsaSystem::default()
        },
        versions: HashMap::new(),
        sorts: HashMap::new(),
        seq: 0,
        instances: HashMap::new(),
        stack: Vec::new(),
        deadline,
        mem_limit: (config.mem_limit_kb as usize).saturating_mul(1024),
        width: p.int_width,
        nondet_counter: 0,
        steps: 0,
    };
    let main = p
        .function(&p.entry)
        .ok_or_else(|| SymexError::MissingEntry(p.entry.clone()))?;
    let t = engine.ssa.pool.tt();
    let state = State {
        guard: Guard {
            conjuncts: Vec::new(),
            term: t,
        },
        values: HashMap::new(),
        loop_counts: BTreeMap::new(),
        check_loop: None,
    };
    let frame = Frame {
        func: main,
        prefix: Arc::from(main.name.as_str()),
        this: None,
    };
    engine.stack.push(main.name.clone());
    engine.walk(&frame, state)?;
    Ok(engine.ssa)
}

#[derive(Clone, Debug)]
struct Guard {
    /// Path condition as a list of branch decisions.
    conjuncts: Vec<TermId>,
    /// Conjunction of `conjuncts`.
    term: TermId,
}

#[derive(Clone, Debug)]
struct State {
    guard: Guard,
    /// Current value of every written scalar. Absent names read as their
    /// unconstrained version 0.
    values: HashMap<Arc<str>, TermId>,
    loop_counts: BTreeMap<u32, u32>,
    /// Loop whose bound is exhausted and whose condition is being evaluated
    /// a final time.
    check_loop: Option<u32>,
}

struct Frame<'a> {
    func: &'a GotoFunction,
    prefix: Arc<str>,
    this: Option<Arc<str>>,
}

impl Frame<'_> {
    fn local(&self, name: &str) -> Arc<str> {
        Arc::from(format!("{}::{}", self.prefix, name))
    }

    fn object(&self, obj: &ObjRef) -> Arc<str> {
        match obj {
            ObjRef::This => self
                .this
                .clone()
                .unwrap_or_else(|| Arc::from(format!("{}::this", self.prefix))),
            ObjRef::Local(n) => self.local(n),
        }
    }
}

fn field_name(obj: &str, field: &str) -> Arc<str> {
    Arc::from(format!("{obj}.{field}"))
}

fn element_name(obj: &str, field: &str, j: u32) -> Arc<str> {
    Arc::from(format!("{obj}.{field}[{j}]"))
}

struct Engine<'a> {
    program: &'a GotoProgram,
    config: &'a VerifierConfig,
    ssa: SsaSystem,
    versions: HashMap<Arc<str>, u32>,
    sorts: HashMap<Arc<str>, Sort>,
    seq: u64,
    instances: HashMap<String, u32>,
    stack: Vec<String>,
    deadline: Option<Instant>,
    mem_limit: usize,
    width: u32,
    nondet_counter: u32,
    steps: u64,
}

impl<'a> Engine<'a> {
    fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    fn check_limits(&mut self) -> Result<(), SymexError> {
        self.steps += 1;
        if !self.steps.is_multiple_of(64) {
            return Ok(());
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(SymexError::Timeout);
            }
        }
        if self.ssa.approx_bytes() > self.mem_limit {
            return Err(SymexError::MemOut);
        }
        Ok(())
    }

    fn is_dead(&self, s: &State) -> bool {
        self.ssa.pool.as_bool(s.guard.term) == Some(false)
    }

    fn push_guard(&mut self, s: &mut State, c: TermId) {
        if self.ssa.pool.as_bool(c) == Some(true) {
            return;
        }
        s.guard.conjuncts.push(c);
        s.guard.term = self.ssa.pool.and(s.guard.term, c);
    }

    fn walk(&mut self, frame: &Frame<'a>, entry: State) -> Result<Option<State>, SymexError> {
        let body = &frame.func.body;
        let mut pending: BTreeMap<usize, State> = BTreeMap::new();
        pending.insert(0, entry);
        while let Some((pc, state)) = pending.pop_first() {
            self.check_limits()?;
            let Some(ins) = body.get(pc) else {
                return Ok(Some(state));
            };
            if matches!(ins.kind, InstrKind::EndFunction) {
                return Ok(Some(state));
            }
            for (target, s) in self.step(frame, pc, state)? {
                if self.is_dead(&s) {
                    continue;
                }
                match pending.remove(&target) {
                    Some(other) => {
                        let merged = self.merge(other, s, &ins.loc);
                        pending.insert(target, merged);
                    }
                    None => {
                        pending.insert(target, s);
                    }
                }
            }
        }
        Ok(None)
    }

    fn step(
        &mut self,
        frame: &Frame<'a>,
        pc: usize,
        mut state: State,
    ) -> Result<Vec<(usize, State)>, SymexError> {
        let ins = &frame.func.body[pc];
        let loc = &ins.loc;
        match &ins.kind {
            InstrKind::Decl { var, ty } => {
                let base = frame.local(var);
                self.declare(&mut state, &base, ty, loc);
            }
            InstrKind::Assign { lhs, rhs } => match rhs {
                GExpr::NondetInt | GExpr::NondetBool => {
                    let sort = if matches!(rhs, GExpr::NondetBool) {
                        Sort::Bool
                    } else {
                        Sort::Bv(self.width)
                    };
                    self.assign_nondet(frame, &mut state, lhs, sort, loc);
                }
                _ => {
                    let v = self.eval(frame, &mut state, rhs, loc);
                    self.write(frame, &mut state, lhs, v, EquationKind::Assign, loc);
                }
            },
            InstrKind::Assume(c) => {
                let t = self.eval(frame, &mut state, c, loc);
                self.push_guard(&mut state, t);
            }
            InstrKind::Assert {
                cond,
                message,
                class,
            } => {
                let t = self.eval(frame, &mut state, cond, loc);
                self.claim(&state, t, message, *class, loc);
            }
            InstrKind::Goto {
                target,
                guard,
                loop_tag,
            } => {
                let g = match guard {
                    Some(e) => self.eval(frame, &mut state, e, loc),
                    None => self.ssa.pool.tt(),
                };
                match loop_tag {
                    Some(tag) if tag.role == LoopRole::BackEdge => {
                        let count = state.loop_counts.entry(tag.loop_id).or_insert(0);
                        *count += 1;
                        if *count >= self.config.unwind {
                            state.check_loop = Some(tag.loop_id);
                        }
                        return Ok(self.split(state, g, *target, pc + 1));
                    }
                    Some(tag) if state.check_loop == Some(tag.loop_id) => {
                        state.check_loop = None;
                        state.loop_counts.remove(&tag.loop_id);
                        if self.config.unwinding_assertions {
                            self.claim(&state, g, UNWINDING_MESSAGE, PropertyClass::Unwinding, loc);
                        }
                        self.push_guard(&mut state, g);
                        return Ok(vec![(*target, state)]);
                    }
                    Some(tag) => {
                        let mut out = self.split(state, g, *target, pc + 1);
                        for (t, s) in &mut out {
                            if *t == *target {
                                s.loop_counts.remove(&tag.loop_id);
                            }
                        }
                        return Ok(out);
                    }
                    None => return Ok(self.split(state, g, *target, pc + 1)),
                }
            }
            InstrKind::Call {
                result,
                callee,
                args,
            } => {
                return self.call(frame, pc, state, result.as_ref(), callee, args, loc);
            }
            InstrKind::Return(value) => {
                if let Some(e) = value {
                    let v = self.eval(frame, &mut state, e, loc);
                    let base = frame.local(RETURN_SLOT);
                    self.assign_base(&mut state, base, v, EquationKind::Return, loc);
                }
                return Ok(vec![(frame.func.body.len() - 1, state)]);
            }
            InstrKind::Skip | InstrKind::EndFunction => {}
        }
        Ok(vec![(pc + 1, state)])
    }

    /// Successor states of a conditional jump taken when `g` holds.
    fn split(
        &mut self,
        state: State,
        g: TermId,
        target: usize,
        fallthrough: usize,
    ) -> Vec<(usize, State)> {
        match self.ssa.pool.as_bool(g) {
            Some(true) => vec![(target, state)],
            Some(false) => vec![(fallthrough, state)],
            None => {
                let mut taken = state.clone();
                self.push_guard(&mut taken, g);
                let mut fall = state;
                let ng = self.ssa.pool.not(g);
                self.push_guard(&mut fall, ng);
                vec![(target, taken), (fallthrough, fall)]
            }
        }
    }

    fn merge(&mut self, a: State, b: State, loc: &SourceLocation) -> State {
        let n = a
            .guard
            .conjuncts
            .iter()
            .zip(&b.guard.conjuncts)
            .take_while(|(x, y)| x == y)
            .count();
        let pool = &mut self.ssa.pool;
        let ra = pool.and_all(a.guard.conjuncts[n..].iter().copied());
        let rb = pool.and_all(b.guard.conjuncts[n..].iter().copied());
        let either = pool.or(ra, rb);
        let mut conjuncts = a.guard.conjuncts[..n].to_vec();
        if pool.as_bool(either) != Some(true) {
            conjuncts.push(either);
        }
        let term = pool.and_all(conjuncts.iter().copied());
        let guard = Guard { conjuncts, term };

        let mut values = a.values;
        let mut names: Vec<Arc<str>> = Vec::new();
        for (k, vb) in &b.values {
            match values.get(k) {
                Some(va) if va != vb => names.push(k.clone()),
                Some(_) => {}
                None => {
                    values.insert(k.clone(), *vb);
                }
            }
        }
        // Deterministic version numbering.
        names.sort();
        for name in names {
            let va = values[&name];
            let vb = b.values[&name];
            let t = self.ssa.pool.ite(ra, va, vb);
            let keep_folded = t == va || t == vb || self.propagates(t);
            if keep_folded {
                values.insert(name, t);
            } else {
                let lhs = self.emit_equation(guard.term, name.clone(), t, EquationKind::Phi, loc);
                values.insert(name, lhs);
            }
        }
        let mut loop_counts = a.loop_counts;
        for (k, v) in b.loop_counts {
            let e = loop_counts.entry(k).or_insert(0);
            *e = (*e).max(v);
        }
        State {
            guard,
            values,
            loop_counts,
            check_loop: a.check_loop.or(b.check_loop),
        }
    }

    /// Whether a value may be substituted for its variable downstream.
    fn propagates(&self, t: TermId) -> bool {
        use crate::smt::term::Node;
        self.config.constant_propagation
            && matches!(
                self.ssa.pool.node(t),
                Node::BoolConst(_) | Node::BvConst { .. } | Node::Var(..)
            )
    }

    fn claim(
        &mut self,
        s: &State,
        condition: TermId,
        message: &str,
        class: PropertyClass,
        loc: &SourceLocation,
    ) {
        let seq = self.next_seq();
        self.ssa.claims.push(Claim {
            guard: s.guard.term,
            condition,
            message: message.to_string(),
            class,
            loc: loc.clone(),
            seq,
        });
    }

    fn fresh(&mut self, base: Arc<str>) -> SsaVariable {
        let v = self.versions.entry(base.clone()).or_insert(0);
        *v += 1;
        SsaVariable::new(base, *v)
    }

    /// Appends `guard ⇒ base#new = rhs` and returns the new variable's term.
    fn emit_equation(
        &mut self,
        guard: TermId,
        base: Arc<str>,
        rhs: TermId,
        kind: EquationKind,
        loc: &SourceLocation,
    ) -> TermId {
        let sort = self.ssa.pool.sort(rhs);
        self.sorts.insert(base.clone(), sort);
        let lhs = self.fresh(base);
        let lhs_term = self.ssa.pool.var(lhs.clone(), sort);
        let seq = self.next_seq();
        self.ssa.equations.push(Equation {
            guard,
            lhs,
            lhs_term,
            rhs,
            kind,
            loc: loc.clone(),
            seq,
        });
        lhs_term
    }

    fn assign_base(
        &mut self,
        s: &mut State,
        base: Arc<str>,
        rhs: TermId,
        kind: EquationKind,
        loc: &SourceLocation,
    ) {
        let lhs = self.emit_equation(s.guard.term, base.clone(), rhs, kind, loc);
        let value = if self.propagates(rhs) { rhs } else { lhs };
        s.values.insert(base, value);
    }

    fn read_base(&mut self, s: &State, base: &Arc<str>) -> TermId {
        if let Some(t) = s.values.get(base) {
            return *t;
        }
        let sort = self
            .sorts
            .get(base)
            .copied()
            .unwrap_or(Sort::Bv(self.width));
        self.ssa.pool.var(SsaVariable::new(base.clone(), 0), sort)
    }

    fn zero(&mut self, ty: &SemType) -> Option<TermId> {
        match ty {
            SemType::Int => Some(self.ssa.pool.bv_const(self.width, 0)),
            SemType::Bool => Some(self.ssa.pool.ff()),
            _ => None,
        }
    }

    fn declare(&mut self, s: &mut State, base: &Arc<str>, ty: &SemType, loc: &SourceLocation) {
        match ty {
            SemType::Class(c) => {
                let fields = self.program.classes.get(c).cloned().unwrap_or_default();
                for f in fields {
                    match &f.ty {
                        SemType::Array(elem, cap) => {
                            for j in 0..*cap {
                                if let Some(z) = self.zero(elem) {
                                    let name = element_name(base, &f.name, j);
                                    self.assign_base(s, name, z, EquationKind::Decl, loc);
                                }
                            }
                        }
                        ty => {
                            if let Some(z) = self.zero(ty) {
                                let name = field_name(base, &f.name);
                                self.assign_base(s, name, z, EquationKind::Decl, loc);
                            }
                        }
                    }
                }
            }
            ty => {
                if let Some(z) = self.zero(ty) {
                    self.assign_base(s, base.clone(), z, EquationKind::Decl, loc);
                }
            }
        }
    }

    /// The scalar a place denotes, resolving constant indices.
    fn scalar_base(
        &mut self,
        frame: &Frame<'a>,
        s: &mut State,
        place: &GPlace,
        loc: &SourceLocation,
    ) -> ScalarPlace {
        match place {
            GPlace::Local(n) => ScalarPlace::Base(frame.local(n)),
            GPlace::Field { obj, field } => {
                ScalarPlace::Base(field_name(&frame.object(obj), field))
            }
            GPlace::Element {
                obj,
                field,
                index,
                capacity,
            } => {
                let idx = self.eval(frame, s, index, loc);
                let obj = frame.object(obj);
                match self.ssa.pool.as_int(idx) {
                    Some(j) if j >= 0 && j < *capacity as i64 => {
                        ScalarPlace::Base(element_name(&obj, field, j as u32))
                    }
                    Some(_) => ScalarPlace::OutOfRange,
                    None => ScalarPlace::Symbolic {
                        obj,
                        field: field.clone(),
                        idx,
                        cap: *capacity,
                    },
                }
            }
        }
    }

    fn read(
        &mut self,
        frame: &Frame<'a>,
        s: &mut State,
        place: &GPlace,
        loc: &SourceLocation,
    ) -> TermId {
        match self.scalar_base(frame, s, place, loc) {
            ScalarPlace::Base(base) => self.read_base(s, &base),
            ScalarPlace::OutOfRange => {
                // Out of range: the preceding bounds claim fails on this
                // path, so any value will do.
                let GPlace::Element { obj, field, .. } = place else {
                    unreachable!()
                };
                let base = element_name(&frame.object(obj), field, 0);
                self.read_base(s, &base)
            }
            ScalarPlace::Symbolic {
                obj,
                field,
                idx,
                cap,
            } => {
                let last = element_name(&obj, &field, cap - 1);
                let mut acc = self.read_base(s, &last);
                for j in (0..cap - 1).rev() {
                    let e = self.read_base(s, &element_name(&obj, &field, j));
                    let k = self.ssa.pool.bv_const(self.width, j as i64);
                    let c = self.ssa.pool.eq(idx, k);
                    acc = self.ssa.pool.ite(c, e, acc);
                }
                acc
            }
        }
    }

    fn write(
        &mut self,
        frame: &Frame<'a>,
        s: &mut State,
        place: &GPlace,
        value: TermId,
        kind: EquationKind,
        loc: &SourceLocation,
    ) {
        match self.scalar_base(frame, s, place, loc) {
            ScalarPlace::Base(base) => self.assign_base(s, base, value, kind, loc),
            ScalarPlace::OutOfRange => {}
            ScalarPlace::Symbolic {
                obj,
                field,
                idx,
                cap,
            } => {
                for j in 0..cap {
                    let name = element_name(&obj, &field, j);
                    let old = self.read_base(s, &name);
                    let k = self.ssa.pool.bv_const(self.width, j as i64);
                    let c = self.ssa.pool.eq(idx, k);
                    let new = self.ssa.pool.ite(c, value, old);
                    if new != old {
                        self.assign_base(s, name, new, kind, loc);
                    }
                }
            }
        }
    }

    fn new_input(&mut self, s: &State, base: Arc<str>, sort: Sort, loc: &SourceLocation) -> TermId {
        self.sorts.insert(base.clone(), sort);
        let var = self.fresh(base);
        let term = self.ssa.pool.var(var.clone(), sort);
        let seq = self.next_seq();
        self.ssa.inputs.push(Input {
            var,
            term,
            guard: s.guard.term,
            loc: loc.clone(),
            seq,
        });
        term
    }

    fn assign_nondet(
        &mut self,
        frame: &Frame<'a>,
        s: &mut State,
        lhs: &GPlace,
        sort: Sort,
        loc: &SourceLocation,
    ) {
        match self.scalar_base(frame, s, lhs, loc) {
            ScalarPlace::Base(base) => {
                let t = self.new_input(s, base.clone(), sort, loc);
                s.values.insert(base, t);
            }
            _ => {
                let t = self.fresh_nondet(frame, s, sort, loc);
                self.write(frame, s, lhs, t, EquationKind::Assign, loc);
            }
        }
    }

    fn fresh_nondet(
        &mut self,
        frame: &Frame<'a>,
        s: &State,
        sort: Sort,
        loc: &SourceLocation,
    ) -> TermId {
        self.nondet_counter += 1;
        let base = frame.local(&format!("$nondet{}", self.nondet_counter));
        self.new_input(s, base, sort, loc)
    }

    fn eval(
        &mut self,
        frame: &Frame<'a>,
        s: &mut State,
        e: &GExpr,
        loc: &SourceLocation,
    ) -> TermId {
        match e {
            GExpr::Int(v) => self.ssa.pool.bv_const(self.width, *v),
            GExpr::Bool(b) => self.ssa.pool.bool_const(*b),
            GExpr::Load(p) => self.read(frame, s, p, loc),
            GExpr::NondetInt => self.fresh_nondet(frame, s, Sort::Bv(self.width), loc),
            GExpr::NondetBool => self.fresh_nondet(frame, s, Sort::Bool, loc),
            GExpr::Unary(op, a) => {
                let a = self.eval(frame, s, a, loc);
                match op {
                    UnaryOp::Not => self.ssa.pool.not(a),
                    UnaryOp::Neg => self.ssa.pool.bv_neg(a),
                }
            }
            GExpr::Binary(op, a, b) => {
                let a = self.eval(frame, s, a, loc);
                let b = self.eval(frame, s, b, loc);
                let p = &mut self.ssa.pool;
                match op {
                    BinaryOp::Add => p.bv_add(a, b),
                    BinaryOp::Sub => p.bv_sub(a, b),
                    BinaryOp::Mul => p.bv_mul(a, b),
                    BinaryOp::Div => p.bv_sdiv(a, b),
                    BinaryOp::Rem => p.bv_srem(a, b),
                    BinaryOp::Lt => p.bv_slt(a, b),
                    BinaryOp::Le => p.bv_sle(a, b),
                    BinaryOp::Gt => p.bv_slt(b, a),
                    BinaryOp::Ge => p.bv_sle(b, a),
                    BinaryOp::Eq => p.eq(a, b),
                    BinaryOp::Ne => {
                        let e = p.eq(a, b);
                        p.not(e)
                    }
                    BinaryOp::And => p.and(a, b),
                    BinaryOp::Or => p.or(a, b),
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn call(
        &mut self,
        frame: &Frame<'a>,
        pc: usize,
        mut state: State,
        result: Option<&GPlace>,
        callee: &str,
        args: &[CallArg],
        loc: &SourceLocation,
    ) -> Result<Vec<(usize, State)>, SymexError> {
        let program = self.program;
        let func = program
            .function(callee)
            .ok_or_else(|| SymexError::UnknownFunction(callee.to_string()))?;
        let depth = self.stack.iter().filter(|n| n.as_str() == callee).count();
        if depth >= self.config.unwind as usize {
            if self.config.unwinding_assertions {
                let f = self.ssa.pool.ff();
                self.claim(&state, f, RECURSION_MESSAGE, PropertyClass::Unwinding, loc);
            }
            return Ok(Vec::new());
        }

        let n = self.instances.entry(callee.to_string()).or_insert(0);
        *n += 1;
        let prefix: Arc<str> = Arc::from(format!("{callee}@{n}"));

        // Arguments are evaluated in the caller's frame.
        let mut this = None;
        let mut bindings = Vec::new();
        let mut rendered = Vec::new();
        for (param, arg) in func.params.iter().zip(args) {
            match arg {
                CallArg::Object(obj) => {
                    let name = frame.object(obj);
                    rendered.push(CallArgument::Object(super::ssa::display_name(&name)));
                    if param.name == "this" {
                        this = Some(name);
                    }
                }
                CallArg::Value(e) => {
                    let v = self.eval(frame, &mut state, e, loc);
                    rendered.push(CallArgument::Value(v));
                    bindings.push((param.name.clone(), v));
                }
                CallArg::Str(text) => rendered.push(CallArgument::Str(text.clone())),
            }
        }
        let seq = self.next_seq();
        self.ssa.calls.push(CallEvent {
            guard: state.guard.term,
            callee: callee.to_string(),
            args: rendered,
            loc: loc.clone(),
            seq,
        });
        let callee_frame = Frame { func, prefix, this };
        for (name, v) in bindings {
            let base = callee_frame.local(&name);
            self.assign_base(&mut state, base, v, EquationKind::Param, loc);
        }

        let saved_counts = std::mem::take(&mut state.loop_counts);
        let saved_check = state.check_loop.take();
        self.stack.push(callee.to_string());
        let out = self.walk(&callee_frame, state);
        self.stack.pop();
        let Some(mut after) = out? else {
            return Ok(Vec::new());
        };
        after.loop_counts = saved_counts;
        after.check_loop = saved_check;
        if let Some(place) = result {
            let slot = callee_frame.local(RETURN_SLOT);
            let v = self.read_base(&after, &slot);
            self.write(frame, &mut after, place, v, EquationKind::Assign, loc);
        }
        Ok(vec![(pc + 1, after)])
    }
}
