//! Concrete execution of GOTO programs.
//!
//! Nondeterministic choices are read from a caller-supplied list. The
//! bounded variant applies the same loop and recursion bounds as symbolic
//! execution, so a counterexample's inputs replay to the same claim.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::bv;
use crate::frontend::typed::{BinaryOp, ObjRef, SemType, UnaryOp};
use crate::goto::{
    CallArg, GExpr, GPlace, GotoFunction, GotoProgram, InstrKind, LoopRole, PropertyClass,
    RECURSION_MESSAGE, UNWINDING_MESSAGE,
};
use crate::loc::SourceLocation;

use super::engine::RETURN_SLOT;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Assignment,
    AssertionCheck,
    Assume,
    Call,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub loc: SourceLocation,
    pub kind: StepKind,
    pub variable: Option<String>,
    pub value: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Completed,
    AssertionViolated {
        message: String,
        loc: SourceLocation,
        class: PropertyClass,
    },
    /// An assumption was false; the execution is not a real one.
    AssumptionFailed {
        loc: SourceLocation,
    },
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
    /// Values of the entry function's locals when execution stopped, keyed
    /// by their unqualified names.
    pub final_store: BTreeMap<String, i64>,
    pub nondets_used: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("{loc}: ran out of nondeterministic values")]
    NondetUnderflow { loc: SourceLocation },
    #[error("call to unknown function `{0}`")]
    UnknownFunction(String),
}

/// Loop and recursion bounds mirrored from symbolic execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub unwind: u32,
    pub unwinding_assertions: bool,
}

/// Runs `p` without any loop bound.
pub fn concrete_interpret(
    p: &GotoProgram,
    nondet_values: &[i64],
    step_limit: u64,
) -> Result<Trace, InterpError> {
    concrete_interpret_bounded(p, nondet_values, step_limit, None)
}

/// Runs `p`, treating loops and recursion as symbolic execution does when
/// `bounds` is given.
pub fn concrete_interpret_bounded(
    p: &GotoProgram,
    nondet_values: &[i64],
    step_limit: u64,
    bounds: Option<Bounds>,
) -> Result<Trace, InterpError> {
    let mut m = Machine {
        program: p,
        width: p.int_width,
        store: HashMap::new(),
        nondets: nondet_values,
        next_nondet: 0,
        steps: Vec::new(),
        instances: HashMap::new(),
        bounds,
    };
    let verdict = m.run(step_limit)?;
    let final_store = m
        .store
        .iter()
        .filter_map(|(k, v)| {
            k.strip_prefix(&format!("{}::", p.entry))
                .map(|rest| (rest.to_string(), *v))
        })
        .collect();
    Ok(Trace {
        steps: m.steps,
        verdict,
        final_store,
        nondets_used: m.next_nondet,
    })
}

struct Frame<'p> {
    func: &'p GotoFunction,
    prefix: String,
    this: Option<String>,
    pc: usize,
    /// Where the caller stores the result.
    result: Option<GPlace>,
    loop_counts: HashMap<u32, u32>,
    check_loop: Option<u32>,
}

impl Frame<'_> {
    fn local(&self, name: &str) -> String {
        format!("{}::{}", self.prefix, name)
    }

    fn object(&self, obj: &ObjRef) -> String {
        match obj {
            ObjRef::This => self
                .this
                .clone()
                .unwrap_or_else(|| format!("{}::this", self.prefix)),
            ObjRef::Local(n) => self.local(n),
        }
    }
}

enum Flow {
    Next,
    Jump(usize),
    Stop(Verdict),
}

struct Machine<'p, 'n> {
    program: &'p GotoProgram,
    width: u32,
    store: HashMap<String, i64>,
    nondets: &'n [i64],
    next_nondet: usize,
    steps: Vec<TraceStep>,
    instances: HashMap<String, u32>,
    bounds: Option<Bounds>,
}

impl<'p> Machine<'p, '_> {
    fn run(&mut self, step_limit: u64) -> Result<Verdict, InterpError> {
        let entry = self
            .program
            .function(&self.program.entry)
            .ok_or_else(|| InterpError::UnknownFunction(self.program.entry.clone()))?;
        let mut stack = vec![Frame {
            func: entry,
            prefix: entry.name.clone(),
            this: None,
            pc: 0,
            result: None,
            loop_counts: HashMap::new(),
            check_loop: None,
        }];
        let mut executed = 0u64;
        loop {
            if executed >= step_limit {
                return Ok(Verdict::StepLimit);
            }
            executed += 1;
            let frame = stack.last_mut().expect("nonempty call stack");
            let func = frame.func;
            let Some(ins) = func.body.get(frame.pc) else {
                return Ok(Verdict::Completed);
            };
            let loc = &ins.loc;
            let flow = match &ins.kind {
                InstrKind::Decl { var, ty } => {
                    let base = frame.local(var);
                    self.declare(&base, ty);
                    Flow::Next
                }
                InstrKind::Assign { lhs, rhs } => {
                    let v = self.eval(frame, rhs, loc)?;
                    self.write(frame, lhs, v, loc)?;
                    Flow::Next
                }
                InstrKind::Assume(c) => {
                    let v = self.eval(frame, c, loc)?;
                    self.record(loc, StepKind::Assume, None, Some(v));
                    if v == 0 {
                        Flow::Stop(Verdict::AssumptionFailed { loc: loc.clone() })
                    } else {
                        Flow::Next
                    }
                }
                InstrKind::Assert {
                    cond,
                    message,
                    class,
                } => {
                    let v = self.eval(frame, cond, loc)?;
                    self.record(loc, StepKind::AssertionCheck, None, Some(v));
                    if v == 0 {
                        Flow::Stop(Verdict::AssertionViolated {
                            message: message.clone(),
                            loc: loc.clone(),
                            class: *class,
                        })
                    } else {
                        Flow::Next
                    }
                }
                InstrKind::Goto {
                    target,
                    guard,
                    loop_tag,
                } => {
                    let g = match guard {
                        Some(e) => self.eval(frame, e, loc)? != 0,
                        None => true,
                    };
                    match (loop_tag, self.bounds) {
                        (Some(tag), Some(b)) if tag.role == LoopRole::BackEdge => {
                            let c = frame.loop_counts.entry(tag.loop_id).or_insert(0);
                            *c += 1;
                            if *c >= b.unwind {
                                frame.check_loop = Some(tag.loop_id);
                            }
                            if g {
                                Flow::Jump(*target)
                            } else {
                                Flow::Next
                            }
                        }
                        (Some(tag), Some(b)) if frame.check_loop == Some(tag.loop_id) => {
                            frame.check_loop = None;
                            frame.loop_counts.remove(&tag.loop_id);
                            if g {
                                Flow::Jump(*target)
                            } else if b.unwinding_assertions {
                                Flow::Stop(Verdict::AssertionViolated {
                                    message: UNWINDING_MESSAGE.to_string(),
                                    loc: loc.clone(),
                                    class: PropertyClass::Unwinding,
                                })
                            } else {
                                Flow::Stop(Verdict::AssumptionFailed { loc: loc.clone() })
                            }
                        }
                        (Some(tag), _) if g => {
                            frame.loop_counts.remove(&tag.loop_id);
                            Flow::Jump(*target)
                        }
                        _ if g => Flow::Jump(*target),
                        _ => Flow::Next,
                    }
                }
                InstrKind::Call {
                    result,
                    callee,
                    args,
                } => {
                    let func = self
                        .program
                        .function(callee)
                        .ok_or_else(|| InterpError::UnknownFunction(callee.clone()))?;
                    if let Some(b) = self.bounds {
                        let active = stack.iter().filter(|f| f.func.name == *callee).count();
                        if active >= b.unwind as usize {
                            let verdict = if b.unwinding_assertions {
                                Verdict::AssertionViolated {
                                    message: RECURSION_MESSAGE.to_string(),
                                    loc: loc.clone(),
                                    class: PropertyClass::Unwinding,
                                }
                            } else {
                                Verdict::AssumptionFailed { loc: loc.clone() }
                            };
                            return Ok(verdict);
                        }
                    }
                    let frame = stack.last().expect("nonempty call stack");
                    let n = self.instances.entry(callee.clone()).or_insert(0);
                    *n += 1;
                    let prefix = format!("{callee}@{n}");
                    let mut this = None;
                    let mut bindings = Vec::new();
                    for (param, arg) in func.params.iter().zip(args) {
                        match arg {
                            CallArg::Object(obj) => {
                                if param.name == "this" {
                                    this = Some(frame.object(obj));
                                }
                            }
                            CallArg::Value(e) => {
                                let v = self.eval(frame, e, loc)?;
                                bindings.push((format!("{prefix}::{}", param.name), v));
                            }
                            CallArg::Str(_) => {}
                        }
                    }
                    self.record(loc, StepKind::Call, Some(callee.clone()), None);
                    self.store.extend(bindings);
                    stack.push(Frame {
                        func,
                        prefix,
                        this,
                        pc: 0,
                        result: result.clone(),
                        loop_counts: HashMap::new(),
                        check_loop: None,
                    });
                    continue;
                }
                InstrKind::Return(value) => {
                    if let Some(e) = value {
                        let v = self.eval(frame, e, loc)?;
                        let slot = frame.local(RETURN_SLOT);
                        self.store.insert(slot, v);
                    }
                    Flow::Jump(frame.func.body.len() - 1)
                }
                InstrKind::Skip => Flow::Next,
                InstrKind::EndFunction => {
                    let done = stack.pop().expect("nonempty call stack");
                    let Some(caller) = stack.last_mut() else {
                        return Ok(Verdict::Completed);
                    };
                    if let Some(place) = &done.result {
                        let v = self
                            .store
                            .get(&done.local(RETURN_SLOT))
                            .copied()
                            .unwrap_or(0);
                        let loc = caller.func.body[caller.pc].loc.clone();
                        self.write(caller, place, v, &loc)?;
                    }
                    caller.pc += 1;
                    continue;
                }
            };
            let frame = stack.last_mut().expect("nonempty call stack");
            match flow {
                Flow::Next => frame.pc += 1,
                Flow::Jump(t) => frame.pc = t,
                Flow::Stop(v) => return Ok(v),
            }
        }
    }

    fn record(
        &mut self,
        loc: &SourceLocation,
        kind: StepKind,
        variable: Option<String>,
        value: Option<i64>,
    ) {
        self.steps.push(TraceStep {
            loc: loc.clone(),
            kind,
            variable,
            value,
        });
    }

    fn declare(&mut self, base: &str, ty: &SemType) {
        match ty {
            SemType::Class(c) => {
                for f in self.program.classes.get(c).into_iter().flatten() {
                    match &f.ty {
                        SemType::Array(_, cap) => {
                            for j in 0..*cap {
                                self.store.insert(format!("{base}.{}[{j}]", f.name), 0);
                            }
                        }
                        _ => {
                            self.store.insert(format!("{base}.{}", f.name), 0);
                        }
                    }
                }
            }
            _ => {
                self.store.insert(base.to_string(), 0);
            }
        }
    }

    fn next_nondet(&mut self, loc: &SourceLocation) -> Result<i64, InterpError> {
        let v = self
            .nondets
            .get(self.next_nondet)
            .copied()
            .ok_or_else(|| InterpError::NondetUnderflow { loc: loc.clone() })?;
        self.next_nondet += 1;
        Ok(v)
    }

    /// The store key a place denotes; `None` for an out-of-range element.
    fn key(
        &mut self,
        frame: &Frame<'_>,
        place: &GPlace,
        loc: &SourceLocation,
    ) -> Result<Option<String>, InterpError> {
        Ok(match place {
            GPlace::Local(n) => Some(frame.local(n)),
            GPlace::Field { obj, field } => Some(format!("{}.{field}", frame.object(obj))),
            GPlace::Element {
                obj,
                field,
                index,
                capacity,
            } => {
                let i = self.eval(frame, index, loc)?;
                (0..*capacity as i64)
                    .contains(&i)
                    .then(|| format!("{}.{field}[{i}]", frame.object(obj)))
            }
        })
    }

    fn write(
        &mut self,
        frame: &Frame<'_>,
        place: &GPlace,
        v: i64,
        loc: &SourceLocation,
    ) -> Result<(), InterpError> {
        if let Some(k) = self.key(frame, place, loc)? {
            self.record(loc, StepKind::Assignment, Some(k.clone()), Some(v));
            self.store.insert(k, v);
        }
        Ok(())
    }

    fn eval(
        &mut self,
        frame: &Frame<'_>,
        e: &GExpr,
        loc: &SourceLocation,
    ) -> Result<i64, InterpError> {
        let w = self.width;
        Ok(match e {
            GExpr::Int(v) => bv::wrap(*v, w),
            GExpr::Bool(b) => *b as i64,
            GExpr::Load(p) => match self.key(frame, p, loc)? {
                Some(k) => self.store.get(&k).copied().unwrap_or(0),
                None => 0,
            },
            GExpr::NondetInt => bv::wrap(self.next_nondet(loc)?, w),
            GExpr::NondetBool => (self.next_nondet(loc)? != 0) as i64,
            GExpr::Unary(op, a) => {
                let a = self.eval(frame, a, loc)?;
                match op {
                    UnaryOp::Not => (a == 0) as i64,
                    UnaryOp::Neg => bv::neg(a, w),
                }
            }
            GExpr::Binary(op, a, b) => {
                let a = self.eval(frame, a, loc)?;
                let b = self.eval(frame, b, loc)?;
                match op {
                    BinaryOp::Add => bv::add(a, b, w),
                    BinaryOp::Sub => bv::sub(a, b, w),
                    BinaryOp::Mul => bv::mul(a, b, w),
                    BinaryOp::Div => bv::sdiv(a, b, w),
                    BinaryOp::Rem => bv::srem(a, b, w),
                    BinaryOp::Lt => (a < b) as i64,
                    BinaryOp::Le => (a <= b) as i64,
                    BinaryOp::Gt => (a > b) as i64,
                    BinaryOp::Ge => (a >= b) as i64,
                    BinaryOp::Eq => (a == b) as i64,
                    BinaryOp::Ne => (a != b) as i64,
                    BinaryOp::And => (a != 0 && b != 0) as i64,
                    BinaryOp::Or => (a != 0 || b != 0) as i64,
                }
            }
        })
    }
}
