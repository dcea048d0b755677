//! Counterexample reconstruction from a satisfying assignment.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::bv;
use crate::goto::PropertyClass;
use crate::loc::SourceLocation;
use crate::symex::ssa::display_name;
use crate::symex::{CallArgument, EquationKind, SsaSystem};

use super::bitblast::Cnf;
use super::sat::SolveResult;
use super::term::{Node, Sort, SsaVariable, TermId, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("the solver result is not satisfiable")]
    NotSat,
    #[error("the model violates no claim")]
    NoViolatedClaim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepDetail {
    Assignment { name: String, value: String },
    Input { name: String, value: String },
    Call { callee: String, args: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleStep {
    pub index: usize,
    pub loc: SourceLocation,
    #[serde(flatten)]
    pub detail: StepDetail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolatedProperty {
    pub message: String,
    pub loc: SourceLocation,
    pub class: PropertyClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputValue {
    pub name: String,
    pub value: i64,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub steps: Vec<CounterexampleStep>,
    pub violated: ViolatedProperty,
    /// Nondeterministic choices on the violating path, in execution order.
    pub inputs: Vec<InputValue>,
}

impl Counterexample {
    /// The input values in the order a concrete run consumes them.
    pub fn replay_values(&self) -> Vec<i64> {
        self.inputs.iter().map(|i| i.value).collect()
    }
}

fn render(v: Value) -> String {
    v.to_string()
}

/// Reads variable values from the CNF model.
fn variable_values(ssa: &SsaSystem, cnf: &Cnf, model: &[bool]) -> HashMap<SsaVariable, Value> {
    let mut widths: HashMap<TermId, u32> = HashMap::new();
    for &(t, bit) in cnf.var_map.keys() {
        let w = widths.entry(t).or_insert(0);
        *w = (*w).max(bit + 1);
    }
    let mut out = HashMap::new();
    for (t, w) in widths {
        let Node::Var(v, sort) = ssa.pool.node(t) else {
            continue;
        };
        let mut bits = 0u64;
        for i in 0..w {
            let cv = cnf.var_map[&(t, i)] as usize;
            if model.get(cv).copied().unwrap_or(false) {
                bits |= 1 << i;
            }
        }
        let value = match sort {
            Sort::Bool => Value::Bool(bits & 1 == 1),
            Sort::Bv(w) => Value::Int(bv::from_bits(bits, *w)),
        };
        out.insert(v.clone(), value);
    }
    out
}

/// Builds the counterexample for a satisfiable verification condition.
///
/// The reported property is the first claim, in execution order, whose
/// guard holds and whose condition fails. Steps list the assignments,
/// nondeterministic inputs and calls on the violating path up to it.
pub fn eval_model(
    result: &SolveResult,
    ssa: &SsaSystem,
    cnf: &Cnf,
) -> Result<Counterexample, ModelError> {
    let model = result.model().ok_or(ModelError::NotSat)?;
    let values = variable_values(ssa, cnf, model);

    let mut roots: Vec<TermId> = Vec::new();
    for e in &ssa.equations {
        roots.extend([e.guard, e.lhs_term, e.rhs]);
    }
    for c in &ssa.claims {
        roots.extend([c.guard, c.condition]);
    }
    for i in &ssa.inputs {
        roots.extend([i.guard, i.term]);
    }
    for c in &ssa.calls {
        roots.push(c.guard);
        roots.extend(c.args.iter().filter_map(|a| match a {
            CallArgument::Value(t) => Some(*t),
            _ => None,
        }));
    }
    let eval = ssa.pool.evaluate(&roots, |v| values.get(v).copied());
    let holds = |t: TermId| eval[&t].as_bool();

    let claim = ssa
        .claims
        .iter()
        .filter(|c| holds(c.guard) && !holds(c.condition))
        .min_by_key(|c| c.seq)
        .ok_or(ModelError::NoViolatedClaim)?;

    let mut events: Vec<(u64, SourceLocation, StepDetail)> = Vec::new();
    let mut inputs: Vec<(u64, InputValue)> = Vec::new();
    for e in &ssa.equations {
        if e.seq > claim.seq
            || e.kind != EquationKind::Assign
            || e.lhs.base.contains('$')
            || !holds(e.guard)
        {
            continue;
        }
        events.push((
            e.seq,
            e.loc.clone(),
            StepDetail::Assignment {
                name: display_name(&e.lhs.base),
                value: render(eval[&e.lhs_term]),
            },
        ));
    }
    for i in &ssa.inputs {
        if i.seq > claim.seq || !holds(i.guard) {
            continue;
        }
        let v = eval[&i.term];
        let name = display_name(&i.var.base);
        if !i.var.base.contains('$') {
            events.push((
                i.seq,
                i.loc.clone(),
                StepDetail::Input {
                    name: name.clone(),
                    value: render(v),
                },
            ));
        }
        inputs.push((
            i.seq,
            InputValue {
                name,
                value: v.as_int(),
                loc: i.loc.clone(),
            },
        ));
    }
    for c in &ssa.calls {
        if c.seq > claim.seq || !holds(c.guard) {
            continue;
        }
        let args = c
            .args
            .iter()
            .map(|a| match a {
                CallArgument::Value(t) => render(eval[t]),
                CallArgument::Object(o) => format!("&{o}"),
                CallArgument::Str(s) => format!("{s:?}"),
            })
            .collect();
        events.push((
            c.seq,
            c.loc.clone(),
            StepDetail::Call {
                callee: c.callee.clone(),
                args,
            },
        ));
    }
    events.sort_by_key(|e| e.0);
    inputs.sort_by_key(|i| i.0);
    let steps = events
        .into_iter()
        .enumerate()
        .map(|(i, (_, loc, detail))| CounterexampleStep {
            index: i + 1,
            loc,
            detail,
        })
        .collect();
    Ok(Counterexample {
        steps,
        violated: ViolatedProperty {
            message: claim.message.clone(),
            loc: claim.loc.clone(),
            class: claim.class,
        },
        inputs: inputs.into_iter().map(|(_, i)| i).collect(),
    })
}
