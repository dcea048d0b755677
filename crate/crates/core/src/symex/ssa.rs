//! The guarded single-assignment equation system produced by symbolic
//! execution.

use std::collections::HashSet;
use std::fmt;

use crate::goto::PropertyClass;
use crate::loc::SourceLocation;
use crate::smt::term::{SsaVariable, TermId, TermPool};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationKind {
    /// A source-level assignment.
    Assign,
    /// Merge of two branch versions at a join point.
    Phi,
    /// Zero initialization at a declaration.
    Decl,
    /// Binding of an argument to a parameter at a call.
    Param,
    /// Binding of a returned value.
    Return,
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub guard: TermId,
    pub lhs: SsaVariable,
    /// The `Var` term for `lhs`.
    pub lhs_term: TermId,
    pub rhs: TermId,
    pub kind: EquationKind,
    pub loc: SourceLocation,
    pub seq: u64,
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub guard: TermId,
    pub condition: TermId,
    pub message: String,
    pub class: PropertyClass,
    pub loc: SourceLocation,
    pub seq: u64,
}

/// A nondeterministic value. The variable has no defining equation.
#[derive(Clone, Debug)]
pub struct Input {
    pub var: SsaVariable,
    pub term: TermId,
    pub guard: TermId,
    pub loc: SourceLocation,
    pub seq: u64,
}

#[derive(Clone, Debug)]
pub enum CallArgument {
    Value(TermId),
    Object(String),
    Str(String),
}

/// An inlined call, kept for counterexample traces.
#[derive(Clone, Debug)]
pub struct CallEvent {
    pub guard: TermId,
    pub callee: String,
    pub args: Vec<CallArgument>,
    pub loc: SourceLocation,
    pub seq: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SsaSystem {
    pub pool: TermPool,
    pub equations: Vec<Equation>,
    pub claims: Vec<Claim>,
    pub inputs: Vec<Input>,
    pub calls: Vec<CallEvent>,
    pub int_width: u32,
}

/// Strips call-instance markers (`f@3::x` becomes `f::x`).
pub fn display_name(base: &str) -> String {
    let mut out = String::with_capacity(base.len());
    let mut skipping = false;
    for ch in base.chars() {
        if ch == '@' {
            skipping = true;
            continue;
        }
        if skipping && ch.is_ascii_digit() {
            continue;
        }
        skipping = false;
        out.push(ch);
    }
    out
}

impl SsaSystem {
    /// Variables defined more than once, or both defined and declared as an
    /// input. Empty for every system the symbolic executor produces.
    pub fn duplicate_definitions(&self) -> Vec<SsaVariable> {
        let mut seen = HashSet::new();
        let mut dups = Vec::new();
        let defs = self
            .equations
            .iter()
            .map(|e| &e.lhs)
            .chain(self.inputs.iter().map(|i| &i.var));
        for v in defs {
            if !seen.insert(v.clone()) {
                dups.push(v.clone());
            }
        }
        dups
    }

    pub fn approx_bytes(&self) -> usize {
        self.pool.approx_bytes()
            + self.equations.len() * std::mem::size_of::<Equation>()
            + self.claims.len() * std::mem::size_of::<Claim>()
    }
}

impl fmt::Display for SsaSystem {
    /// One line per input, equation and claim in execution order:
    /// `guard ⊢ name#ver := term` and `claim [class] guard ⊢ condition`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines: Vec<(u64, String)> = Vec::new();
        for i in &self.inputs {
            let text = format!(
                "{} ⊢ {} := nondet // {}",
                self.pool.display(i.guard),
                i.var,
                i.loc.file_line()
            );
            lines.push((i.seq, text));
        }
        for e in &self.equations {
            let text = format!(
                "{} ⊢ {} := {}",
                self.pool.display(e.guard),
                e.lhs,
                self.pool.display(e.rhs)
            );
            lines.push((e.seq, text));
        }
        for c in &self.claims {
            let text = format!(
                "claim [{}] {} ⊢ {} \"{}\" // {}",
                c.class,
                self.pool.display(c.guard),
                self.pool.display(c.condition),
                c.message,
                c.loc.file_line()
            );
            lines.push((c.seq, text));
        }
        lines.sort_by_key(|l| l.0);
        for (_, l) in lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}
