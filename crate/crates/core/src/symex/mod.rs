//! Symbolic execution of GOTO programs into guarded SSA, and the concrete
//! interpreter used to cross-check it.

mod engine;
pub mod interp;
pub mod ssa;

pub use engine::{symex, symex_until, SymexError, RETURN_SLOT};
pub use interp::{
    concrete_interpret, concrete_interpret_bounded, Bounds, InterpError, StepKind, Trace,
    TraceStep, Verdict,
};
pub use ssa::{CallArgument, CallEvent, Claim, Equation, EquationKind, Input, SsaSystem};
