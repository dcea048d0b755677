//! Bit-vector terms, encoding of SSA systems, bit-blasting, SAT solving and
//! counterexample extraction.

pub mod bitblast;
pub mod encode;
pub mod model;
pub mod sat;
pub mod smtlib;
pub mod term;

pub use bitblast::{bitblast, Cnf};
pub use encode::{encode, EncodeError};
pub use model::{
    eval_model, Counterexample, CounterexampleStep, InputValue, ModelError, StepDetail,
    ViolatedProperty,
};
pub use sat::{
    sat_solve, sat_solve_limited, Resource, SatStatus, SolveError, SolveLimits, SolveResult,
    SolveStats,
};
pub use smtlib::emit_smtlib;
pub use term::{Node, Sort, SsaVariable, TermId, TermPool, Value};
