//! Bounded model checking for MiniQt programs.
//!
//! A program is parsed and type-checked ([`frontend`]), lowered to guarded
//! jumps ([`goto`]), unrolled into guarded SSA ([`symex`]) and checked with a
//! bit-vector encoding and a CDCL solver ([`smt`]). Library classes are
//! replaced by operational models ([`opmodel`]). [`harness`] ties the stages
//! together and runs benchmark suites.
//!
//! ```
//! use miniqt_bmc::config::VerifierConfig;
//! use miniqt_bmc::harness::{verify_source, Verdict};
//!
//! let r = verify_source(
//!     "int main() { int x = nondet_int(); assert(x != 3); return 0; }",
//!     "t.cpp",
//!     &VerifierConfig::default(),
//! );
//! assert_eq!(r.verdict.counterexample().unwrap().replay_values(), vec![3]);
//! assert_ne!(r.verdict, Verdict::Successful);
//! ```

pub mod bv;
pub mod config;
pub mod frontend;
pub mod goto;
pub mod harness;
pub mod loc;
pub mod opmodel;
pub mod smt;
pub mod symex;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/language.md")]
    pub mod language {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub mod pipeline {}
    #[doc = include_str!("../../../book/src/unwinding.md")]
    pub mod unwinding {}
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    pub mod counterexamples {}
    #[doc = include_str!("../../../book/src/suite.md")]
    pub mod suite {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
