//! Verification condition: the equations conjoined with the negated claims.

use thiserror::Error;

use crate::symex::SsaSystem;

use super::term::{Sort, TermId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("ill-sorted SSA: {0}")]
    Sort(String),
}

/// Builds `C ∧ ¬P`, where `C` conjoins `guard ⇒ lhs = rhs` over the
/// equations and `P` conjoins `guard ⇒ condition` over the claims. The
/// result is satisfiable iff some claim can be violated.
pub fn encode(ssa: &mut SsaSystem) -> Result<TermId, EncodeError> {
    check_sorts(ssa)?;
    let pool = &mut ssa.pool;
    let mut c = pool.tt();
    for e in &ssa.equations {
        let eq = pool.eq(e.lhs_term, e.rhs);
        let imp = pool.implies(e.guard, eq);
        c = pool.and(c, imp);
    }
    let mut p = pool.tt();
    for cl in &ssa.claims {
        let imp = pool.implies(cl.guard, cl.condition);
        p = pool.and(p, imp);
    }
    let np = pool.not(p);
    Ok(pool.and(c, np))
}

fn check_sorts(ssa: &SsaSystem) -> Result<(), EncodeError> {
    let pool = &ssa.pool;
    for e in &ssa.equations {
        if pool.sort(e.guard) != Sort::Bool {
            return Err(EncodeError::Sort(format!(
                "guard of {} is not Boolean",
                e.lhs
            )));
        }
        if pool.sort(e.lhs_term) != pool.sort(e.rhs) {
            return Err(EncodeError::Sort(format!(
                "{} has sort {} but is assigned a term of sort {}",
                e.lhs,
                pool.sort(e.lhs_term),
                pool.sort(e.rhs)
            )));
        }
    }
    for c in &ssa.claims {
        if pool.sort(c.guard) != Sort::Bool || pool.sort(c.condition) != Sort::Bool {
            return Err(EncodeError::Sort(format!(
                "claim `{}` is not Boolean",
                c.message
            )));
        }
    }
    Ok(())
}
