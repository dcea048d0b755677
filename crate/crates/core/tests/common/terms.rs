//! Random bit-vector terms and a brute-force evaluator written against the
//! textbook bit-vector semantics.

use std::collections::HashMap;

use miniqt_bmc::smt::{Node, Sort, SsaVariable, TermId, TermPool};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TERM_WIDTH: u32 = 3;

pub struct TermVars {
    pub x: TermId,
    pub y: TermId,
    pub b: TermId,
}

pub fn vars(pool: &mut TermPool) -> TermVars {
    TermVars {
        x: pool.var(SsaVariable::new("x", 0), Sort::Bv(TERM_WIDTH)),
        y: pool.var(SsaVariable::new("y", 0), Sort::Bv(TERM_WIDTH)),
        b: pool.var(SsaVariable::new("b", 0), Sort::Bool),
    }
}

fn random_bv(pool: &mut TermPool, v: &TermVars, rng: &mut ChaCha8Rng, depth: u32) -> TermId {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..3) {
            0 => v.x,
            1 => v.y,
            _ => pool.bv_const(TERM_WIDTH, rng.gen_range(-4..4)),
        };
    }
    let a = random_bv(pool, v, rng, depth - 1);
    let b = random_bv(pool, v, rng, depth - 1);
    match rng.gen_range(0..8) {
        0 => pool.bv_add(a, b),
        1 => pool.bv_sub(a, b),
        2 => pool.bv_mul(a, b),
        3 => pool.bv_neg(a),
        4 => pool.bv_sdiv(a, b),
        5 => pool.bv_srem(a, b),
        _ => {
            let c = random_bool(pool, v, rng, depth - 1);
            pool.ite(c, a, b)
        }
    }
}

pub fn random_bool(pool: &mut TermPool, v: &TermVars, rng: &mut ChaCha8Rng, depth: u32) -> TermId {
    if depth == 0 || rng.gen_ratio(1, 5) {
        return if rng.gen_bool(0.7) {
            v.b
        } else {
            pool.bool_const(rng.gen_bool(0.5))
        };
    }
    match rng.gen_range(0..9) {
        0 => {
            let a = random_bool(pool, v, rng, depth - 1);
            pool.not(a)
        }
        1 => {
            let (a, b) = (
                random_bool(pool, v, rng, depth - 1),
                random_bool(pool, v, rng, depth - 1),
            );
            pool.and(a, b)
        }
        2 => {
            let (a, b) = (
                random_bool(pool, v, rng, depth - 1),
                random_bool(pool, v, rng, depth - 1),
            );
            pool.or(a, b)
        }
        3 => {
            let (a, b) = (
                random_bool(pool, v, rng, depth - 1),
                random_bool(pool, v, rng, depth - 1),
            );
            pool.implies(a, b)
        }
        4 | 5 => {
            let (a, b) = (
                random_bv(pool, v, rng, depth - 1),
                random_bv(pool, v, rng, depth - 1),
            );
            pool.eq(a, b)
        }
        6 => {
            let (a, b) = (
                random_bv(pool, v, rng, depth - 1),
                random_bv(pool, v, rng, depth - 1),
            );
            pool.bv_slt(a, b)
        }
        7 => {
            let (a, b) = (
                random_bv(pool, v, rng, depth - 1),
                random_bv(pool, v, rng, depth - 1),
            );
            pool.bv_sle(a, b)
        }
        _ => {
            let (a, b) = (
                random_bool(pool, v, rng, depth - 1),
                random_bool(pool, v, rng, depth - 1),
            );
            pool.eq(a, b)
        }
    }
}

fn wrap(v: i64, w: u32) -> i64 {
    let m = 1i64 << w;
    let half = m / 2;
    (v + half).rem_euclid(m) - half
}

/// Term value: Booleans as 0/1.
pub fn brute_eval(pool: &TermPool, t: TermId, env: &HashMap<String, i64>) -> i64 {
    let w = |t| match pool.sort(t) {
        Sort::Bv(w) => w,
        Sort::Bool => 1,
    };
    let e = |t| brute_eval(pool, t, env);
    match pool.node(t) {
        Node::BoolConst(b) => *b as i64,
        Node::BvConst { width, bits } => wrap(*bits as i64, *width),
        Node::Var(v, _) => *env.get(v.base.as_ref()).unwrap_or(&0),
        Node::Not(a) => 1 - e(*a),
        Node::And(a, b) => e(*a) & e(*b),
        Node::Or(a, b) => e(*a) | e(*b),
        Node::Implies(a, b) => ((e(*a) == 0) || (e(*b) == 1)) as i64,
        Node::Eq(a, b) => (e(*a) == e(*b)) as i64,
        Node::BvAdd(a, b) => wrap(e(*a) + e(*b), w(t)),
        Node::BvSub(a, b) => wrap(e(*a) - e(*b), w(t)),
        Node::BvMul(a, b) => wrap(e(*a) * e(*b), w(t)),
        Node::BvNeg(a) => wrap(-e(*a), w(t)),
        Node::BvSdiv(a, b) => {
            let (x, y) = (e(*a), e(*b));
            match y {
                0 if x >= 0 => -1,
                0 => 1,
                _ => wrap(x / y, w(t)),
            }
        }
        Node::BvSrem(a, b) => {
            let (x, y) = (e(*a), e(*b));
            if y == 0 {
                x
            } else {
                wrap(x % y, w(t))
            }
        }
        Node::BvSlt(a, b) => (e(*a) < e(*b)) as i64,
        Node::BvSle(a, b) => (e(*a) <= e(*b)) as i64,
        Node::Ite(c, a, b) => {
            if e(*c) == 1 {
                e(*a)
            } else {
                e(*b)
            }
        }
    }
}

/// Every assignment of `x`, `y` and `b`.
pub fn assignments() -> impl Iterator<Item = HashMap<String, i64>> {
    let half = 1i64 << (TERM_WIDTH - 1);
    (-half..half).flat_map(move |x| {
        (-half..half).flat_map(move |y| {
            (0..2).map(move |b| {
                HashMap::from([
                    ("x".to_string(), x),
                    ("y".to_string(), y),
                    ("b".to_string(), b),
                ])
            })
        })
    })
}
