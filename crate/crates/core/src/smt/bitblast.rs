//! Tseitin bit-blasting of terms into CNF.

use std::collections::HashMap;
use std::fmt::Write;

use super::term::{Node, Sort, TermId, TermPool};

/// A propositional formula in conjunctive normal form. Literals are
/// DIMACS-style: `v` or `-v` for a variable `v` in `1..=num_vars`.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// CNF variable holding bit `i` (least significant first) of each
    /// `Var` term. Boolean variables use bit 0.
    pub var_map: HashMap<(TermId, u32), u32>,
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add_clause(&mut self, clause: Vec<i32>) {
        debug_assert!(clause
            .iter()
            .all(|l| *l != 0 && l.unsigned_abs() <= self.num_vars));
        self.clauses.push(clause);
    }

    /// Whether `model` (indexed by variable, entry 0 unused) satisfies
    /// every clause.
    pub fn evaluate(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                model
                    .get(l.unsigned_abs() as usize)
                    .copied()
                    .unwrap_or(false)
                    == (l > 0)
            })
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Bit-blasts the Boolean term `root` into an equisatisfiable CNF.
pub fn bitblast(pool: &TermPool, root: TermId) -> Cnf {
    assert_eq!(pool.sort(root), Sort::Bool, "bitblast needs a Boolean term");
    let mut b = Blaster::new(pool);
    let bits = b.blast(&[root]);
    let r = bits[&root][0];
    b.cnf.add_clause(vec![r]);
    b.cnf
}

/// Bit-blasts several terms into one CNF without asserting them, returning
/// the literals of each.
pub fn bitblast_terms(pool: &TermPool, roots: &[TermId]) -> (Cnf, Vec<Vec<i32>>) {
    let mut b = Blaster::new(pool);
    let bits = b.blast(roots);
    let lits = roots.iter().map(|r| bits[r].clone()).collect();
    (b.cnf, lits)
}

struct Blaster<'a> {
    pool: &'a TermPool,
    cnf: Cnf,
    t: i32,
    gates2: HashMap<(u8, i32, i32), i32>,
    gates3: HashMap<(u8, i32, i32, i32), i32>,
}

const AND: u8 = 0;
const XOR: u8 = 1;
const MUX: u8 = 2;
const MAJ: u8 = 3;

impl<'a> Blaster<'a> {
    fn new(pool: &'a TermPool) -> Self {
        let mut cnf = Cnf::new();
        let t = cnf.new_var();
        cnf.add_clause(vec![t]);
        Blaster {
            pool,
            cnf,
            t,
            gates2: HashMap::new(),
            gates3: HashMap::new(),
        }
    }

    fn f(&self) -> i32 {
        -self.t
    }

    fn blast(&mut self, roots: &[TermId]) -> HashMap<TermId, Vec<i32>> {
        let mut bits: HashMap<TermId, Vec<i32>> = HashMap::new();
        for id in self.pool.reachable(roots) {
            let v = self.blast_node(id, &bits);
            bits.insert(id, v);
        }
        bits
    }

    fn blast_node(&mut self, id: TermId, bits: &HashMap<TermId, Vec<i32>>) -> Vec<i32> {
        let get = |t: &TermId| bits[t].clone();
        let one = |t: &TermId| bits[t][0];
        match self.pool.node(id) {
            Node::BoolConst(b) => vec![if *b { self.t } else { self.f() }],
            Node::BvConst { width, bits } => (0..*width)
                .map(|i| if bits >> i & 1 == 1 { self.t } else { self.f() })
                .collect(),
            Node::Var(_, sort) => {
                let w = match sort {
                    Sort::Bool => 1,
                    Sort::Bv(w) => *w,
                };
                (0..w)
                    .map(|i| {
                        let v = self.cnf.new_var();
                        self.cnf.var_map.insert((id, i), v as u32);
                        v
                    })
                    .collect()
            }
            Node::Not(a) => vec![-one(a)],
            Node::And(a, b) => vec![self.and2(one(a), one(b))],
            Node::Or(a, b) => vec![self.or2(one(a), one(b))],
            Node::Implies(a, b) => vec![self.or2(-one(a), one(b))],
            Node::Eq(a, b) => {
                let (x, y) = (get(a), get(b));
                let mut acc = self.t;
                for (p, q) in x.iter().zip(&y) {
                    let same = -self.xor2(*p, *q);
                    acc = self.and2(acc, same);
                }
                vec![acc]
            }
            Node::Ite(c, a, b) => {
                let c = one(c);
                let (x, y) = (get(a), get(b));
                x.iter().zip(&y).map(|(p, q)| self.mux(c, *p, *q)).collect()
            }
            Node::BvAdd(a, b) => {
                let f = self.f();
                self.add(&get(a), &get(b), f).0
            }
            Node::BvSub(a, b) => self.sub(&get(a), &get(b)),
            Node::BvNeg(a) => self.neg(&get(a)),
            Node::BvMul(a, b) => self.mul(&get(a), &get(b)),
            Node::BvSdiv(a, b) => self.sdivrem(&get(a), &get(b)).0,
            Node::BvSrem(a, b) => self.sdivrem(&get(a), &get(b)).1,
            Node::BvSlt(a, b) => vec![self.slt(&get(a), &get(b))],
            Node::BvSle(a, b) => vec![-self.slt(&get(b), &get(a))],
        }
    }

    fn and2(&mut self, a: i32, b: i32) -> i32 {
        let (t, f) = (self.t, self.f());
        if a == f || b == f || a == -b {
            return f;
        }
        if a == t || a == b {
            return b;
        }
        if b == t {
            return a;
        }
        let key = (AND, a.min(b), a.max(b));
        if let Some(&g) = self.gates2.get(&key) {
            return g;
        }
        let v = self.cnf.new_var();
        self.cnf.add_clause(vec![-v, a]);
        self.cnf.add_clause(vec![-v, b]);
        self.cnf.add_clause(vec![v, -a, -b]);
        self.gates2.insert(key, v);
        v
    }

    fn or2(&mut self, a: i32, b: i32) -> i32 {
        -self.and2(-a, -b)
    }

    fn xor2(&mut self, a: i32, b: i32) -> i32 {
        let (t, f) = (self.t, self.f());
        if a == f {
            return b;
        }
        if b == f {
            return a;
        }
        if a == t {
            return -b;
        }
        if b == t {
            return -a;
        }
        if a == b {
            return f;
        }
        if a == -b {
            return t;
        }
        let flip = (a < 0) != (b < 0);
        let (a, b) = (a.abs(), b.abs());
        let key = (XOR, a.min(b), a.max(b));
        let g = match self.gates2.get(&key) {
            Some(&g) => g,
            None => {
                let v = self.cnf.new_var();
                self.cnf.add_clause(vec![-v, a, b]);
                self.cnf.add_clause(vec![-v, -a, -b]);
                self.cnf.add_clause(vec![v, -a, b]);
                self.cnf.add_clause(vec![v, a, -b]);
                self.gates2.insert(key, v);
                v
            }
        };
        if flip {
            -g
        } else {
            g
        }
    }

    /// `c ? a : b`.
    fn mux(&mut self, c: i32, a: i32, b: i32) -> i32 {
        let (t, f) = (self.t, self.f());
        if c == t || a == b {
            return a;
        }
        if c == f {
            return b;
        }
        if c < 0 {
            return self.mux(-c, b, a);
        }
        if a == t {
            return self.or2(c, b);
        }
        if a == f {
            return self.and2(-c, b);
        }
        if b == t {
            return self.or2(-c, a);
        }
        if b == f {
            return self.and2(c, a);
        }
        if a == -b {
            return -self.xor2(c, a);
        }
        let key = (MUX, c, a, b);
        if let Some(&g) = self.gates3.get(&key) {
            return g;
        }
        let v = self.cnf.new_var();
        self.cnf.add_clause(vec![-c, -a, v]);
        self.cnf.add_clause(vec![-c, a, -v]);
        self.cnf.add_clause(vec![c, -b, v]);
        self.cnf.add_clause(vec![c, b, -v]);
        // Redundant, but helps propagation when c is unknown.
        self.cnf.add_clause(vec![-a, -b, v]);
        self.cnf.add_clause(vec![a, b, -v]);
        self.gates3.insert(key, v);
        v
    }

    /// Majority of three, the carry of a full adder.
    fn maj(&mut self, a: i32, b: i32, c: i32) -> i32 {
        let (t, f) = (self.t, self.f());
        for (x, y, z) in [(a, b, c), (b, a, c), (c, a, b)] {
            if x == t {
                return self.or2(y, z);
            }
            if x == f {
                return self.and2(y, z);
            }
        }
        if a == b || a == c {
            return a;
        }
        if b == c {
            return b;
        }
        let mut k = [a, b, c];
        k.sort_unstable();
        let key = (MAJ, k[0], k[1], k[2]);
        if let Some(&g) = self.gates3.get(&key) {
            return g;
        }
        let v = self.cnf.new_var();
        for (x, y) in [(a, b), (a, c), (b, c)] {
            self.cnf.add_clause(vec![-x, -y, v]);
            self.cnf.add_clause(vec![x, y, -v]);
        }
        self.gates3.insert(key, v);
        v
    }

    /// Ripple-carry addition; returns the sum and the carry out.
    fn add(&mut self, x: &[i32], y: &[i32], carry_in: i32) -> (Vec<i32>, i32) {
        let mut carry = carry_in;
        let mut out = Vec::with_capacity(x.len());
        for (a, b) in x.iter().zip(y) {
            let ab = self.xor2(*a, *b);
            out.push(self.xor2(ab, carry));
            carry = self.maj(*a, *b, carry);
        }
        (out, carry)
    }

    fn sub(&mut self, x: &[i32], y: &[i32]) -> Vec<i32> {
        let ny: Vec<i32> = y.iter().map(|l| -l).collect();
        let t = self.t;
        self.add(x, &ny, t).0
    }

    fn neg(&mut self, x: &[i32]) -> Vec<i32> {
        let zeros = vec![self.f(); x.len()];
        self.sub(&zeros, x)
    }

    /// Shift-and-add multiplication, truncated to the operand width.
    fn mul(&mut self, x: &[i32], y: &[i32]) -> Vec<i32> {
        let w = x.len();
        let f = self.f();
        let mut acc = vec![f; w];
        for (i, &yi) in y.iter().enumerate() {
            if yi == f {
                continue;
            }
            let mut partial = vec![f; w];
            for j in i..w {
                partial[j] = self.and2(x[j - i], yi);
            }
            acc = self.add(&acc, &partial, f).0;
        }
        acc
    }

    /// Unsigned `x < y`.
    fn ult(&mut self, x: &[i32], y: &[i32]) -> i32 {
        let mut lt = self.f();
        for (a, b) in x.iter().zip(y) {
            let differ = self.xor2(*a, *b);
            lt = self.mux(differ, *b, lt);
        }
        lt
    }

    /// Signed `x < y`: unsigned comparison with the sign bits inverted.
    fn slt(&mut self, x: &[i32], y: &[i32]) -> i32 {
        let mut x = x.to_vec();
        let mut y = y.to_vec();
        if let (Some(a), Some(b)) = (x.last_mut(), y.last_mut()) {
            *a = -*a;
            *b = -*b;
        }
        self.ult(&x, &y)
    }

    /// Restoring division. A zero divisor yields an all-ones quotient and
    /// the dividend as remainder.
    fn udivrem(&mut self, x: &[i32], y: &[i32]) -> (Vec<i32>, Vec<i32>) {
        let w = x.len();
        let f = self.f();
        let t = self.t;
        let mut rem = vec![f; w];
        let mut quot = vec![f; w];
        let mut divisor = y.to_vec();
        divisor.push(f);
        let not_divisor: Vec<i32> = divisor.iter().map(|l| -l).collect();
        for i in (0..w).rev() {
            // shifted = rem * 2 + x[i], one bit wider.
            let mut shifted = Vec::with_capacity(w + 1);
            shifted.push(x[i]);
            shifted.extend_from_slice(&rem);
            let (diff, no_borrow) = self.add(&shifted, &not_divisor, t);
            quot[i] = no_borrow;
            rem = (0..w)
                .map(|j| self.mux(no_borrow, diff[j], shifted[j]))
                .collect();
        }
        (quot, rem)
    }

    fn select(&mut self, c: i32, a: &[i32], b: &[i32]) -> Vec<i32> {
        a.iter().zip(b).map(|(p, q)| self.mux(c, *p, *q)).collect()
    }

    fn abs(&mut self, x: &[i32]) -> Vec<i32> {
        let sign = *x.last().expect("nonzero width");
        let n = self.neg(x);
        self.select(sign, &n, x)
    }

    fn sdivrem(&mut self, x: &[i32], y: &[i32]) -> (Vec<i32>, Vec<i32>) {
        let sx = *x.last().expect("nonzero width");
        let sy = *y.last().expect("nonzero width");
        let ux = self.abs(x);
        let uy = self.abs(y);
        let (q, r) = self.udivrem(&ux, &uy);
        let nq = self.neg(&q);
        let nr = self.neg(&r);
        let flip = self.xor2(sx, sy);
        let q = self.select(flip, &nq, &q);
        let r = self.select(sx, &nr, &r);
        (q, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::term::SsaVariable;

    fn brute(cnf: &Cnf) -> bool {
        let n = cnf.num_vars as usize;
        assert!(n <= 20);
        (0..1u32 << n).any(|m| {
            let model: Vec<bool> = (0..=n).map(|v| v > 0 && m >> (v - 1) & 1 == 1).collect();
            cnf.evaluate(&model)
        })
    }

    #[test]
    fn constant_true_is_trivial() {
        let mut p = TermPool::new();
        let t = p.tt();
        let cnf = bitblast(&p, t);
        assert!(brute(&cnf));
    }

    #[test]
    fn contradiction() {
        let mut p = TermPool::new();
        let x = p.var(SsaVariable::new("x", 1), Sort::Bool);
        let nx = p.not(x);
        // and() folds x ∧ ¬x; build it with an equality instead.
        let e = p.eq(x, nx);
        let cnf = bitblast(&p, e);
        assert!(!brute(&cnf));
    }
}
