//! Random straight-line-plus-loops programs over narrow integers, with a
//! reference evaluator that works on the generator's own syntax tree.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WIDTH: u32 = 4;
pub const UNWIND: u32 = 5;
const MIN: i64 = -(1 << (WIDTH - 1));
const MAX: i64 = (1 << (WIDTH - 1)) - 1;

pub fn wrap(v: i64) -> i64 {
    let m = 1i64 << WIDTH;
    (v - MIN).rem_euclid(m) + MIN
}

/// All values of a `WIDTH`-bit signed integer.
pub fn domain() -> impl Iterator<Item = i64> + Clone {
    MIN..=MAX
}

#[derive(Clone, Debug)]
pub enum IExpr {
    Const(i64),
    Var(String),
    Add(Box<IExpr>, Box<IExpr>),
    Sub(Box<IExpr>, Box<IExpr>),
    Mul(Box<IExpr>, Box<IExpr>),
    Neg(Box<IExpr>),
    /// Division by a positive literal.
    Div(Box<IExpr>, i64),
}

#[derive(Clone, Copy, Debug)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
}

#[derive(Clone, Debug)]
pub enum BExpr {
    Cmp(Cmp, IExpr, IExpr),
    And(Box<BExpr>, Box<BExpr>),
    Or(Box<BExpr>, Box<BExpr>),
    Not(Box<BExpr>),
}

#[derive(Clone, Debug)]
pub enum GStmt {
    Assign(String, IExpr),
    If(BExpr, Vec<GStmt>, Vec<GStmt>),
    /// `for (int c = 0; c < n; c++)`.
    For(String, i64, Vec<GStmt>),
    Assert(BExpr),
    Assume(BExpr),
}

#[derive(Clone, Debug)]
pub struct GenProgram {
    pub nondets: Vec<String>,
    /// Deterministically initialized variables.
    pub locals: Vec<(String, i64)>,
    pub body: Vec<GStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    /// Source line of the failing assertion.
    Violated(u32),
    AssumeFailed,
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    vars: Vec<String>,
    counters: usize,
    stmts_left: usize,
}

impl Gen<'_> {
    fn iexpr(&mut self, depth: u32) -> IExpr {
        let leaf = depth == 0 || self.rng.gen_ratio(2, 5);
        if leaf {
            return if self.rng.gen_bool(0.6) {
                IExpr::Var(self.vars[self.rng.gen_range(0..self.vars.len())].clone())
            } else {
                IExpr::Const(self.rng.gen_range(MIN + 1..=MAX))
            };
        }
        let a = Box::new(self.iexpr(depth - 1));
        match self.rng.gen_range(0..6) {
            0 | 1 => IExpr::Add(a, Box::new(self.iexpr(depth - 1))),
            2 => IExpr::Sub(a, Box::new(self.iexpr(depth - 1))),
            3 => IExpr::Mul(a, Box::new(self.iexpr(depth - 1))),
            4 => IExpr::Neg(a),
            _ => IExpr::Div(a, self.rng.gen_range(1..=3)),
        }
    }

    fn bexpr(&mut self, depth: u32) -> BExpr {
        if depth == 0 || self.rng.gen_ratio(3, 5) {
            let op =
                [Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ne, Cmp::Gt, Cmp::Ge][self.rng.gen_range(0..6)];
            return BExpr::Cmp(op, self.iexpr(2), self.iexpr(1));
        }
        match self.rng.gen_range(0..3) {
            0 => BExpr::And(
                Box::new(self.bexpr(depth - 1)),
                Box::new(self.bexpr(depth - 1)),
            ),
            1 => BExpr::Or(
                Box::new(self.bexpr(depth - 1)),
                Box::new(self.bexpr(depth - 1)),
            ),
            _ => BExpr::Not(Box::new(self.bexpr(depth - 1))),
        }
    }

    fn block(&mut self, depth: u32, loop_depth: u32) -> Vec<GStmt> {
        let n = self.rng.gen_range(1..=3);
        let mut out = Vec::new();
        for _ in 0..n {
            if self.stmts_left == 0 {
                break;
            }
            self.stmts_left -= 1;
            out.push(self.stmt(depth, loop_depth));
        }
        out
    }

    fn assignable(&mut self) -> String {
        // Loop counters are read-only.
        let writable: Vec<&String> = self.vars.iter().filter(|v| !v.starts_with('c')).collect();
        writable[self.rng.gen_range(0..writable.len())].clone()
    }

    fn stmt(&mut self, depth: u32, loop_depth: u32) -> GStmt {
        let roll = self.rng.gen_range(0..100);
        if depth > 0 && roll < 15 {
            let c = self.bexpr(1);
            let t = self.block(depth - 1, loop_depth);
            let e = if self.rng.gen_bool(0.5) {
                self.block(depth - 1, loop_depth)
            } else {
                Vec::new()
            };
            return GStmt::If(c, t, e);
        }
        if depth > 0 && loop_depth < 2 && roll < 27 {
            let name = format!("c{}", self.counters);
            self.counters += 1;
            let n = self.rng.gen_range(0..=UNWIND as i64);
            self.vars.push(name.clone());
            let body = self.block(depth - 1, loop_depth + 1);
            self.vars.pop();
            return GStmt::For(name, n, body);
        }
        if roll < 40 {
            return GStmt::Assert(self.bexpr(1));
        }
        if roll < 44 {
            return GStmt::Assume(self.bexpr(0));
        }
        let v = self.assignable();
        GStmt::Assign(v, self.iexpr(2))
    }
}

pub fn generate(rng: &mut ChaCha8Rng) -> GenProgram {
    let n_nondet = rng.gen_range(0..=2);
    let nondets: Vec<String> = (0..n_nondet).map(|i| format!("n{i}")).collect();
    let n_locals = rng.gen_range(1..=2);
    let locals: Vec<(String, i64)> = (0..n_locals)
        .map(|i| (format!("v{i}"), rng.gen_range(MIN..=MAX)))
        .collect();
    let mut vars = nondets.clone();
    vars.extend(locals.iter().map(|(n, _)| n.clone()));
    let mut g = Gen {
        rng,
        vars,
        counters: 0,
        stmts_left: 10,
    };
    let mut body = g.block(3, 0);
    if !body.iter().any(|s| matches!(s, GStmt::Assert(_))) {
        body.push(GStmt::Assert(g.bexpr(1)));
    }
    GenProgram {
        nondets,
        locals,
        body,
    }
}

fn print_iexpr(e: &IExpr) -> String {
    match e {
        IExpr::Const(c) if *c < 0 => format!("(-{})", -c),
        IExpr::Const(c) => c.to_string(),
        IExpr::Var(v) => v.clone(),
        IExpr::Add(a, b) => format!("({} + {})", print_iexpr(a), print_iexpr(b)),
        IExpr::Sub(a, b) => format!("({} - {})", print_iexpr(a), print_iexpr(b)),
        IExpr::Mul(a, b) => format!("({} * {})", print_iexpr(a), print_iexpr(b)),
        IExpr::Neg(a) => format!("(-{})", print_iexpr(a)),
        IExpr::Div(a, c) => format!("({} / {c})", print_iexpr(a)),
    }
}

fn print_bexpr(e: &BExpr) -> String {
    match e {
        BExpr::Cmp(op, a, b) => {
            let s = match op {
                Cmp::Lt => "<",
                Cmp::Le => "<=",
                Cmp::Eq => "==",
                Cmp::Ne => "!=",
                Cmp::Gt => ">",
                Cmp::Ge => ">=",
            };
            format!("({} {s} {})", print_iexpr(a), print_iexpr(b))
        }
        BExpr::And(a, b) => format!("({} && {})", print_bexpr(a), print_bexpr(b)),
        BExpr::Or(a, b) => format!("({} || {})", print_bexpr(a), print_bexpr(b)),
        BExpr::Not(a) => format!("!{}", print_bexpr(a)),
    }
}

/// Source text plus the line of every assertion in syntax-tree preorder.
pub struct Printed {
    pub source: String,
    pub assert_lines: Vec<u32>,
}

struct Printer {
    out: Vec<String>,
    assert_lines: Vec<u32>,
}

impl Printer {
    fn line(&mut self, indent: usize, text: String) -> u32 {
        self.out.push(format!("{}{}", "    ".repeat(indent), text));
        self.out.len() as u32
    }

    fn block(&mut self, body: &[GStmt], indent: usize) {
        for s in body {
            match s {
                GStmt::Assign(v, e) => {
                    self.line(indent, format!("{v} = {};", print_iexpr(e)));
                }
                GStmt::If(c, t, e) => {
                    self.line(indent, format!("if ({}) {{", print_bexpr(c)));
                    self.block(t, indent + 1);
                    if e.is_empty() {
                        self.line(indent, "}".into());
                    } else {
                        self.line(indent, "} else {".into());
                        self.block(e, indent + 1);
                        self.line(indent, "}".into());
                    }
                }
                GStmt::For(c, n, body) => {
                    self.line(indent, format!("for (int {c} = 0; {c} < {n}; {c}++) {{"));
                    self.block(body, indent + 1);
                    self.line(indent, "}".into());
                }
                GStmt::Assert(c) => {
                    let l = self.line(indent, format!("assert({});", print_bexpr(c)));
                    self.assert_lines.push(l);
                }
                GStmt::Assume(c) => {
                    self.line(indent, format!("__VERIFIER_assume({});", print_bexpr(c)));
                }
            }
        }
    }
}

impl GenProgram {
    pub fn print(&self) -> Printed {
        let mut p = Printer {
            out: Vec::new(),
            assert_lines: Vec::new(),
        };
        p.line(0, "int main() {".into());
        for n in &self.nondets {
            p.line(1, format!("int {n} = nondet_int();"));
        }
        for (v, init) in &self.locals {
            p.line(
                1,
                format!("int {v} = {};", print_iexpr(&IExpr::Const(*init))),
            );
        }
        p.block(&self.body, 1);
        p.line(1, "return 0;".into());
        p.line(0, "}".into());
        Printed {
            source: p.out.join("\n") + "\n",
            assert_lines: p.assert_lines,
        }
    }

    /// Runs the program on concrete inputs.
    pub fn evaluate(&self, inputs: &[i64]) -> Outcome {
        let mut env: Vec<(String, i64)> = self
            .nondets
            .iter()
            .cloned()
            .zip(inputs.iter().copied())
            .collect();
        env.extend(self.locals.iter().cloned());
        let mut next_assert = 0usize;
        let lines = self.print().assert_lines;
        match exec(&self.body, &mut env, &mut next_assert, &lines) {
            Err(o) => o,
            Ok(()) => Outcome::Completed,
        }
    }

    /// Whether some input makes an assertion fail, by enumeration.
    pub fn violation_exists(&self) -> bool {
        self.inputs()
            .any(|inp| matches!(self.evaluate(&inp), Outcome::Violated(_)))
    }

    pub fn inputs(&self) -> impl Iterator<Item = Vec<i64>> {
        let n = self.nondets.len();
        let d: Vec<i64> = domain().collect();
        let total = d.len().pow(n as u32);
        (0..total).map(move |mut k| {
            (0..n)
                .map(|_| {
                    let v = d[k % d.len()];
                    k /= d.len();
                    v
                })
                .collect()
        })
    }
}

fn lookup(env: &[(String, i64)], v: &str) -> i64 {
    env.iter()
        .rev()
        .find(|(n, _)| n == v)
        .map(|(_, x)| *x)
        .expect("bound variable")
}

fn eval_i(e: &IExpr, env: &[(String, i64)]) -> i64 {
    match e {
        IExpr::Const(c) => *c,
        IExpr::Var(v) => lookup(env, v),
        IExpr::Add(a, b) => wrap(eval_i(a, env) + eval_i(b, env)),
        IExpr::Sub(a, b) => wrap(eval_i(a, env) - eval_i(b, env)),
        IExpr::Mul(a, b) => wrap(eval_i(a, env) * eval_i(b, env)),
        IExpr::Neg(a) => wrap(-eval_i(a, env)),
        IExpr::Div(a, c) => wrap(eval_i(a, env) / c),
    }
}

fn eval_b(e: &BExpr, env: &[(String, i64)]) -> bool {
    match e {
        BExpr::Cmp(op, a, b) => {
            let (x, y) = (eval_i(a, env), eval_i(b, env));
            match op {
                Cmp::Lt => x < y,
                Cmp::Le => x <= y,
                Cmp::Eq => x == y,
                Cmp::Ne => x != y,
                Cmp::Gt => x > y,
                Cmp::Ge => x >= y,
            }
        }
        BExpr::And(a, b) => eval_b(a, env) && eval_b(b, env),
        BExpr::Or(a, b) => eval_b(a, env) || eval_b(b, env),
        BExpr::Not(a) => !eval_b(a, env),
    }
}

/// Index of an assertion in preorder, so a line can be found for it.
fn assert_index(body: &[GStmt], start: usize) -> usize {
    body.iter().fold(start, |acc, s| match s {
        GStmt::Assert(_) => acc + 1,
        GStmt::If(_, t, e) => assert_index(e, assert_index(t, acc)),
        GStmt::For(_, _, b) => assert_index(b, acc),
        _ => acc,
    })
}

fn exec(
    body: &[GStmt],
    env: &mut Vec<(String, i64)>,
    base: &mut usize,
    lines: &[u32],
) -> Result<(), Outcome> {
    let mut idx = *base;
    for s in body {
        match s {
            GStmt::Assign(v, e) => {
                let x = eval_i(e, env);
                let slot = env
                    .iter_mut()
                    .rev()
                    .find(|(n, _)| n == v)
                    .expect("bound variable");
                slot.1 = x;
            }
            GStmt::If(c, t, e) => {
                let after_then = assert_index(t, idx);
                let end = assert_index(e, after_then);
                if eval_b(c, env) {
                    let mut b = idx;
                    exec(t, env, &mut b, lines)?;
                } else {
                    let mut b = after_then;
                    exec(e, env, &mut b, lines)?;
                }
                idx = end;
            }
            GStmt::For(c, n, b) => {
                env.push((c.clone(), 0));
                while lookup(env, c) < *n {
                    let mut start = idx;
                    exec(b, env, &mut start, lines)?;
                    let slot = env.last_mut().expect("counter");
                    slot.1 = wrap(slot.1 + 1);
                }
                env.pop();
                idx = assert_index(b, idx);
            }
            GStmt::Assert(c) => {
                if !eval_b(c, env) {
                    return Err(Outcome::Violated(lines[idx]));
                }
                idx += 1;
            }
            GStmt::Assume(c) => {
                if !eval_b(c, env) {
                    return Err(Outcome::AssumeFailed);
                }
            }
        }
    }
    *base = idx;
    Ok(())
}
