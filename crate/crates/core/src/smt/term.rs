//! Hash-consed bit-vector terms with constant folding at construction.
//!
//! Children always have smaller ids than their parents, so iterating ids in
//! ascending order visits a term after all of its operands.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bv;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SsaVariable {
    /// Fully scoped name such as `main::x` or `main::mylist._size`.
    pub base: Arc<str>,
    pub version: u32,
}

impl SsaVariable {
    pub fn new(base: impl Into<Arc<str>>, version: u32) -> Self {
        SsaVariable {
            base: base.into(),
            version,
        }
    }
}

impl fmt::Display for SsaVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.base, self.version)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Bv(u32),
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => f.write_str("Bool"),
            Sort::Bv(w) => write!(f, "(_ BitVec {w})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    BoolConst(bool),
    /// Value stored as its low `width` bits.
    BvConst {
        width: u32,
        bits: u64,
    },
    Var(SsaVariable, Sort),
    Not(TermId),
    And(TermId, TermId),
    Or(TermId, TermId),
    Implies(TermId, TermId),
    Eq(TermId, TermId),
    BvAdd(TermId, TermId),
    BvSub(TermId, TermId),
    BvMul(TermId, TermId),
    BvNeg(TermId),
    BvSdiv(TermId, TermId),
    BvSrem(TermId, TermId),
    BvSlt(TermId, TermId),
    BvSle(TermId, TermId),
    Ite(TermId, TermId, TermId),
}

impl Node {
    pub fn children(&self) -> Vec<TermId> {
        match self {
            Node::BoolConst(_) | Node::BvConst { .. } | Node::Var(..) => vec![],
            Node::Not(a) | Node::BvNeg(a) => vec![*a],
            Node::And(a, b)
            | Node::Or(a, b)
            | Node::Implies(a, b)
            | Node::Eq(a, b)
            | Node::BvAdd(a, b)
            | Node::BvSub(a, b)
            | Node::BvMul(a, b)
            | Node::BvSdiv(a, b)
            | Node::BvSrem(a, b)
            | Node::BvSlt(a, b)
            | Node::BvSle(a, b) => vec![*a, *b],
            Node::Ite(c, a, b) => vec![*c, *a, *b],
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TermPool {
    nodes: Vec<Node>,
    sorts: Vec<Sort>,
    index: HashMap<Node, TermId>,
}

fn ordered(a: TermId, b: TermId) -> (TermId, TermId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TermPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: TermId) -> &Node {
        &self.nodes[t.index()]
    }

    pub fn sort(&self, t: TermId) -> Sort {
        self.sorts[t.index()]
    }

    pub fn width(&self, t: TermId) -> u32 {
        match self.sort(t) {
            Sort::Bv(w) => w,
            Sort::Bool => panic!("width of a Boolean term"),
        }
    }

    /// Rough memory footprint in bytes.
    pub fn approx_bytes(&self) -> usize {
        self.nodes.len() * 96
    }

    fn intern(&mut self, node: Node, sort: Sort) -> TermId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.sorts.push(sort);
        self.index.insert(node, id);
        id
    }

    pub fn bool_const(&mut self, b: bool) -> TermId {
        self.intern(Node::BoolConst(b), Sort::Bool)
    }

    pub fn tt(&mut self) -> TermId {
        self.bool_const(true)
    }

    pub fn ff(&mut self) -> TermId {
        self.bool_const(false)
    }

    pub fn bv_const(&mut self, width: u32, value: i64) -> TermId {
        self.intern(
            Node::BvConst {
                width,
                bits: bv::to_bits(value, width),
            },
            Sort::Bv(width),
        )
    }

    pub fn var(&mut self, v: SsaVariable, sort: Sort) -> TermId {
        self.intern(Node::Var(v, sort), sort)
    }

    pub fn as_bool(&self, t: TermId) -> Option<bool> {
        match self.node(t) {
            Node::BoolConst(b) => Some(*b),
            _ => None,
        }
    }

    /// Signed value of a bit-vector constant.
    pub fn as_int(&self, t: TermId) -> Option<i64> {
        match self.node(t) {
            Node::BvConst { width, bits } => Some(bv::from_bits(*bits, *width)),
            _ => None,
        }
    }

    fn is_negation_of(&self, a: TermId, b: TermId) -> bool {
        matches!(self.node(a), Node::Not(x) if *x == b)
            || matches!(self.node(b), Node::Not(x) if *x == a)
    }

    pub fn not(&mut self, a: TermId) -> TermId {
        debug_assert_eq!(self.sort(a), Sort::Bool);
        match self.node(a) {
            Node::BoolConst(b) => {
                let b = !*b;
                self.bool_const(b)
            }
            Node::Not(x) => *x,
            _ => self.intern(Node::Not(a), Sort::Bool),
        }
    }

    pub fn and(&mut self, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!((self.sort(a), self.sort(b)), (Sort::Bool, Sort::Bool));
        match (self.as_bool(a), self.as_bool(b)) {
            (Some(false), _) | (_, Some(false)) => return self.ff(),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.is_negation_of(a, b) {
            return self.ff();
        }
        let (a, b) = ordered(a, b);
        self.intern(Node::And(a, b), Sort::Bool)
    }

    pub fn or(&mut self, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!((self.sort(a), self.sort(b)), (Sort::Bool, Sort::Bool));
        match (self.as_bool(a), self.as_bool(b)) {
            (Some(true), _) | (_, Some(true)) => return self.tt(),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.is_negation_of(a, b) {
            return self.tt();
        }
        let (a, b) = ordered(a, b);
        self.intern(Node::Or(a, b), Sort::Bool)
    }

    pub fn implies(&mut self, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!((self.sort(a), self.sort(b)), (Sort::Bool, Sort::Bool));
        match (self.as_bool(a), self.as_bool(b)) {
            (Some(false), _) | (_, Some(true)) => return self.tt(),
            (Some(true), _) => return b,
            (_, Some(false)) => return self.not(a),
            _ => {}
        }
        if a == b {
            return self.tt();
        }
        self.intern(Node::Implies(a, b), Sort::Bool)
    }

    pub fn and_all(&mut self, terms: impl IntoIterator<Item = TermId>) -> TermId {
        let mut acc = self.tt();
        for t in terms {
            acc = self.and(acc, t);
        }
        acc
    }

    pub fn or_all(&mut self, terms: impl IntoIterator<Item = TermId>) -> TermId {
        let mut acc = self.ff();
        for t in terms {
            acc = self.or(acc, t);
        }
        acc
    }

    pub fn eq(&mut self, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!(self.sort(a), self.sort(b));
        if a == b {
            return self.tt();
        }
        match (self.node(a), self.node(b)) {
            (Node::BvConst { bits: x, .. }, Node::BvConst { bits: y, .. }) => {
                let r = x == y;
                return self.bool_const(r);
            }
            (Node::BoolConst(x), _) => {
                return if *x { b } else { self.not(b) };
            }
            (_, Node::BoolConst(y)) => {
                return if *y { a } else { self.not(a) };
            }
            _ => {}
        }
        if self.sort(a) == Sort::Bool && self.is_negation_of(a, b) {
            return self.ff();
        }
        let (a, b) = ordered(a, b);
        self.intern(Node::Eq(a, b), Sort::Bool)
    }

    pub fn ite(&mut self, c: TermId, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!(self.sort(c), Sort::Bool);
        debug_assert_eq!(self.sort(a), self.sort(b));
        match self.as_bool(c) {
            Some(true) => return a,
            Some(false) => return b,
            None => {}
        }
        if a == b {
            return a;
        }
        if let Node::Not(inner) = *self.node(c) {
            return self.ite(inner, b, a);
        }
        if self.sort(a) == Sort::Bool {
            match (self.as_bool(a), self.as_bool(b)) {
                (Some(true), Some(false)) => return c,
                (Some(false), Some(true)) => return self.not(c),
                (Some(true), None) => return self.or(c, b),
                (Some(false), None) => {
                    let nc = self.not(c);
                    return self.and(nc, b);
                }
                (None, Some(false)) => return self.and(c, a),
                (None, Some(true)) => {
                    let nc = self.not(c);
                    return self.or(nc, a);
                }
                _ => {}
            }
        }
        // Nested ite on the same condition.
        if let Node::Ite(c2, x, _) = *self.node(a) {
            if c2 == c {
                return self.ite(c, x, b);
            }
        }
        if let Node::Ite(c2, _, y) = *self.node(b) {
            if c2 == c {
                return self.ite(c, a, y);
            }
        }
        let sort = self.sort(a);
        self.intern(Node::Ite(c, a, b), sort)
    }

    fn bv_binary(
        &mut self,
        a: TermId,
        b: TermId,
        fold: fn(i64, i64, u32) -> i64,
        make: fn(TermId, TermId) -> Node,
    ) -> TermId {
        let w = self.width(a);
        debug_assert_eq!(w, self.width(b));
        if let (Some(x), Some(y)) = (self.as_int(a), self.as_int(b)) {
            return self.bv_const(w, fold(x, y, w));
        }
        self.intern(make(a, b), Sort::Bv(w))
    }

    pub fn bv_add(&mut self, a: TermId, b: TermId) -> TermId {
        if self.as_int(a) == Some(0) {
            return b;
        }
        if self.as_int(b) == Some(0) {
            return a;
        }
        let (a, b) = ordered(a, b);
        self.bv_binary(a, b, bv::add, Node::BvAdd)
    }

    pub fn bv_sub(&mut self, a: TermId, b: TermId) -> TermId {
        if self.as_int(b) == Some(0) {
            return a;
        }
        if a == b {
            let w = self.width(a);
            return self.bv_const(w, 0);
        }
        self.bv_binary(a, b, bv::sub, Node::BvSub)
    }

    pub fn bv_mul(&mut self, a: TermId, b: TermId) -> TermId {
        let w = self.width(a);
        for (x, y) in [(a, b), (b, a)] {
            match self.as_int(x) {
                Some(0) => return self.bv_const(w, 0),
                Some(1) => return y,
                _ => {}
            }
        }
        let (a, b) = ordered(a, b);
        self.bv_binary(a, b, bv::mul, Node::BvMul)
    }

    pub fn bv_neg(&mut self, a: TermId) -> TermId {
        let w = self.width(a);
        if let Some(x) = self.as_int(a) {
            return self.bv_const(w, bv::neg(x, w));
        }
        if let Node::BvNeg(x) = *self.node(a) {
            return x;
        }
        self.intern(Node::BvNeg(a), Sort::Bv(w))
    }

    pub fn bv_sdiv(&mut self, a: TermId, b: TermId) -> TermId {
        if self.as_int(b) == Some(1) {
            return a;
        }
        self.bv_binary(a, b, bv::sdiv, Node::BvSdiv)
    }

    pub fn bv_srem(&mut self, a: TermId, b: TermId) -> TermId {
        self.bv_binary(a, b, bv::srem, Node::BvSrem)
    }

    pub fn bv_slt(&mut self, a: TermId, b: TermId) -> TermId {
        if a == b {
            return self.ff();
        }
        if let (Some(x), Some(y)) = (self.as_int(a), self.as_int(b)) {
            return self.bool_const(x < y);
        }
        self.intern(Node::BvSlt(a, b), Sort::Bool)
    }

    pub fn bv_sle(&mut self, a: TermId, b: TermId) -> TermId {
        if a == b {
            return self.tt();
        }
        if let (Some(x), Some(y)) = (self.as_int(a), self.as_int(b)) {
            return self.bool_const(x <= y);
        }
        self.intern(Node::BvSle(a, b), Sort::Bool)
    }

    /// Every term reachable from `roots`, in ascending id order.
    pub fn reachable(&self, roots: &[TermId]) -> Vec<TermId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<TermId> = roots.to_vec();
        while let Some(t) = stack.pop() {
            if std::mem::replace(&mut seen[t.index()], true) {
                continue;
            }
            stack.extend(self.node(t).children());
        }
        seen.iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| TermId(i as u32))
            .collect()
    }

    /// Infix rendering, used by `--show-ssa`.
    pub fn display(&self, t: TermId) -> String {
        let mut out = String::new();
        self.write_term(&mut out, t, 0);
        out
    }

    fn write_term(&self, out: &mut String, t: TermId, depth: usize) {
        use std::fmt::Write;
        if depth > 64 {
            let _ = write!(out, "t{}", t.0);
            return;
        }
        let bin = |out: &mut String, a: TermId, op: &str, b: TermId| {
            out.push('(');
            self.write_term(out, a, depth + 1);
            let _ = write!(out, " {op} ");
            self.write_term(out, b, depth + 1);
            out.push(')');
        };
        match self.node(t) {
            Node::BoolConst(b) => {
                let _ = write!(out, "{b}");
            }
            Node::BvConst { width, bits } => {
                let _ = write!(out, "{}", bv::from_bits(*bits, *width));
            }
            Node::Var(v, _) => {
                let _ = write!(out, "{v}");
            }
            Node::Not(a) => {
                out.push('!');
                self.write_term(out, *a, depth + 1);
            }
            Node::BvNeg(a) => {
                out.push('-');
                self.write_term(out, *a, depth + 1);
            }
            Node::And(a, b) => bin(out, *a, "&&", *b),
            Node::Or(a, b) => bin(out, *a, "||", *b),
            Node::Implies(a, b) => bin(out, *a, "=>", *b),
            Node::Eq(a, b) => bin(out, *a, "==", *b),
            Node::BvAdd(a, b) => bin(out, *a, "+", *b),
            Node::BvSub(a, b) => bin(out, *a, "-", *b),
            Node::BvMul(a, b) => bin(out, *a, "*", *b),
            Node::BvSdiv(a, b) => bin(out, *a, "/", *b),
            Node::BvSrem(a, b) => bin(out, *a, "%", *b),
            Node::BvSlt(a, b) => bin(out, *a, "<", *b),
            Node::BvSle(a, b) => bin(out, *a, "<=", *b),
            Node::Ite(c, a, b) => {
                out.push_str("ite(");
                self.write_term(out, *c, depth + 1);
                out.push_str(", ");
                self.write_term(out, *a, depth + 1);
                out.push_str(", ");
                self.write_term(out, *b, depth + 1);
                out.push(')');
            }
        }
    }
}

/// A concrete value of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

impl Value {
    pub fn as_bool(self) -> bool {
        match self {
            Value::Bool(b) => b,
            Value::Int(v) => v != 0,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Value::Int(v) => v,
            Value::Bool(b) => b as i64,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(v) => write!(f, "{v}"),
        }
    }
}

impl TermPool {
    /// Evaluates `roots` under an assignment of variables. Variables for
    /// which `lookup` returns `None` evaluate to zero / false.
    pub fn evaluate(
        &self,
        roots: &[TermId],
        mut lookup: impl FnMut(&SsaVariable) -> Option<Value>,
    ) -> HashMap<TermId, Value> {
        let mut vals: HashMap<TermId, Value> = HashMap::new();
        for t in self.reachable(roots) {
            let get = |x: &TermId| vals[x];
            let v = match self.node(t) {
                Node::BoolConst(b) => Value::Bool(*b),
                Node::BvConst { width, bits } => Value::Int(bv::from_bits(*bits, *width)),
                Node::Var(v, sort) => lookup(v).unwrap_or(match sort {
                    Sort::Bool => Value::Bool(false),
                    Sort::Bv(_) => Value::Int(0),
                }),
                Node::Not(a) => Value::Bool(!get(a).as_bool()),
                Node::And(a, b) => Value::Bool(get(a).as_bool() && get(b).as_bool()),
                Node::Or(a, b) => Value::Bool(get(a).as_bool() || get(b).as_bool()),
                Node::Implies(a, b) => Value::Bool(!get(a).as_bool() || get(b).as_bool()),
                Node::Eq(a, b) => Value::Bool(get(a) == get(b)),
                Node::Ite(c, a, b) => {
                    if get(c).as_bool() {
                        get(a)
                    } else {
                        get(b)
                    }
                }
                node => {
                    let w = self.width(node.children()[0]);
                    let x = get(&node.children()[0]).as_int();
                    let y = node.children().get(1).map(|c| get(c).as_int()).unwrap_or(0);
                    match node {
                        Node::BvAdd(..) => Value::Int(bv::add(x, y, w)),
                        Node::BvSub(..) => Value::Int(bv::sub(x, y, w)),
                        Node::BvMul(..) => Value::Int(bv::mul(x, y, w)),
                        Node::BvNeg(..) => Value::Int(bv::neg(x, w)),
                        Node::BvSdiv(..) => Value::Int(bv::sdiv(x, y, w)),
                        Node::BvSrem(..) => Value::Int(bv::srem(x, y, w)),
                        Node::BvSlt(..) => Value::Bool(x < y),
                        Node::BvSle(..) => Value::Bool(x <= y),
                        _ => unreachable!(),
                    }
                }
            };
            vals.insert(t, v);
        }
        vals
    }
}
