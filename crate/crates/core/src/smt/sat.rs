//! A CDCL SAT solver: two watched literals, first-UIP learning, no
//! restarts, decisions in variable-index order with phase saving.

use std::time::Instant;

use thiserror::Error;

use super::bitblast::Cnf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatStatus {
    /// A total model, indexed by variable (entry 0 unused).
    Sat(Vec<bool>),
    Unsat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub learned: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SatStatus,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, SatStatus::Sat(_))
    }

    pub fn model(&self) -> Option<&[bool]> {
        match &self.status {
            SatStatus::Sat(m) => Some(m),
            SatStatus::Unsat => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    Time,
    Memory,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("solver hit its {0:?} limit")]
    ResourceLimit(Resource),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveLimits {
    pub deadline: Option<Instant>,
    pub max_bytes: Option<usize>,
}

/// Decides `cnf` with no resource limits.
pub fn sat_solve(cnf: &Cnf) -> SolveResult {
    sat_solve_limited(cnf, SolveLimits::default()).expect("no limits were set")
}

pub fn sat_solve_limited(cnf: &Cnf, limits: SolveLimits) -> Result<SolveResult, SolveError> {
    let mut s = Solver::new(cnf.num_vars as usize);
    for c in &cnf.clauses {
        if !s.add_input_clause(c) {
            return Ok(s.result(SatStatus::Unsat));
        }
    }
    s.solve(limits)
}

const UNDEF: u32 = u32::MAX;

fn lit_of(l: i32) -> u32 {
    (l.unsigned_abs() << 1) | (l < 0) as u32
}

fn var(l: u32) -> usize {
    (l >> 1) as usize
}

struct Solver {
    clauses: Vec<Vec<u32>>,
    /// Clauses in which a literal is one of the two watched ones.
    watches: Vec<Vec<u32>>,
    /// Per variable: 0 unassigned, 1 true, -1 false.
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    phase: Vec<bool>,
    seen: Vec<bool>,
    cursor: usize,
    num_vars: usize,
    literals: usize,
    stats: SolveStats,
}

impl Solver {
    fn new(n: usize) -> Self {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * (n + 1)],
            assign: vec![0; n + 1],
            level: vec![0; n + 1],
            reason: vec![UNDEF; n + 1],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            phase: vec![false; n + 1],
            seen: vec![false; n + 1],
            cursor: 1,
            num_vars: n,
            literals: 0,
            stats: SolveStats::default(),
        }
    }

    fn result(&self, status: SatStatus) -> SolveResult {
        SolveResult {
            status,
            stats: self.stats,
        }
    }

    fn value(&self, l: u32) -> i8 {
        let v = self.assign[var(l)];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn enqueue(&mut self, l: u32, reason: u32) {
        let v = var(l);
        self.assign[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause at decision level 0. Returns false on a conflict.
    fn add_input_clause(&mut self, clause: &[i32]) -> bool {
        let mut lits: Vec<u32> = clause.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return true;
        }
        lits.retain(|&l| self.value(l) != -1);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => {
                self.enqueue(lits[0], UNDEF);
                self.propagate().is_none()
            }
            _ => {
                self.attach(lits);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<u32>) -> u32 {
        let ci = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(ci);
        self.watches[lits[1] as usize].push(ci);
        self.literals += lits.len();
        self.clauses.push(lits);
        ci
    }

    /// Unit propagation. Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci as usize];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let first_val = {
                    let v = self.assign[var(first)];
                    if first & 1 == 1 {
                        -v
                    } else {
                        v
                    }
                };
                if first_val == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let v = self.assign[var(l)];
                    let lv = if l & 1 == 1 { -v } else { v };
                    if lv != -1 {
                        c.swap(1, k);
                        self.watches[c[1] as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if first_val == -1 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, ci);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the level to backjump to.
    fn analyze(&mut self, mut ci: u32) -> (Vec<u32>, u32) {
        let mut learnt = vec![0u32];
        let mut path = 0usize;
        let mut p = UNDEF;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let clause = &self.clauses[ci as usize];
            let start = if p == UNDEF { 0 } else { 1 };
            for &q in &clause[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                p = self.trail[idx];
                if self.seen[var(p)] {
                    break;
                }
            }
            self.seen[var(p)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            ci = self.reason[var(p)];
        }
        learnt[0] = p ^ 1;

        // Drop literals implied by the rest of the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                let r = self.reason[var(l)];
                if r == UNDEF {
                    return true;
                }
                !self.clauses[r as usize][1..]
                    .iter()
                    .all(|&q| self.seen[var(q)] || self.level[var(q)] == 0)
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<u32> = learnt
            .into_iter()
            .zip(keep)
            .filter_map(|(l, k)| k.then_some(l))
            .collect();

        let mut back = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for &l in &self.trail[start..] {
            let v = var(l);
            self.phase[v] = self.assign[v] == 1;
            self.assign[v] = 0;
            self.reason[v] = UNDEF;
            self.cursor = self.cursor.min(v);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn approx_bytes(&self) -> usize {
        self.literals * 4 + self.clauses.len() * 32 + self.num_vars * 48
    }

    fn solve(&mut self, limits: SolveLimits) -> Result<SolveResult, SolveError> {
        if self.propagate().is_some() {
            return Ok(self.result(SatStatus::Unsat));
        }
        let mut ticks = 0u64;
        loop {
            ticks += 1;
            if ticks.is_multiple_of(256) {
                if let Some(d) = limits.deadline {
                    if Instant::now() >= d {
                        return Err(SolveError::ResourceLimit(Resource::Time));
                    }
                }
                if let Some(m) = limits.max_bytes {
                    if self.approx_bytes() > m {
                        return Err(SolveError::ResourceLimit(Resource::Memory));
                    }
                }
            }
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return Ok(self.result(SatStatus::Unsat));
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                self.stats.learned += 1;
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], UNDEF);
                } else {
                    let first = learnt[0];
                    let ci = self.attach(learnt);
                    self.enqueue(first, ci);
                }
                continue;
            }
            while self.cursor <= self.num_vars && self.assign[self.cursor] != 0 {
                self.cursor += 1;
            }
            if self.cursor > self.num_vars {
                let model = (0..=self.num_vars).map(|v| self.assign[v] == 1).collect();
                return Ok(self.result(SatStatus::Sat(model)));
            }
            self.stats.decisions += 1;
            let v = self.cursor as u32;
            let l = (v << 1) | (!self.phase[v as usize]) as u32;
            self.trail_lim.push(self.trail.len());
            self.enqueue(l, UNDEF);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(n: u32, clauses: &[&[i32]]) -> Cnf {
        Cnf {
            num_vars: n,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
            ..Cnf::default()
        }
    }

    #[test]
    fn unit_conflict() {
        assert_eq!(sat_solve(&cnf(1, &[&[1], &[-1]])).status, SatStatus::Unsat);
    }

    #[test]
    fn propagation_forces_value() {
        let r = sat_solve(&cnf(2, &[&[1, 2], &[-1]]));
        let m = r.model().unwrap();
        assert!(!m[1] && m[2]);
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(sat_solve(&cnf(3, &[])).is_sat());
    }

    #[test]
    fn empty_clause_is_unsat() {
        assert_eq!(sat_solve(&cnf(1, &[&[]])).status, SatStatus::Unsat);
    }
}
