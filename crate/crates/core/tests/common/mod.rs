//! Test-side oracles shared by the integration tests.
#![allow(dead_code)]

pub mod programs;
pub mod sequences;
pub mod terms;

use std::path::{Path, PathBuf};

use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::smt::Cnf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn models_dir() -> PathBuf {
    repo_root().join("models")
}

pub fn benchmarks_dir() -> PathBuf {
    repo_root().join("benchmarks")
}

pub fn manifest() -> PathBuf {
    benchmarks_dir().join("manifest.txt")
}

pub fn config() -> VerifierConfig {
    VerifierConfig::default().with_include(models_dir())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every `.cpp` file of the benchmark corpus, sorted.
pub fn corpus() -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![benchmarks_dir()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).expect("benchmarks directory") {
            let p = entry.expect("dir entry").path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e == "cpp") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Pigeonhole principle: `pigeons` pigeons in `holes` holes, each hole
/// holding at most one. Unsatisfiable iff `pigeons > holes`.
pub fn pigeonhole(pigeons: usize, holes: usize) -> Cnf {
    let mut cnf = Cnf::new();
    let var = |p: usize, h: usize| (p * holes + h + 1) as i32;
    for _ in 0..pigeons * holes {
        cnf.new_var();
    }
    for p in 0..pigeons {
        cnf.add_clause((0..holes).map(|h| var(p, h)).collect());
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                cnf.add_clause(vec![-var(p, h), -var(q, h)]);
            }
        }
    }
    cnf
}

/// Whether some assignment satisfies `cnf`, by enumeration.
pub fn brute_force_sat(cnf: &Cnf) -> bool {
    let n = cnf.num_vars as usize;
    assert!(n <= 20, "too many variables to enumerate");
    (0u32..1 << n).any(|bits| {
        cnf.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = l.unsigned_abs() as usize - 1;
                ((bits >> v) & 1 == 1) == (l > 0)
            })
        })
    })
}
