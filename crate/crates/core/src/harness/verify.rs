//! Single-file verification: the whole pipeline under time and memory
//! limits, plus the textual verdict.

use std::fmt::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::config::VerifierConfig;
use crate::frontend;
use crate::goto::{self, GotoProgram};
use crate::smt::{self, Counterexample, Resource, SolveError, SolveLimits, StepDetail};
use crate::symex::{self, SsaSystem, SymexError};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Successful,
    Failed { counterexample: Box<Counterexample> },
    Timeout,
    MemOut,
    ToolError { message: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Successful => "SUCCESSFUL",
            Verdict::Failed { .. } => "FAILED",
            Verdict::Timeout => "TIMEOUT",
            Verdict::MemOut => "MEMOUT",
            Verdict::ToolError { .. } => "ERROR",
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Failed { counterexample } => Some(counterexample),
            _ => None,
        }
    }
}

/// Sizes of the intermediate artifacts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PipelineStats {
    pub equations: usize,
    pub claims: usize,
    pub cnf_vars: u32,
    pub cnf_clauses: usize,
    pub decisions: u64,
    pub conflicts: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationResult {
    pub verdict: Verdict,
    pub wall_time_seconds: f64,
    /// Estimated from the sizes of the term graph, SSA system and CNF.
    pub peak_memory_kb: u64,
    pub stats: PipelineStats,
}

/// Which intermediate forms to keep alongside the verdict.
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub keep_goto: bool,
    pub keep_ssa: bool,
    pub keep_smtlib: bool,
    /// Stop after producing the SMT-LIB script; the verdict is then
    /// `Successful` only as a placeholder.
    pub skip_solve: bool,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub result: VerificationResult,
    pub goto: Option<GotoProgram>,
    pub ssa: Option<SsaSystem>,
    pub smtlib: Option<String>,
}

pub fn verify_file(path: &Path, config: &VerifierConfig) -> VerificationResult {
    verify_file_with(path, config, VerifyOptions::default()).result
}

pub fn verify_file_with(path: &Path, config: &VerifierConfig, opts: VerifyOptions) -> Verification {
    match std::fs::read_to_string(path) {
        Ok(text) => verify_source_with(&text, &path.display().to_string(), config, opts),
        Err(e) => Verification {
            result: VerificationResult {
                verdict: Verdict::ToolError {
                    message: format!("{}: {e}", path.display()),
                },
                wall_time_seconds: 0.0,
                peak_memory_kb: 0,
                stats: PipelineStats::default(),
            },
            goto: None,
            ssa: None,
            smtlib: None,
        },
    }
}

pub fn verify_source(source: &str, file: &str, config: &VerifierConfig) -> VerificationResult {
    verify_source_with(source, file, config, VerifyOptions::default()).result
}

pub fn verify_source_with(
    source: &str,
    file: &str,
    config: &VerifierConfig,
    opts: VerifyOptions,
) -> Verification {
    let start = Instant::now();
    let mut run = Run {
        opts,
        stats: PipelineStats::default(),
        peak_bytes: 0,
        goto: None,
        ssa: None,
        smtlib: None,
    };
    let verdict = match config.validate() {
        Err(message) => Verdict::ToolError { message },
        Ok(()) => {
            let outcome = catch_unwind(AssertUnwindSafe(|| {
                run.pipeline(source, file, config, start)
            }));
            match outcome {
                Ok(v) => v,
                Err(panic) => {
                    let what = panic
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "unknown panic".into());
                    Verdict::ToolError {
                        message: format!("internal error: {what}"),
                    }
                }
            }
        }
    };
    Verification {
        result: VerificationResult {
            verdict,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            peak_memory_kb: run.peak_bytes.div_ceil(1024) as u64,
            stats: run.stats,
        },
        goto: run.goto,
        ssa: run.ssa,
        smtlib: run.smtlib,
    }
}

struct Run {
    opts: VerifyOptions,
    stats: PipelineStats,
    peak_bytes: usize,
    goto: Option<GotoProgram>,
    ssa: Option<SsaSystem>,
    smtlib: Option<String>,
}

impl Run {
    fn pipeline(
        &mut self,
        source: &str,
        file: &str,
        config: &VerifierConfig,
        start: Instant,
    ) -> Verdict {
        let deadline = start + Duration::from_secs(config.timeout_seconds);
        let max_bytes = (config.mem_limit_kb as usize).saturating_mul(1024);
        let tool_error = |message: String| Verdict::ToolError { message };

        let ast = match frontend::load_source(source, file, config) {
            Ok(a) => a,
            Err(e) => return tool_error(e.to_string()),
        };
        let program = goto::lower_to_goto(&ast);
        let diags = goto::validate_goto(&program);
        if let Some(d) = diags.first() {
            return tool_error(format!("malformed GOTO program: {}", d.message));
        }
        if self.opts.keep_goto {
            self.goto = Some(program.clone());
        }

        let mut ssa = match symex::symex_until(&program, config, Some(deadline)) {
            Ok(s) => s,
            Err(SymexError::Timeout) => return Verdict::Timeout,
            Err(SymexError::MemOut) => return Verdict::MemOut,
            Err(e) => return tool_error(e.to_string()),
        };
        self.stats.equations = ssa.equations.len();
        self.stats.claims = ssa.claims.len();
        let root = match smt::encode(&mut ssa) {
            Ok(r) => r,
            Err(e) => return tool_error(e.to_string()),
        };
        self.peak_bytes = ssa.approx_bytes();
        if self.opts.keep_smtlib {
            self.smtlib = Some(smt::emit_smtlib(&ssa.pool, root));
        }
        if self.opts.keep_ssa {
            self.ssa = Some(ssa.clone());
        }
        if self.opts.skip_solve {
            return Verdict::Successful;
        }
        if Instant::now() >= deadline {
            return Verdict::Timeout;
        }

        let cnf = smt::bitblast(&ssa.pool, root);
        self.stats.cnf_vars = cnf.num_vars;
        self.stats.cnf_clauses = cnf.clauses.len();
        let cnf_bytes: usize = cnf.clauses.iter().map(|c| c.len() * 4 + 24).sum();
        self.peak_bytes = self.peak_bytes.max(ssa.approx_bytes() + cnf_bytes);
        if self.peak_bytes > max_bytes {
            return Verdict::MemOut;
        }
        let limits = SolveLimits {
            deadline: Some(deadline),
            max_bytes: Some(max_bytes.saturating_sub(self.peak_bytes)),
        };
        let result = match smt::sat_solve_limited(&cnf, limits) {
            Ok(r) => r,
            Err(SolveError::ResourceLimit(Resource::Time)) => return Verdict::Timeout,
            Err(SolveError::ResourceLimit(Resource::Memory)) => return Verdict::MemOut,
        };
        self.stats.decisions = result.stats.decisions;
        self.stats.conflicts = result.stats.conflicts;
        if !result.is_sat() {
            return Verdict::Successful;
        }
        match smt::eval_model(&result, &ssa, &cnf) {
            Ok(cex) => Verdict::Failed {
                counterexample: Box::new(cex),
            },
            Err(e) => tool_error(e.to_string()),
        }
    }
}

/// Renders a verdict as the checker prints it.
pub fn format_counterexample(r: &VerificationResult) -> String {
    match &r.verdict {
        Verdict::Successful => "VERIFICATION SUCCESSFUL".to_string(),
        Verdict::Failed { counterexample } => format_failure(counterexample),
        Verdict::Timeout => "VERIFICATION TIMEOUT".to_string(),
        Verdict::MemOut => "VERIFICATION MEMOUT".to_string(),
        Verdict::ToolError { message } => format!("ERROR: {message}"),
    }
}

fn format_failure(cex: &Counterexample) -> String {
    let mut out = String::from("VERIFICATION FAILED\n");
    let v = &cex.violated;
    let _ = writeln!(out, "Violated property: {}", v.message);
    let _ = writeln!(out, "  location: {}", v.loc.file_line());
    let _ = writeln!(out, "  property class: {}", v.class);
    if !cex.steps.is_empty() {
        out.push_str("Counterexample:\n");
    }
    for s in &cex.steps {
        let what = match &s.detail {
            StepDetail::Assignment { name, value } | StepDetail::Input { name, value } => {
                format!("{name} = {value}")
            }
            StepDetail::Call { callee, args } => format!("call {callee}({})", args.join(", ")),
        };
        let _ = writeln!(out, "State {}: {what} ({})", s.index, s.loc.file_line());
    }
    out.truncate(out.trim_end().len());
    out
}
