//! Benchmark manifests, case classification and suite reports.

use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::config::VerifierConfig;

use super::rates::{compute_rates, Category, Counts, Rates};
use super::verify::{verify_file, Verdict, VerificationResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "expect", rename_all = "kebab-case")]
pub enum Expectation {
    Successful,
    Failed { message: Option<String> },
}

impl Expectation {
    pub fn label(&self) -> &'static str {
        match self {
            Expectation::Successful => "TRUE",
            Expectation::Failed { .. } => "FALSE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchmarkCase {
    /// As written in the manifest.
    pub path: String,
    #[serde(skip)]
    pub resolved: PathBuf,
    pub expected: Expectation,
    pub description: String,
    #[serde(skip)]
    pub line: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("manifest line {line}: {message}")]
    Syntax { line: u32, message: String },
    #[error("manifest line {line}: case file {} does not exist", path.display())]
    MissingCase { line: u32, path: PathBuf },
    #[error("manifest lists no cases")]
    Empty,
}

/// Parses a manifest. Each non-blank line not starting with `#` is
/// `<path> <TRUE|FALSE> ["expected message substring"] [# description]`.
/// `TRUE` marks a correct program. Paths are relative to `root`.
pub fn parse_manifest(text: &str, root: &Path) -> Result<Vec<BenchmarkCase>, SuiteError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u32 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (fields, description) = match trimmed.split_once(" #") {
            Some((f, d)) => (f.trim(), d.trim().to_string()),
            None => (trimmed, String::new()),
        };
        let syntax = |message: String| SuiteError::Syntax { line, message };
        let (path, rest) = fields
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax("expected `<path> <TRUE|FALSE>`".into()))?;
        let rest = rest.trim_start();
        let (flag, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let tail = tail.trim();
        let message = if tail.is_empty() {
            None
        } else {
            let unquoted = tail
                .strip_prefix('"')
                .and_then(|t| t.strip_suffix('"'))
                .unwrap_or(tail);
            Some(unquoted.to_string())
        };
        let expected = match flag {
            "TRUE" if message.is_some() => {
                return Err(syntax("a TRUE case takes no expected message".into()));
            }
            "TRUE" => Expectation::Successful,
            "FALSE" => Expectation::Failed { message },
            other => return Err(syntax(format!("expected TRUE or FALSE, found `{other}`"))),
        };
        let resolved = root.join(path);
        if !resolved.is_file() {
            return Err(SuiteError::MissingCase {
                line,
                path: resolved,
            });
        }
        cases.push(BenchmarkCase {
            path: path.to_string(),
            resolved,
            expected,
            description,
            line,
        });
    }
    if cases.is_empty() {
        return Err(SuiteError::Empty);
    }
    Ok(cases)
}

pub fn load_manifest(path: &Path) -> Result<Vec<BenchmarkCase>, SuiteError> {
    let text = std::fs::read_to_string(path).map_err(|e| SuiteError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_manifest(&text, &root)
}

/// Maps an expectation and a verdict to an outcome category.
pub fn classify(expected: &Expectation, actual: &Verdict) -> Category {
    match (expected, actual) {
        (_, Verdict::ToolError { .. }) => Category::Failed,
        (_, Verdict::Timeout) => Category::Timeout,
        (_, Verdict::MemOut) => Category::MemOut,
        (Expectation::Successful, Verdict::Successful) => Category::Successful,
        (Expectation::Successful, Verdict::Failed { .. }) => Category::FalseIncorrect,
        (Expectation::Failed { .. }, Verdict::Successful) => Category::FalseCorrect,
        (Expectation::Failed { message }, Verdict::Failed { counterexample }) => match message {
            Some(m) if !counterexample.violated.message.contains(m.as_str()) => {
                Category::WrongProperty
            }
            _ => Category::Successful,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub path: String,
    pub expected: Expectation,
    pub actual: &'static str,
    /// Violated property for failures, diagnostic for tool errors.
    pub detail: Option<String>,
    pub category: Category,
    pub wall_time_seconds: f64,
    pub peak_memory_kb: u64,
}

impl CaseOutcome {
    fn new(case: &BenchmarkCase, r: &VerificationResult) -> Self {
        let detail = match &r.verdict {
            Verdict::Failed { counterexample } => Some(format!(
                "{} ({})",
                counterexample.violated.message,
                counterexample.violated.loc.file_line()
            )),
            Verdict::ToolError { message } => Some(message.clone()),
            _ => None,
        };
        CaseOutcome {
            path: case.path.clone(),
            expected: case.expected.clone(),
            actual: r.verdict.name(),
            detail,
            category: classify(&case.expected, &r.verdict),
            wall_time_seconds: r.wall_time_seconds,
            peak_memory_kb: r.peak_memory_kb,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    /// In manifest order.
    pub cases: Vec<CaseOutcome>,
    pub total: u64,
    pub counts: Counts,
    pub rates: Rates,
    pub total_wall_time_seconds: f64,
}

impl SuiteReport {
    pub fn from_outcomes(
        cases: Vec<CaseOutcome>,
        total_wall_time_seconds: f64,
    ) -> Result<Self, SuiteError> {
        let mut counts = Counts::default();
        for c in &cases {
            counts.add(c.category);
        }
        let rates = compute_rates(&counts).map_err(|_| SuiteError::Empty)?;
        Ok(SuiteReport {
            total: cases.len() as u64,
            cases,
            counts,
            rates,
            total_wall_time_seconds,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text table: one row per case, then the category summary.
    pub fn to_table(&self) -> String {
        let width = self
            .cases
            .iter()
            .map(|c| c.path.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<8}  {:<10}  {:<15}  {:>8}",
            "case", "expected", "actual", "category", "time(s)"
        );
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{:<width$}  {:<8}  {:<10}  {:<15}  {:>8.3}",
                c.path,
                c.expected.label(),
                c.actual,
                c.category.label(),
                c.wall_time_seconds
            );
        }
        out.push('\n');
        for cat in Category::ALL {
            let _ = writeln!(
                out,
                "{:<15}  {:>4} / {}  {:>8}",
                cat.label(),
                self.counts.get(cat),
                self.total,
                self.rates.get(cat).to_string()
            );
        }
        let _ = write!(
            out,
            "total wall time: {:.2} s",
            self.total_wall_time_seconds
        );
        out
    }
}

/// Verifies every case with up to `jobs` worker threads.
pub fn run_cases(
    cases: &[BenchmarkCase],
    config: &VerifierConfig,
    jobs: usize,
) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CaseOutcome>>> = Mutex::new(vec![None; cases.len()]);
    let workers = jobs.clamp(1, cases.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cases.get(i) else { break };
                let r = verify_file(&case.resolved, config);
                let outcome = CaseOutcome::new(case, &r);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(outcome);
            });
        }
    });
    let cases = results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|o| o.expect("every case ran"))
        .collect();
    SuiteReport::from_outcomes(cases, start.elapsed().as_secs_f64())
}

pub fn run_suite(
    manifest: &Path,
    config: &VerifierConfig,
    jobs: usize,
) -> Result<SuiteReport, SuiteError> {
    let cases = load_manifest(manifest)?;
    run_cases(&cases, config, jobs)
}
