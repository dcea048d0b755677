//! Verification driver, counterexample printing and the benchmark-suite
//! runner.

pub mod rates;
pub mod suite;
pub mod verify;

pub use rates::{compute_rates, rate, Category, Counts, Rate, RateError, Rates};
pub use suite::{
    classify, load_manifest, parse_manifest, run_cases, run_suite, BenchmarkCase, CaseOutcome,
    Expectation, SuiteError, SuiteReport,
};
pub use verify::{
    format_counterexample, verify_file, verify_file_with, verify_source, verify_source_with,
    PipelineStats, Verdict, Verification, VerificationResult, VerifyOptions,
};
