use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use miniqt_bmc::config::VerifierConfig;
use miniqt_bmc::harness::{self, Category, Verdict, VerifyOptions};

const EXIT_SUCCESSFUL: u8 = 0;
const EXIT_TOOL_ERROR: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_EXTERNAL: u8 = 3;
const EXIT_FAILED: u8 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "miniqt-bmc",
    version,
    about = "Bounded model checker for MiniQt programs"
)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Program to verify.
    #[arg(required = true)]
    file: Option<PathBuf>,

    #[command(flatten)]
    verifier: VerifierArgs,

    /// Print the GOTO program before verifying.
    #[arg(long)]
    show_goto: bool,

    /// Print the SSA equations and claims before solving.
    #[arg(long)]
    show_ssa: bool,

    /// Write the verification condition as an SMT-LIB2 script.
    #[arg(long, value_name = "PATH")]
    smt_out: Option<PathBuf>,

    /// `external-stdout` prints the SMT-LIB2 script instead of solving.
    #[arg(long, value_enum, default_value_t = Solver::Internal)]
    solver: Solver,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every case of a benchmark manifest and report outcome rates.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Manifest listing `<path> <TRUE|FALSE> [message]` per line.
    manifest: PathBuf,

    /// Write the machine-readable JSON report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Number of cases verified in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    #[command(flatten)]
    verifier: VerifierArgs,
}

#[derive(Args, Debug)]
struct VerifierArgs {
    /// Loop unwinding and recursion bound.
    #[arg(long, default_value_t = 10)]
    unwind: u32,

    /// Cut paths at the bound instead of reporting a violation.
    #[arg(long)]
    no_unwinding_assertions: bool,

    /// Directory searched for `#include <Name>` models (repeatable).
    #[arg(short = 'I', value_name = "DIR")]
    include: Vec<PathBuf>,

    /// Memory limit in kilobytes.
    #[arg(long, value_name = "KB", default_value_t = 14_000_000)]
    memlimit: u64,

    /// Time limit in seconds.
    #[arg(long, value_name = "SEC", default_value_t = 600)]
    timeout: u64,

    /// QTimer rejects a zero interval too.
    #[arg(long)]
    strict_positive_interval: bool,

    /// Capacity of container models.
    #[arg(long, value_name = "N", default_value_t = 10)]
    container_capacity: u32,

    /// Bit width of `int`.
    #[arg(long, value_name = "BITS", default_value_t = 32)]
    int_width: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Solver {
    Internal,
    ExternalStdout,
}

impl VerifierArgs {
    fn config(&self) -> VerifierConfig {
        VerifierConfig {
            unwind: self.unwind,
            unwinding_assertions: !self.no_unwinding_assertions,
            include_paths: self.include.clone(),
            container_capacity: self.container_capacity,
            int_width: self.int_width,
            strict_positive_interval: self.strict_positive_interval,
            timeout_seconds: self.timeout,
            mem_limit_kb: self.memlimit,
            ..VerifierConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Some(Command::Suite(args)) => run_suite(args),
        None => run_single(&cli),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ERROR: {e:#}");
            ExitCode::from(EXIT_TOOL_ERROR)
        }
    }
}

fn run_single(cli: &Cli) -> Result<u8> {
    let file = cli.file.as_ref().context("no input file")?;
    let config = cli.verifier.config();
    let external = cli.solver == Solver::ExternalStdout;
    let opts = VerifyOptions {
        keep_goto: cli.show_goto,
        keep_ssa: cli.show_ssa,
        keep_smtlib: external || cli.smt_out.is_some(),
        skip_solve: external,
    };
    let v = harness::verify_file_with(file, &config, opts);
    if let Some(g) = &v.goto {
        println!("{g}");
    }
    if let Some(s) = &v.ssa {
        println!("{s}");
    }
    if let (Some(path), Some(script)) = (&cli.smt_out, &v.smtlib) {
        std::fs::write(path, script).with_context(|| format!("writing {}", path.display()))?;
    }
    if external {
        if let Verdict::ToolError { message } = &v.result.verdict {
            eprintln!("ERROR: {message}");
            return Ok(EXIT_TOOL_ERROR);
        }
        print!("{}", v.smtlib.as_deref().unwrap_or_default());
        return Ok(EXIT_EXTERNAL);
    }
    let text = harness::format_counterexample(&v.result);
    let code = match &v.result.verdict {
        Verdict::Successful => EXIT_SUCCESSFUL,
        Verdict::Failed { .. } => EXIT_FAILED,
        Verdict::Timeout | Verdict::MemOut => EXIT_RESOURCE,
        Verdict::ToolError { .. } => EXIT_TOOL_ERROR,
    };
    if code == EXIT_TOOL_ERROR {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
    Ok(code)
}

fn run_suite(args: &SuiteArgs) -> Result<u8> {
    let config = args.verifier.config();
    config.validate().map_err(anyhow::Error::msg)?;
    let report = harness::run_suite(&args.manifest, &config, args.jobs)?;
    println!("{}", report.to_table());
    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let all_expected = report.counts.get(Category::Successful) == report.total;
    Ok(if all_expected {
        EXIT_SUCCESSFUL
    } else {
        EXIT_FAILED
    })
}
