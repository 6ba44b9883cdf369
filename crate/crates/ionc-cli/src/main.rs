//! `ionc` command-line interface.
//!
//! Subcommands:
//!   compile     compile one OpenQASM 2.0 file to the restricted gate set
//!   bench       compile a directory of circuits and emit a CSV table
//!   check-rules run the decomposition-identity oracle suite
//!
//! Exit codes: 0 ok, 1 usage or internal error, 2 parse error,
//! 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use ionc::json::CircuitJson;
use ionc::pipeline::{compile, compile_naive, count_gates, CompileOptions, CompileReport};
use ionc::qasm::{lower_to_dag, parse_qasm, LowerStats};
use ionc::{CircuitDag, CompileError, QasmError};

#[derive(Parser)]
#[command(name = "ionc", version, about = "Circuit compiler for a shuttling-based trapped-ion processor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one .qasm file into the restricted native gate set
    Compile(CompileArgs),
    /// Compile every .qasm file under a directory and tabulate the counts
    Bench(BenchArgs),
    /// Run the decomposition-identity oracle suite
    CheckRules,
}

#[derive(Args)]
struct CompileArgs {
    /// Input OpenQASM 2.0 file
    input: PathBuf,
    /// Output JSON (circuit, block schedule, report)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Verify the compilation against the dense unitary oracle
    #[arg(long)]
    verify: bool,
    /// Qubit cap for dense verification
    #[arg(long, default_value_t = 10)]
    verify_cap: usize,
    /// Drop the terminal Rz gates produced by phase tracking
    #[arg(long)]
    drop_terminal_rz: bool,
    /// Use the naive per-gate substitution instead of the full pipeline
    #[arg(long)]
    naive: bool,
    /// With --naive: remove trivial redundancies before substituting
    #[arg(long)]
    naive_redundancies: bool,
    /// Write the compile report to a separate file
    #[arg(long)]
    report: Option<PathBuf>,
    /// Comma-separated pass list overriding the standard pipeline
    #[arg(long, value_delimiter = ',')]
    passes: Option<Vec<String>>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory scanned recursively for .qasm files
    dir: PathBuf,
    /// Output CSV path
    #[arg(long)]
    csv: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Verify each compilation against the oracle up to this qubit count
    #[arg(long, default_value_t = 10)]
    verify_cap: usize,
    /// Enable oracle verification during the run
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path too
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.downcast_ref::<QasmError>().is_some() {
                2
            } else if matches!(
                err.downcast_ref::<CompileError>(),
                Some(CompileError::VerificationFailed(_))
            ) {
                3
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Bench(args) => cmd_bench(args),
        Command::CheckRules => cmd_check_rules(),
    }
}

fn load_circuit(path: &Path) -> anyhow::Result<(CircuitDag, LowerStats)> {
    let text = std::fs::read_to_string(path)?;
    let program = parse_qasm(&text)?;
    let (dag, stats) = lower_to_dag(&program)?;
    Ok((dag, stats))
}

/// The full output document: compiled circuit, block schedule, report.
#[derive(Serialize)]
struct OutputJson {
    circuit: CircuitJson,
    schedule: Vec<ionc::json::ScheduleEntryJson>,
    report: CompileReport,
}

fn cmd_compile(args: CompileArgs) -> anyhow::Result<ExitCode> {
    let (dag, stats) = load_circuit(&args.input)?;
    let opts = CompileOptions {
        verify: args.verify,
        verify_qubit_cap: args.verify_cap,
        drop_terminal_rz: args.drop_terminal_rz,
        pass_override: args.passes.clone(),
        ..CompileOptions::default()
    };
    let (out, mut report) = if args.naive {
        compile_naive(dag, args.naive_redundancies, &opts)?
    } else {
        compile(dag, &opts)?
    };
    report.measures_stripped = stats.measures_stripped;
    report.barriers_stripped = stats.barriers_stripped;

    eprintln!(
        "{}: {} qubits, {}+{} gates in, {}+{} out ({} terminal Rz), verification: {}",
        args.input.display(),
        report.qubits,
        report.input_single_qubit,
        report.input_two_qubit,
        report.single_qubit,
        report.two_qubit,
        report.terminal_rz,
        report.verification,
    );

    if let Some(path) = &args.report {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if let Some(path) = &args.output {
        let doc = OutputJson {
            circuit: CircuitJson::from_dag(&out),
            schedule: report.schedule.clone(),
            report,
        };
        std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// One row of the benchmark table, mirroring the evaluation table layout:
/// name, qubits, original counts, compiled counts, naive counts, reduction.
#[derive(Serialize)]
struct BenchRow {
    name: String,
    q: usize,
    #[serde(rename = "1qg")]
    single: usize,
    #[serde(rename = "2qg")]
    two: usize,
    #[serde(rename = "compiled_1qg")]
    compiled_single: usize,
    #[serde(rename = "compiled_2qg")]
    compiled_two: usize,
    #[serde(rename = "naive_1qg")]
    naive_single: usize,
    #[serde(rename = "naive_2qg")]
    naive_two: usize,
    reduction_factor: String,
    ms_per_gate: String,
    error: String,
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(&args.dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().map(|x| x == "qasm").unwrap_or(false))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    if files.is_empty() {
        anyhow::bail!("no .qasm files under {}", args.dir.display());
    }

    let opts = CompileOptions {
        verify: args.verify,
        verify_qubit_cap: args.verify_cap,
        ..CompileOptions::default()
    };

    let rows: Vec<BenchRow> = files
        .par_iter()
        .map(|path| bench_one(path, &opts))
        .collect();

    let mut wtr = csv::Writer::from_path(&args.csv)?;
    let mut failures = 0usize;
    let mut reductions = Vec::new();
    for row in &rows {
        if !row.error.is_empty() {
            failures += 1;
        } else if let Ok(r) = row.reduction_factor.parse::<f64>() {
            reductions.push(r);
        }
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    let mean = if reductions.is_empty() {
        0.0
    } else {
        reductions.iter().sum::<f64>() / reductions.len() as f64
    };
    eprintln!(
        "{} circuits, {} failed; naive/full gate-count ratio: {:.2} average",
        rows.len(),
        failures,
        mean
    );
    Ok(ExitCode::SUCCESS)
}

fn bench_one(path: &Path, opts: &CompileOptions) -> BenchRow {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut row = BenchRow {
        name,
        q: 0,
        single: 0,
        two: 0,
        compiled_single: 0,
        compiled_two: 0,
        naive_single: 0,
        naive_two: 0,
        reduction_factor: String::new(),
        ms_per_gate: String::new(),
        error: String::new(),
    };
    let (dag, _) = match load_circuit(path) {
        Ok(x) => x,
        Err(e) => {
            row.error = format!("{e:#}");
            return row;
        }
    };
    row.q = dag.qubit_count();
    let (s, t) = count_gates(&dag, true);
    row.single = s;
    row.two = t;

    let started = Instant::now();
    let compiled = compile(dag.clone(), opts);
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    let report = match compiled {
        Ok((_, report)) => report,
        Err(e) => {
            row.error = format!("{e:#}");
            return row;
        }
    };
    row.compiled_single = report.single_qubit;
    row.compiled_two = report.two_qubit;
    if s + t > 0 {
        row.ms_per_gate = format!("{:.5}", elapsed / (s + t) as f64);
    }

    match compile_naive(dag, false, opts) {
        Ok((_, naive)) => {
            row.naive_single = naive.single_qubit;
            row.naive_two = naive.two_qubit;
            let full = report.single_qubit + report.two_qubit;
            let nv = naive.single_qubit + naive.two_qubit;
            if full > 0 {
                row.reduction_factor = format!("{:.3}", nv as f64 / full as f64);
            }
        }
        Err(e) => row.error = format!("naive: {e:#}"),
    }
    row
}

fn cmd_check_rules() -> anyhow::Result<ExitCode> {
    let checks = ionc::check::verify_all_rules();
    let mut failed = 0usize;
    for c in &checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        if !c.passed {
            failed += 1;
        }
    }
    println!("{}/{} rule identities hold", checks.len() - failed, checks.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
