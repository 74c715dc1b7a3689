//! Command-line front end for the Collatz nilpotency verifiers.
//!
//! Exit status: 0 on success / all checks passed, 1 when a verification
//! fails (a counterexample was found), 2 on usage or input errors.
//!
//! Data outputs (matrices, tables) are byte-reproducible: no timestamps,
//! `\n` line endings, entries in sorted order. Timing appears only in
//! self-test reports, which are explicitly marked as timed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use collatz_core::graph::{build_digraph, CycleWitness, GraphError, GraphVariant};
use collatz_core::matrix::market::write_matrix_market;
use collatz_core::matrix::{build_a, build_c, trace_table, MatrixNilpotency};
use collatz_core::verify::{
    check_alves_condition, check_block_power_formula, check_block_trace_identity,
    check_mutation_sensitivity, check_positive_traces, check_walk_counts,
    cross_check_nilpotency, walk_count_oracle,
};
use collatz_core::{classify_trajectory, verify_range, Classification, Nat};

/// The matrix engine is the exact oracle, not the scaling path; past this
/// dimension the graph engine is the supported route. The cap can be raised
/// for oracle runs via `COLLATZ_MATRIX_DIM_CAP`.
const DEFAULT_MATRIX_DIM_CAP: u64 = 4096;

#[derive(Parser)]
#[command(
    name = "collatz",
    version,
    about = "Truncated Collatz digraphs, their adjacency matrices, and nilpotency verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a truncated adjacency matrix (Matrix Market) or digraph (DOT)
    Build {
        /// Truncation bound
        #[arg(long)]
        n: u64,
        /// a: full matrix/digraph on {1..n}; c: vertices 1 and 2 deleted
        #[arg(long, value_enum, ignore_case = true)]
        which: Which,
        #[arg(long, value_enum, ignore_case = true)]
        format: OutputFormat,
        /// Write to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate trace(A_n^p) for p = 1..pmax against the 0/2 pattern
    Trace {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nilpotency index of the deleted-vertex matrix, by either engine
    Nilpotency {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, ignore_case = true, default_value_t = Method::Both)]
        method: Method,
    },
    /// CSV of nilpotency indices over a range of truncations
    IndexTable {
        #[arg(long)]
        nmin: u64,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-pass acyclicity scan of the deleted-vertex graph up to nmax
    VerifyRange {
        #[arg(long)]
        nmax: u64,
    },
    /// Iterate one orbit under a step cap and classify it
    Trajectory {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1000)]
        cap: u64,
    },
    /// Count directed walks of length p between two vertices
    Walks {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Run the built-in verification battery, one JSON report per line
    SelfTest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    A,
    C,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Mm,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Graph,
    Matrix,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Build {
            n,
            which,
            format,
            out,
        } => cmd_build(n, which, format, out),
        Command::Trace { n, pmax, out } => cmd_trace(n, pmax, out),
        Command::Nilpotency { n, method } => cmd_nilpotency(n, method),
        Command::IndexTable {
            nmin,
            nmax,
            step,
            out,
        } => cmd_index_table(nmin, nmax, step, out),
        Command::VerifyRange { nmax } => cmd_verify_range(nmax),
        Command::Trajectory { n, cap } => cmd_trajectory(n, cap),
        Command::Walks { n, p, from, to } => cmd_walks(n, p, from, to),
        Command::SelfTest => cmd_self_test(),
    }
}

fn parse_n(n: u64) -> Result<Nat, String> {
    Nat::new(n).map_err(|e| e.to_string())
}

fn matrix_dim_cap() -> Result<u64, String> {
    match std::env::var("COLLATZ_MATRIX_DIM_CAP") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|e| format!("COLLATZ_MATRIX_DIM_CAP must be an integer: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MATRIX_DIM_CAP),
        Err(e) => Err(format!("COLLATZ_MATRIX_DIM_CAP is unreadable: {e}")),
    }
}

fn check_matrix_dim(dim: u64) -> Result<(), String> {
    let cap = matrix_dim_cap()?;
    if dim > cap {
        return Err(format!(
            "matrix engine is capped at dimension {cap} (requested {dim}); \
             use the graph engine for large n, or raise COLLATZ_MATRIX_DIM_CAP \
             for oracle runs"
        ));
    }
    Ok(())
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn render_cycle(w: &CycleWitness) -> String {
    let mut s = w
        .vertices
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" -> ");
    let _ = write!(s, " -> {}", w.vertices[0]);
    s
}

fn cmd_build(
    n: u64,
    which: Which,
    format: OutputFormat,
    out: Option<PathBuf>,
) -> Result<ExitCode, String> {
    let n = parse_n(n)?;
    let content = match format {
        OutputFormat::Mm => {
            let matrix = match which {
                Which::A => {
                    check_matrix_dim(n.get())?;
                    build_a(n)
                }
                Which::C => {
                    check_matrix_dim(n.get().saturating_sub(2))?;
                    build_c(n).map_err(|e| e.to_string())?
                }
            };
            write_matrix_market(&matrix)
        }
        OutputFormat::Dot => {
            let variant = match which {
                Which::A => GraphVariant::Full,
                Which::C => GraphVariant::CSub,
            };
            build_digraph(n, variant).map_err(|e| e.to_string())?.to_dot()
        }
    };
    emit(out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(n: u64, pmax: u64, out: Option<PathBuf>) -> Result<ExitCode, String> {
    let n = parse_n(n)?;
    if pmax < 1 {
        return Err("pmax must be at least 1".into());
    }
    check_matrix_dim(n.get())?;
    let table = trace_table(n, pmax).map_err(|e| e.to_string())?;
    let mut csv = String::from("p,trace,expected,status\n");
    for entry in &table.entries {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            entry.p,
            entry.trace,
            entry.expected,
            if entry.passes() { "pass" } else { "fail" }
        );
    }
    emit(out.as_ref(), &csv)?;
    Ok(if table.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_nilpotency(n: u64, method: Method) -> Result<ExitCode, String> {
    let n = parse_n(n)?;
    if n.get() < 3 {
        return Err("nilpotency needs n >= 3 (the deleted-vertex matrix must be nonempty)".into());
    }

    let mut failed = false;
    let mut graph_index = None;
    let mut matrix_index = None;

    if method == Method::Graph || method == Method::Both {
        let g = build_digraph(n, GraphVariant::CSub).map_err(|e| e.to_string())?;
        match g.topological_certificate() {
            Ok(cert) => {
                println!("graph index: {}", cert.index);
                graph_index = Some(cert.index);
            }
            Err(GraphError::CycleExists(w)) => {
                println!("graph: cycle found: {}", render_cycle(&w));
                failed = true;
            }
            Err(e) => return Err(e.to_string()),
        }
    }

    if method == Method::Matrix || method == Method::Both {
        check_matrix_dim(n.get() - 2)?;
        let c = build_c(n).map_err(|e| e.to_string())?;
        match c.nilpotency_index().map_err(|e| e.to_string())? {
            MatrixNilpotency::Nilpotent { index } => {
                println!("matrix index: {index}");
                matrix_index = Some(index);
            }
            MatrixNilpotency::NotNilpotent => {
                println!("matrix: not nilpotent");
                failed = true;
            }
        }
    }

    if method == Method::Both && !failed && graph_index != matrix_index {
        println!(
            "MISMATCH: graph {} vs matrix {}",
            graph_index.unwrap(),
            matrix_index.unwrap()
        );
        failed = true;
    }

    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_index_table(
    nmin: u64,
    nmax: u64,
    step: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, String> {
    if nmin < 3 {
        return Err("nmin must be at least 3".into());
    }
    if nmin > nmax {
        return Err("nmin must not exceed nmax".into());
    }
    if step < 1 {
        return Err("step must be at least 1".into());
    }
    let mut csv = String::from("n,index,deepest_vertex\n");
    let mut n = nmin;
    while n <= nmax {
        match verify_range(parse_n(n)?) {
            Ok(report) => {
                let _ = writeln!(csv, "{},{},{}", n, report.index(), report.deepest_vertex);
            }
            Err(GraphError::CycleExists(w)) => {
                eprintln!("cycle found at n = {n}: {}", render_cycle(&w));
                return Ok(ExitCode::from(1));
            }
            Err(e) => return Err(e.to_string()),
        }
        n += step;
    }
    emit(out.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_range(nmax: u64) -> Result<ExitCode, String> {
    if nmax < 3 {
        return Err("nmax must be at least 3".into());
    }
    match verify_range(parse_n(nmax)?) {
        Ok(report) => {
            println!("acyclic: true");
            println!("n_max: {}", report.n_max);
            println!("vertices: {}", report.vertex_count);
            println!("max_depth: {}", report.max_depth);
            println!("deepest_vertex: {}", report.deepest_vertex);
            println!("index: {}", report.index());
            Ok(ExitCode::SUCCESS)
        }
        Err(GraphError::CycleExists(w)) => {
            println!("acyclic: false");
            println!("cycle: {}", render_cycle(&w));
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_trajectory(n: u64, cap: u64) -> Result<ExitCode, String> {
    let n = parse_n(n)?;
    if cap < 1 {
        return Err("cap must be at least 1".into());
    }
    let record = classify_trajectory(n, cap).map_err(|e| e.to_string())?;
    println!("start: {}", record.start);
    match record.classification {
        Classification::Converged {
            total_stopping_time,
        } => {
            println!("classification: converged");
            println!("total_stopping_time: {total_stopping_time}");
        }
        Classification::CycleDetected {
            entry_offset,
            period,
        } => {
            println!("classification: cycle");
            println!("entry_offset: {entry_offset}");
            println!("period: {period}");
        }
        Classification::Undecided { cap } => {
            println!("classification: undecided");
            println!("cap: {cap}");
        }
    }
    let steps = record
        .steps
        .iter()
        .map(|s| s.get().to_string())
        .collect::<Vec<_>>()
        .join(",");
    println!("steps: {steps}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_walks(n: u64, p: u64, from: u64, to: u64) -> Result<ExitCode, String> {
    let n = parse_n(n)?;
    if p < 1 {
        return Err("p must be at least 1".into());
    }
    let count = walk_count_oracle(n, p, from, to).map_err(|e| e.to_string())?;
    println!("{count}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_self_test() -> Result<ExitCode, String> {
    let reports = [
        check_alves_condition(2..=60, 40),
        check_block_trace_identity(3..=60, 30),
        check_block_power_formula(3..=20, 6),
        cross_check_nilpotency(3..=120),
        check_walk_counts(20, 8),
        check_positive_traces(Nat::new(120).unwrap(), 60),
        check_mutation_sensitivity(Nat::new(40).unwrap(), 10),
    ];
    let mut all_pass = true;
    for report in &reports {
        println!("{}", report.to_json());
        all_pass &= report.passed();
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
