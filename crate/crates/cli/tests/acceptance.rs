//! Acceptance suite: every release-gating property, one test per criterion,
//! each printing a single pass/fail line (visible with `--nocapture`).
//!
//! Run with: cargo test -p collatz-cli --test acceptance -- --nocapture

use std::process::Command;
use std::time::{Duration, Instant};

use collatz_core::graph::{build_digraph, GraphVariant};
use collatz_core::matrix::{build_c, MatrixNilpotency};
use collatz_core::verify::{
    check_alves_condition, check_block_power_formula, check_block_trace_identity,
    check_mutation_sensitivity, check_walk_counts, cross_check_nilpotency,
    generate_cycle_mutants,
};
use collatz_core::{
    classify_trajectory, total_stopping_time, verify_range, Classification, Nat, StoppingTime,
};

fn nat(v: u64) -> Nat {
    Nat::new(v).unwrap()
}

const BUDGET: Duration = Duration::from_secs(60);

#[test]
fn criterion_1_trace_condition_exact() {
    let started = Instant::now();
    for n in 2..=200u64 {
        let report = check_alves_condition(n..=n, 2 * n);
        assert!(
            report.passed(),
            "trace pattern violated: {:?}",
            report.counterexample
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    println!(
        "acceptance 1 trace_condition(n=2..200, p=1..2n): PASS ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_2_matrix_nilpotency_desk_scale() {
    let started = Instant::now();
    let mut indices = Vec::new();
    for n in 3..=300u64 {
        let c = build_c(nat(n)).unwrap();
        assert!(
            c.pow(n - 2).unwrap().is_zero(),
            "C_{n}^{} is not zero",
            n - 2
        );
        match c.nilpotency_index().unwrap() {
            MatrixNilpotency::Nilpotent { index } => {
                assert!(index <= n - 2);
                indices.push((n, index));
            }
            MatrixNilpotency::NotNilpotent => panic!("C_{n} reported not nilpotent"),
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}, budget {BUDGET:?}");
    let table = indices
        .iter()
        .map(|(n, index)| format!("{n}:{index}"))
        .collect::<Vec<_>>()
        .join(" ");
    println!("nilpotency indices (n:index): {table}");
    println!(
        "acceptance 2 matrix_nilpotency(n=3..300): PASS ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_3_range_scan_ten_million() {
    let started = Instant::now();
    let report = verify_range(nat(10_000_000)).expect("acyclic at 10^7");
    let elapsed = started.elapsed();

    assert_eq!(report.n_max, 10_000_000);
    assert_eq!(report.vertex_count, 9_999_998);
    // cross-checked against an independent memoized scan
    assert_eq!(report.max_depth, 268);
    assert_eq!(report.deepest_vertex, 5_905_692);

    // spot indices, hand-traced and confirmed by brute-force matrix powers
    for (n, index) in [(3u64, 1u64), (5, 2), (10, 5)] {
        let cert = build_digraph(nat(n), GraphVariant::CSub)
            .unwrap()
            .topological_certificate()
            .unwrap();
        assert_eq!(cert.index, index, "index of the n = {n} truncation");
    }

    assert!(
        elapsed < BUDGET,
        "single-threaded scan took {elapsed:?}, budget {BUDGET:?}"
    );
    println!(
        "acceptance 3 range_scan(n_max=10^7): PASS ({} ms, max_depth {} at {})",
        elapsed.as_millis(),
        report.max_depth,
        report.deepest_vertex
    );
}

#[test]
fn criterion_4_engine_equivalence() {
    let started = Instant::now();
    let report = cross_check_nilpotency(3..=200);
    assert!(
        report.passed(),
        "engines disagree: {:?}",
        report.counterexample
    );
    println!(
        "acceptance 4 engine_equivalence(n=3..200): PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_5_block_identity() {
    let started = Instant::now();
    let traces = check_block_trace_identity(3..=100, 50);
    assert!(
        traces.passed(),
        "trace additivity violated: {:?}",
        traces.counterexample
    );
    let entrywise = check_block_power_formula(3..=20, 6);
    assert!(
        entrywise.passed(),
        "block power formula violated: {:?}",
        entrywise.counterexample
    );
    println!(
        "acceptance 5 block_identity(traces n=3..100 p=1..50; entries n=3..20 p=1..6): PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_6_walk_count_oracle() {
    let started = Instant::now();
    let report = check_walk_counts(30, 10);
    assert!(
        report.passed(),
        "walk counts diverge from power entries: {:?}",
        report.counterexample
    );
    println!(
        "acceptance 6 walk_count_oracle(n<=30, p<=10, all pairs, 0/1 entries): PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_7_mutation_sensitivity() {
    let started = Instant::now();
    let mutants = generate_cycle_mutants(nat(50), 20);
    assert_eq!(mutants.len(), 20);
    assert!(mutants.iter().all(|m| m.n <= 50));

    let report = check_mutation_sensitivity(nat(50), 20);
    assert!(
        report.passed(),
        "a detector missed a mutant: {:?}",
        report.counterexample
    );
    println!(
        "acceptance 7 mutation_sensitivity(20 mutants, n<=50): PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_8_trajectory_checks() {
    let started = Instant::now();
    for (n, cap, expected) in [(2u64, 10u64, 1u64), (3, 10, 5), (16, 10, 4), (27, 1000, 70)] {
        assert_eq!(
            total_stopping_time(nat(n), cap).unwrap(),
            StoppingTime::Converged(expected),
            "stopping time of {n}"
        );
    }
    let record = classify_trajectory(nat(1), 10).unwrap();
    assert_eq!(
        record.classification,
        Classification::CycleDetected {
            entry_offset: 0,
            period: 2
        }
    );
    println!(
        "acceptance 8 trajectory_checks: PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_9_cli_determinism() {
    let started = Instant::now();
    let commands: [&[&str]; 5] = [
        &["build", "--n", "50", "--which", "c", "--format", "mm"],
        &["build", "--n", "30", "--which", "a", "--format", "dot"],
        &["trace", "--n", "40", "--pmax", "20"],
        &["nilpotency", "--n", "100", "--method", "both"],
        &["index-table", "--nmin", "3", "--nmax", "60", "--step", "3"],
    ];
    for args in commands {
        let runs: Vec<_> = (0..3)
            .map(|_| {
                Command::new(env!("CARGO_BIN_EXE_collatz"))
                    .args(args)
                    .output()
                    .expect("binary runs")
            })
            .collect();
        for run in &runs {
            assert_eq!(run.status.code(), Some(0), "command {args:?} failed");
        }
        assert!(
            runs.windows(2).all(|w| w[0].stdout == w[1].stdout),
            "output of {args:?} varies across runs"
        );
        assert!(!runs[0].stdout.is_empty());
    }
    println!(
        "acceptance 9 cli_determinism(3 runs x 5 commands): PASS ({} ms)",
        started.elapsed().as_millis()
    );
}
