//! End-to-end tests of the binary: outputs, files, and exit codes.

use std::process::{Command, Output};

fn collatz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collatz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn trace_table_golden() {
    let out = collatz(&["trace", "--n", "2", "--pmax", "4"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "p,trace,expected,status\n1,0,0,pass\n2,2,2,pass\n3,0,0,pass\n4,2,2,pass\n"
    );
}

#[test]
fn build_matrix_market_golden() {
    let out = collatz(&["build", "--n", "5", "--which", "c", "--format", "mm"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "%%MatrixMarket matrix coordinate integer general\n%% index_offset: 3\n3 3 1\n3 5 1\n"
    );
}

#[test]
fn build_dot_golden() {
    let out = collatz(&["build", "--n", "5", "--which", "c", "--format", "dot"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "digraph csub_5 {\n    3 -> 5;\n    4;\n    5;\n}\n"
    );

    let full = collatz(&["build", "--n", "2", "--which", "a", "--format", "dot"]);
    assert_eq!(
        stdout_of(&full),
        "digraph full_2 {\n    1 -> 2;\n    2 -> 1;\n}\n"
    );
}

#[test]
fn nilpotency_both_engines() {
    let out = collatz(&["nilpotency", "--n", "10", "--method", "both"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_of(&out), "graph index: 5\nmatrix index: 5\n");

    let graph_only = collatz(&["nilpotency", "--n", "10", "--method", "graph"]);
    assert_eq!(stdout_of(&graph_only), "graph index: 5\n");
}

#[test]
fn index_table_golden() {
    let out = collatz(&["index-table", "--nmin", "3", "--nmax", "5"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "n,index,deepest_vertex\n3,1,3\n4,1,3\n5,2,3\n"
    );

    let stepped = collatz(&["index-table", "--nmin", "3", "--nmax", "10", "--step", "7"]);
    assert_eq!(
        stdout_of(&stepped),
        "n,index,deepest_vertex\n3,1,3\n10,5,6\n"
    );

    let single = collatz(&["index-table", "--nmin", "3", "--nmax", "3"]);
    assert_eq!(stdout_of(&single), "n,index,deepest_vertex\n3,1,3\n");
}

#[test]
fn value_enums_accept_either_case() {
    let upper = collatz(&["build", "--n", "5", "--which", "C", "--format", "mm"]);
    let lower = collatz(&["build", "--n", "5", "--which", "c", "--format", "mm"]);
    assert_eq!(exit_code(&upper), 0);
    assert_eq!(upper.stdout, lower.stdout);
}

#[test]
fn verify_range_report() {
    let out = collatz(&["verify-range", "--nmax", "10"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "acyclic: true\nn_max: 10\nvertices: 8\nmax_depth: 4\ndeepest_vertex: 6\nindex: 5\n"
    );
}

#[test]
fn trajectory_reports_the_trivial_cycle() {
    let out = collatz(&["trajectory", "--n", "1", "--cap", "10"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "start: 1\nclassification: cycle\nentry_offset: 0\nperiod: 2\nsteps: 1,2,1\n"
    );
}

#[test]
fn trajectory_undecided_under_short_cap() {
    let out = collatz(&["trajectory", "--n", "3", "--cap", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "start: 3\nclassification: undecided\ncap: 2\nsteps: 3,5,8\n"
    );
}

#[test]
fn walk_counts() {
    for (args, expected) in [
        (["walks", "--n", "5", "--p", "2", "--from", "4", "--to", "1"], "1\n"),
        (["walks", "--n", "5", "--p", "1", "--from", "3", "--to", "4"], "0\n"),
        (["walks", "--n", "2", "--p", "2", "--from", "1", "--to", "1"], "1\n"),
    ] {
        let out = collatz(&args);
        assert_eq!(exit_code(&out), 0);
        assert_eq!(stdout_of(&out), expected);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["build", "--n", "0", "--which", "a", "--format", "mm"],
        vec!["build", "--n", "2", "--which", "c", "--format", "mm"],
        vec!["nilpotency", "--n", "2"],
        vec!["trace", "--n", "1", "--pmax", "4"],
        vec!["trace", "--n", "2", "--pmax", "0"],
        vec!["index-table", "--nmin", "2", "--nmax", "5"],
        vec!["index-table", "--nmin", "5", "--nmax", "3"],
        vec!["index-table", "--nmin", "3", "--nmax", "5", "--step", "0"],
        vec!["verify-range", "--nmax", "2"],
        vec!["walks", "--n", "5", "--p", "1", "--from", "6", "--to", "1"],
        vec!["walks", "--n", "5", "--p", "0", "--from", "4", "--to", "1"],
        vec!["no-such-command"],
        vec!["trace", "--n", "2"],
    ] {
        let out = collatz(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?} should be a usage error");
        assert!(!out.stderr.is_empty(), "usage error should explain itself");
    }
}

#[test]
fn trajectory_overflow_is_a_distinct_input_error() {
    // odd start whose 3n+1 leaves u64; must not masquerade as undecided
    let n = (u64::MAX / 3).to_string();
    let out = collatz(&["trajectory", "--n", &n, "--cap", "10"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow"));
    assert!(!stdout_of(&out).contains("undecided"));
}

#[test]
fn matrix_dim_cap_is_enforced_and_overridable() {
    let denied = collatz(&["trace", "--n", "5000", "--pmax", "1"]);
    assert_eq!(exit_code(&denied), 2);
    assert!(String::from_utf8_lossy(&denied.stderr).contains("COLLATZ_MATRIX_DIM_CAP"));

    let allowed = Command::new(env!("CARGO_BIN_EXE_collatz"))
        .args(["trace", "--n", "5000", "--pmax", "1"])
        .env("COLLATZ_MATRIX_DIM_CAP", "6000")
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&allowed), 0);

    let junk = Command::new(env!("CARGO_BIN_EXE_collatz"))
        .args(["trace", "--n", "2", "--pmax", "1"])
        .env("COLLATZ_MATRIX_DIM_CAP", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&junk), 2);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.mtx");
    let to_file = Command::new(env!("CARGO_BIN_EXE_collatz"))
        .args(["build", "--n", "5", "--which", "c", "--format", "mm"])
        .arg("--out")
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&to_file), 0);
    assert!(to_file.stdout.is_empty());

    let to_stdout = collatz(&["build", "--n", "5", "--which", "c", "--format", "mm"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn self_test_passes() {
    let out = collatz(&["self-test"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 7);
    for line in text.lines() {
        assert!(line.starts_with('{') && line.contains("\"verdict\":\"pass\""));
    }
}
