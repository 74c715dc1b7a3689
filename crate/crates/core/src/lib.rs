//! Collatz orbits, truncated adjacency matrices, and nilpotency
//! verification.
//!
//! The shortcut Collatz map `f(n) = n/2` (even) / `(3n+1)/2` (odd) induces a
//! digraph on `{1..n}` with an edge from each vertex to its image when the
//! image stays below the truncation bound. The aperiodicity question (are
//! there directed cycles beyond the trivial 1 <-> 2 loop?) becomes a
//! statement about the adjacency matrix: delete rows and columns 1 and 2
//! and the remaining submatrix should be nilpotent, equivalently the power
//! traces of the full matrix should alternate 0, 2, 0, 2, ...
//!
//! The crate materializes both views and keeps them honest against each
//! other:
//!
//! - [`collatz`]: the map itself, orbit iteration, stopping times, and
//!   trajectory classification under a step cap.
//! - [`graph`]: successor-array digraphs, cycle detection, topological
//!   certificates with longest-path depths, and the O(n) whole-range scan.
//! - [`matrix`]: exact sparse integer matrices, powers, traces, brute-force
//!   nilpotency, block decomposition, and Matrix Market files.
//! - [`verify`]: cross-engine equivalence checks, the walk-count oracle,
//!   the positive-trace refutation hook, and a mutant harness that proves
//!   the failure branches actually fire.

pub mod collatz;
pub mod graph;
pub mod matrix;
pub mod verify;

pub use collatz::{
    classify_trajectory, iterate, shortcut_step, total_stopping_time, Classification,
    CollatzError, Nat, StoppingTime, TrajectoryRecord,
};
pub use graph::{
    build_digraph, verify_range, CollatzDigraph, CycleWitness, GraphError, GraphVariant,
    NilpotencyCertificate, RangeReport,
};
pub use matrix::{
    build_a, build_c, extract_blocks, trace_table, BlockDecomposition, MatrixError,
    MatrixNilpotency, SparseBinaryMatrix, TraceCheck, TraceTable,
};
pub use verify::{
    check_alves_condition, check_block_power_formula, check_block_trace_identity,
    check_mutation_sensitivity, check_positive_traces, check_walk_counts,
    cross_check_nilpotency, generate_cycle_mutants, inject_cycle, positive_trace_detector,
    positive_trace_detector_in, walk_count_oracle, CycleMutant, PositiveTraceHit, Verdict,
    VerificationReport,
};
