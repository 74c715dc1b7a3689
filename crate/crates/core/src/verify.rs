//! Cross-engine equivalence checks.
//!
//! The graph engine (chain walking) and the matrix engine (exact powers)
//! compute the same facts by unrelated routes; the checks here run both and
//! demand exact agreement. Every failing verdict carries a reproducible
//! counterexample, since a genuine disagreement (a cycle, a positive trace)
//! would be the most important output this tool could produce.
//!
//! Because the conjecture-consistent path never exercises the failure
//! branches, the module also ships a mutant harness: deliberately corrupted
//! successor maps that close a known cycle, against which every detector
//! must fire.
//!
//! Reports serialize to JSON as
//! `{ subject, params, verdict, counterexample?, elapsed_ms }`.

use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;

use crate::collatz::Nat;
use crate::graph::{build_digraph, CollatzDigraph, GraphError, GraphVariant};
use crate::matrix::{
    build_a, build_c, expected_trace, extract_blocks, MatrixNilpotency, SparseBinaryMatrix,
    TraceCheck,
};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutants: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The reproducible seed of a failing verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    TraceMismatch {
        n: u64,
        p: u64,
        expected: u64,
        actual: u64,
    },
    BlockTraceMismatch {
        n: u64,
        p: u64,
        full_trace: u64,
        head_trace: u64,
        tail_trace: u64,
    },
    BlockEntryMismatch {
        n: u64,
        p: u64,
        row: u64,
        col: u64,
        power_entry: u64,
        sum_entry: u64,
    },
    EngineDisagreement {
        n: u64,
        graph_acyclic: bool,
        graph_index: Option<u64>,
        matrix_nilpotent: bool,
        matrix_index: Option<u64>,
        trace_check_pass: bool,
    },
    WalkCountMismatch {
        n: u64,
        p: u64,
        from: u64,
        to: u64,
        matrix_entry: u64,
        walk_count: u64,
    },
    NonBinaryEntry {
        n: u64,
        p: u64,
        row: u64,
        col: u64,
        value: u64,
    },
    PositiveTrace {
        m: u64,
        p: u64,
        trace: u64,
    },
    UndetectedCycle {
        n: u64,
        from: u64,
        to: u64,
        detector: String,
    },
    CycleLengthMismatch {
        n: u64,
        expected: usize,
        reported: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub params: ReportParams,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    fn finish(
        subject: &str,
        params: ReportParams,
        counterexample: Option<Counterexample>,
        started: Instant,
    ) -> Self {
        VerificationReport {
            subject: subject.to_string(),
            params,
            verdict: if counterexample.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            counterexample,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }
}

fn range_params(range: &RangeInclusive<u64>, p_max: Option<u64>) -> ReportParams {
    ReportParams {
        n_min: Some(*range.start()),
        n_max: Some(*range.end()),
        p_max,
        mutants: None,
    }
}

/// Checks `trace(A_n^p)` against the alternating 0/2 pattern for every `n`
/// in the range and `p = 1..p_max`. Powers are accumulated sequentially so
/// each trace comes from an explicitly materialized power.
pub fn check_alves_condition(n_range: RangeInclusive<u64>, p_max: u64) -> VerificationReport {
    assert!(*n_range.start() >= 2, "trace pattern needs n >= 2");
    assert!(p_max >= 1);
    let started = Instant::now();
    let params = range_params(&n_range, Some(p_max));
    let mut counterexample = None;
    'scan: for n in n_range {
        let a = build_a(Nat::new(n).unwrap());
        let mut acc = a.clone();
        for p in 1..=p_max {
            let actual = acc.trace();
            let expected = expected_trace(p);
            if actual != expected {
                counterexample = Some(Counterexample::TraceMismatch {
                    n,
                    p,
                    expected,
                    actual,
                });
                break 'scan;
            }
            if p < p_max {
                acc = acc.mul(&a).expect("aligned square product");
            }
        }
    }
    VerificationReport::finish("alves_trace_condition", params, counterexample, started)
}

/// Checks the exact additivity `trace(A_n^p) = trace(A_2^p) + trace(C_n^p)`
/// coming from the lower block-triangular shape of the full matrix.
pub fn check_block_trace_identity(
    n_range: RangeInclusive<u64>,
    p_max: u64,
) -> VerificationReport {
    assert!(*n_range.start() >= 3, "the split needs n > 2");
    assert!(p_max >= 1);
    let started = Instant::now();
    let params = range_params(&n_range, Some(p_max));
    let a2 = build_a(Nat::new(2).unwrap());
    let mut counterexample = None;
    'scan: for n in n_range {
        let a = build_a(Nat::new(n).unwrap());
        let c = build_c(Nat::new(n).unwrap()).unwrap();
        let mut a_pow = a.clone();
        let mut a2_pow = a2.clone();
        let mut c_pow = c.clone();
        for p in 1..=p_max {
            let (full, head, tail) = (a_pow.trace(), a2_pow.trace(), c_pow.trace());
            if full != head + tail {
                counterexample = Some(Counterexample::BlockTraceMismatch {
                    n,
                    p,
                    full_trace: full,
                    head_trace: head,
                    tail_trace: tail,
                });
                break 'scan;
            }
            if p < p_max {
                a_pow = a_pow.mul(&a).expect("aligned square product");
                a2_pow = a2_pow.mul(&a2).expect("aligned square product");
                c_pow = c_pow.mul(&c).expect("aligned square product");
            }
        }
    }
    VerificationReport::finish("block_trace_identity", params, counterexample, started)
}

/// Verifies entrywise, for each `n` in the range and `p = 1..p_max`, that
/// the lower-left block of `A_n^p` equals the direct sum
/// `sum_{k=0}^{p-1} C^k B A_2^{p-1-k}`: two algebraically different routes
/// to the same block.
pub fn check_block_power_formula(
    n_range: RangeInclusive<u64>,
    p_max: u64,
) -> VerificationReport {
    assert!(*n_range.start() >= 3, "the split needs n > 2");
    assert!(p_max >= 1);
    let started = Instant::now();
    let params = range_params(&n_range, Some(p_max));
    let mut counterexample = None;
    'scan: for n in n_range {
        let a = build_a(Nat::new(n).unwrap());
        let blocks = extract_blocks(&a).unwrap();
        for p in 1..=p_max {
            let power_block = a
                .pow(p)
                .expect("square power")
                .block(3..=n, 1..=2)
                .expect("labels in range");
            let mut sum = SparseBinaryMatrix::zero((n - 2) as usize, 2, 3, 1);
            for k in 0..p {
                let term = blocks
                    .c
                    .pow(k)
                    .expect("square power")
                    .mul(&blocks.b)
                    .expect("aligned product")
                    .mul(&blocks.a2.pow(p - 1 - k).expect("square power"))
                    .expect("aligned product");
                for (i, j, v) in term.entries() {
                    sum.set(i, j, sum.get(i, j) + v);
                }
            }
            if power_block != sum {
                let (row, col) = (3..=n)
                    .flat_map(|i| (1..=2u64).map(move |j| (i, j)))
                    .find(|&(i, j)| power_block.get(i, j) != sum.get(i, j))
                    .expect("matrices differ");
                counterexample = Some(Counterexample::BlockEntryMismatch {
                    n,
                    p,
                    row,
                    col,
                    power_entry: power_block.get(row, col),
                    sum_entry: sum.get(row, col),
                });
                break 'scan;
            }
        }
    }
    VerificationReport::finish("block_power_formula", params, counterexample, started)
}

/// Runs the graph engine (cycle scan + topological certificate) and the
/// matrix engine (brute-force index + power-trace criterion) on the deleted
/// vertex truncation for each `n`, demanding identical verdicts and indices.
pub fn cross_check_nilpotency(n_range: RangeInclusive<u64>) -> VerificationReport {
    assert!(*n_range.start() >= 3);
    let started = Instant::now();
    let params = range_params(&n_range, None);
    let mut counterexample = None;
    for n in n_range {
        let g = build_digraph(Nat::new(n).unwrap(), GraphVariant::CSub).unwrap();
        let (graph_acyclic, graph_index) = match g.topological_certificate() {
            Ok(cert) => (true, Some(cert.index)),
            Err(GraphError::CycleExists(_)) => (false, None),
            Err(other) => unreachable!("unexpected graph failure: {other}"),
        };
        let c = build_c(Nat::new(n).unwrap()).unwrap();
        let (matrix_nilpotent, matrix_index) =
            match c.nilpotency_index().expect("square matrix") {
                MatrixNilpotency::Nilpotent { index } => (true, Some(index)),
                MatrixNilpotency::NotNilpotent => (false, None),
            };
        let trace_check_pass = matches!(
            c.trace_nilpotency_check().expect("square matrix"),
            TraceCheck::Pass
        );
        let agree = graph_acyclic == matrix_nilpotent
            && matrix_nilpotent == trace_check_pass
            && graph_index == matrix_index;
        if !agree {
            counterexample = Some(Counterexample::EngineDisagreement {
                n,
                graph_acyclic,
                graph_index,
                matrix_nilpotent,
                matrix_index,
                trace_check_pass,
            });
            break;
        }
    }
    VerificationReport::finish("nilpotency_cross_check", params, counterexample, started)
}

/// Number of directed walks of length `p` from `from` to `to` in the
/// `{1..n}` truncation, counted by explicit successor-chain following.
/// Out-degree <= 1 means the count is 0 or 1: the unique chain either lands
/// on `to` after exactly `p` in-range steps or it does not.
pub fn walk_count_oracle(n: Nat, p: u64, from: u64, to: u64) -> Result<u64, GraphError> {
    assert!(p >= 1, "walks have positive length");
    let g = build_digraph(n, GraphVariant::Full)?;
    for v in [from, to] {
        if !g.contains(v) {
            return Err(GraphError::VertexOutOfRange { vertex: v });
        }
    }
    Ok(chase(&g, from, p).map_or(0, |end| u64::from(end == to)))
}

/// Endpoint of the length-`p` chain from `v`, if it stays in the graph.
fn chase(g: &CollatzDigraph, v: u64, p: u64) -> Option<u64> {
    let mut cur = v;
    for _ in 0..p {
        cur = g.successor(cur)?;
    }
    Some(cur)
}

/// Compares every entry of every power `A_n^p` (`n <= n_max`, `p <= p_max`)
/// against the chain-following count, and checks each entry is 0 or 1.
pub fn check_walk_counts(n_max: u64, p_max: u64) -> VerificationReport {
    assert!(n_max >= 1 && p_max >= 1);
    let started = Instant::now();
    let params = ReportParams {
        n_min: Some(1),
        n_max: Some(n_max),
        p_max: Some(p_max),
        mutants: None,
    };
    let mut counterexample = None;
    'scan: for n in 1..=n_max {
        let g = build_digraph(Nat::new(n).unwrap(), GraphVariant::Full).unwrap();
        let a = build_a(Nat::new(n).unwrap());
        let mut acc = a.clone();
        for p in 1..=p_max {
            if acc.max_entry() > 1 {
                let (row, col, value) = acc
                    .entries()
                    .find(|&(_, _, v)| v > 1)
                    .expect("max_entry > 1");
                counterexample = Some(Counterexample::NonBinaryEntry {
                    n,
                    p,
                    row,
                    col,
                    value,
                });
                break 'scan;
            }
            for from in 1..=n {
                let end = chase(&g, from, p);
                for to in 1..=n {
                    let walk_count = end.map_or(0, |e| u64::from(e == to));
                    let matrix_entry = acc.get(from, to);
                    if matrix_entry != walk_count {
                        counterexample = Some(Counterexample::WalkCountMismatch {
                            n,
                            p,
                            from,
                            to,
                            matrix_entry,
                            walk_count,
                        });
                        break 'scan;
                    }
                }
            }
            if p < p_max {
                acc = acc.mul(&a).expect("aligned square product");
            }
        }
    }
    VerificationReport::finish("walk_count_agreement", params, counterexample, started)
}

/// First positive power trace found among the truncations of a deleted
/// vertex graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositiveTraceHit {
    pub m: u64,
    pub p: u64,
    pub trace: u64,
}

/// Scans `m = 3..n` and `p = 1..p_max` for `trace(C_m^p) > 0`, the
/// computational refutation hook: a hit names a truncation whose deleted
/// vertex matrix has a closed walk. `None` is the conjecture-consistent
/// outcome.
pub fn positive_trace_detector(n: Nat, p_max: u64) -> Option<PositiveTraceHit> {
    let g = build_digraph(n, GraphVariant::CSub).expect("n >= 3");
    positive_trace_detector_in(&g, p_max)
}

/// Same scan over the truncations of a caller-supplied graph (possibly a
/// mutant), in the graph's own labeling.
pub fn positive_trace_detector_in(g: &CollatzDigraph, p_max: u64) -> Option<PositiveTraceHit> {
    assert!(p_max >= 1);
    for m in g.min_label()..=g.order() {
        let truncated = g.truncate(m).expect("m within range");
        let c = SparseBinaryMatrix::from_digraph(&truncated);
        let mut acc = c.clone();
        for p in 1..=p_max {
            let trace = acc.trace();
            if trace > 0 {
                return Some(PositiveTraceHit { m, p, trace });
            }
            if p < p_max {
                acc = acc.mul(&c).expect("aligned square product");
            }
        }
    }
    None
}

/// Wraps the positive-trace scan in a report.
pub fn check_positive_traces(n: Nat, p_max: u64) -> VerificationReport {
    let started = Instant::now();
    let params = ReportParams {
        n_min: Some(3),
        n_max: Some(n.get()),
        p_max: Some(p_max),
        mutants: None,
    };
    let counterexample = positive_trace_detector(n, p_max)
        .map(|hit| Counterexample::PositiveTrace {
            m: hit.m,
            p: hit.p,
            trace: hit.trace,
        });
    VerificationReport::finish("positive_trace_scan", params, counterexample, started)
}

/// A deliberately corrupted successor map: one injected edge that closes a
/// directed cycle of known length.
#[derive(Debug, Clone)]
pub struct CycleMutant {
    pub n: u64,
    pub from: u64,
    pub to: u64,
    pub cycle_len: usize,
    pub graph: CollatzDigraph,
}

/// Builds the deleted-vertex graph at `n` and injects `from -> to`. The
/// source must currently have no successor and the target must reach the
/// source along existing edges; the injected cycle's length is derived from
/// that chain.
pub fn inject_cycle(n: Nat, from: u64, to: u64) -> Result<CycleMutant, GraphError> {
    let mut graph = build_digraph(n, GraphVariant::CSub)?;
    // derive the cycle length before mutating: to -> ... -> from, plus the
    // new closing edge
    let mut len = 1usize;
    let mut cur = to;
    while cur != from {
        cur = graph
            .successor(cur)
            .ok_or(GraphError::VertexOutOfRange { vertex: cur })?;
        len += 1;
    }
    graph.inject_edge(from, to)?;
    Ok(CycleMutant {
        n: n.get(),
        from,
        to,
        cycle_len: len,
        graph,
    })
}

/// Deterministically generates `count` single-edge mutants at truncations
/// `n_max, n_max - 1, ...`: each takes the deepest chain of the graph and
/// closes it back onto one of its own vertices, so the injected cycle
/// lengths vary with `n`.
pub fn generate_cycle_mutants(n_max: Nat, count: usize) -> Vec<CycleMutant> {
    let mut out = Vec::with_capacity(count);
    let mut n = n_max.get();
    while out.len() < count && n >= 3 {
        let g = build_digraph(Nat::new(n).unwrap(), GraphVariant::CSub).unwrap();
        let deepest = g
            .vertices()
            .max_by_key(|&v| (g.depth(v).expect("acyclic"), std::cmp::Reverse(v)))
            .expect("nonempty vertex set");
        let mut chain = vec![deepest];
        while let Some(next) = g.successor(*chain.last().unwrap()) {
            chain.push(next);
        }
        let target = chain[n as usize % chain.len()];
        out.push(
            inject_cycle(Nat::new(n).unwrap(), *chain.last().unwrap(), target)
                .expect("target lies on the chain"),
        );
        n -= 1;
    }
    out
}

/// Runs all four detectors (cycle scan, brute-force index, power-trace
/// criterion, positive-trace scan) against generated mutants. Each must
/// flag every mutant, and the reported cycle must have the injected length.
pub fn check_mutation_sensitivity(n_max: Nat, count: usize) -> VerificationReport {
    let started = Instant::now();
    let params = ReportParams {
        n_min: None,
        n_max: Some(n_max.get()),
        p_max: None,
        mutants: Some(count),
    };
    let mut counterexample = None;
    for mutant in generate_cycle_mutants(n_max, count) {
        let survived = |detector: &str| Counterexample::UndetectedCycle {
            n: mutant.n,
            from: mutant.from,
            to: mutant.to,
            detector: detector.to_string(),
        };

        match mutant.graph.detect_cycle() {
            Some(witness) => {
                if witness.length != mutant.cycle_len {
                    counterexample = Some(Counterexample::CycleLengthMismatch {
                        n: mutant.n,
                        expected: mutant.cycle_len,
                        reported: witness.length,
                    });
                    break;
                }
            }
            None => {
                counterexample = Some(survived("detect_cycle"));
                break;
            }
        }

        let matrix = SparseBinaryMatrix::from_digraph(&mutant.graph);
        if matrix.nilpotency_index().expect("square matrix") != MatrixNilpotency::NotNilpotent {
            counterexample = Some(survived("nilpotency_index"));
            break;
        }

        match matrix.trace_nilpotency_check().expect("square matrix") {
            TraceCheck::Fail { p, .. } if p as usize == mutant.cycle_len => {}
            TraceCheck::Fail { .. } => {
                counterexample = Some(survived("trace_nilpotency_check_first_p"));
                break;
            }
            TraceCheck::Pass => {
                counterexample = Some(survived("trace_nilpotency_check"));
                break;
            }
        }

        match positive_trace_detector_in(&mutant.graph, mutant.graph.vertex_count() as u64) {
            Some(hit) if hit.p as usize == mutant.cycle_len => {}
            Some(_) => {
                counterexample = Some(survived("positive_trace_detector_first_p"));
                break;
            }
            None => {
                counterexample = Some(survived("positive_trace_detector"));
                break;
            }
        }
    }
    VerificationReport::finish("mutation_sensitivity", params, counterexample, started)
}
