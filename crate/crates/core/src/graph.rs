//! Successor-array digraphs over truncations of the Collatz map.
//!
//! The truncated digraph on `{1..n}` has an edge `i -> f(i)` whenever the
//! image stays inside the vertex set; every vertex therefore has out-degree
//! at most one and adjacency is a single integer per vertex. That makes the
//! graph engine the scaling path: cycle detection and longest-path depths run
//! in O(n) time and memory via memoized chain-walking with three-state
//! marking (unvisited / in-progress / done; an in-progress revisit is a
//! cycle). All traversals are iterative; chain length never bounds the
//! feasible `n`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::collatz::{step_checked, Nat};

/// Which truncation a digraph represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphVariant {
    /// Vertices `{1..n}`, edges `(i, f(i))` with `f(i) <= n`.
    Full,
    /// Vertices `{3..n}`, edges `(i, f(i))` with `3 <= f(i) <= n`; the
    /// subgraph obtained by deleting vertices 1 and 2, which also removes
    /// the edges (1,2), (2,1) and (4,2).
    CSub,
}

impl GraphVariant {
    fn min_label(self) -> u64 {
        match self {
            GraphVariant::Full => 1,
            GraphVariant::CSub => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GraphVariant::Full => "full",
            GraphVariant::CSub => "csub",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("truncation bound {n} is below the smallest {variant} vertex {min}")]
    OrderTooSmall {
        n: u64,
        variant: &'static str,
        min: u64,
    },
    #[error("vertex {vertex} is outside the vertex set")]
    VertexOutOfRange { vertex: u64 },
    #[error("vertex {from} already has a successor")]
    EdgeOccupied { from: u64 },
    #[error("directed cycle through vertex {}", .0.vertices[0])]
    CycleExists(CycleWitness),
}

/// A directed cycle, listed from its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub vertices: Vec<u64>,
    pub length: usize,
}

impl CycleWitness {
    fn from_loop(mut vertices: Vec<u64>) -> Self {
        // rotate so the minimal vertex comes first
        let min_pos = vertices
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .unwrap();
        vertices.rotate_left(min_pos);
        let length = vertices.len();
        CycleWitness { vertices, length }
    }
}

/// A truncation of the Collatz digraph, stored as one successor per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollatzDigraph {
    variant: GraphVariant,
    n: u64,
    min_label: u64,
    /// Successor per vertex, 0 when the image leaves the vertex set.
    succ: Vec<u64>,
}

/// Builds the successor map of the chosen truncation.
pub fn build_digraph(n: Nat, variant: GraphVariant) -> Result<CollatzDigraph, GraphError> {
    let n = n.get();
    let min = variant.min_label();
    if n < min {
        return Err(GraphError::OrderTooSmall {
            n,
            variant: variant.name(),
            min,
        });
    }
    let count = usize::try_from(n - min + 1).expect("vertex count exceeds address space");
    let mut succ = vec![0u64; count];
    for (idx, slot) in succ.iter_mut().enumerate() {
        let v = min + idx as u64;
        // An unrepresentable image is larger than any bound, hence absent.
        if let Some(img) = step_checked(v) {
            if img >= min && img <= n {
                *slot = img;
            }
        }
    }
    Ok(CollatzDigraph {
        variant,
        n,
        min_label: min,
        succ,
    })
}

impl CollatzDigraph {
    pub fn variant(&self) -> GraphVariant {
        self.variant
    }

    /// The truncation bound `n`.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn min_label(&self) -> u64 {
        self.min_label
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.min_label && v <= self.n
    }

    /// Successor of `v`, or `None` when the image leaves the vertex set
    /// (or `v` itself is not a vertex).
    pub fn successor(&self, v: u64) -> Option<u64> {
        if !self.contains(v) {
            return None;
        }
        match self.succ[(v - self.min_label) as usize] {
            0 => None,
            s => Some(s),
        }
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.min_label..=self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.vertices().filter_map(|v| Some((v, self.successor(v)?)))
    }

    /// Restriction to the vertices `<= m`; edges whose endpoint leaves the
    /// smaller set are dropped.
    pub fn truncate(&self, m: u64) -> Result<CollatzDigraph, GraphError> {
        if m < self.min_label || m > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: m });
        }
        let count = (m - self.min_label + 1) as usize;
        let mut succ = self.succ[..count].to_vec();
        for s in &mut succ {
            if *s > m {
                *s = 0;
            }
        }
        Ok(CollatzDigraph {
            variant: self.variant,
            n: m,
            min_label: self.min_label,
            succ,
        })
    }

    /// Adds the edge `from -> to` to a vertex that currently has no
    /// successor. This is the mutation hook used to fabricate cyclic
    /// counterexample graphs; out-degree <= 1 is preserved by construction.
    pub fn inject_edge(&mut self, from: u64, to: u64) -> Result<(), GraphError> {
        if !self.contains(from) {
            return Err(GraphError::VertexOutOfRange { vertex: from });
        }
        if !self.contains(to) {
            return Err(GraphError::VertexOutOfRange { vertex: to });
        }
        let slot = (from - self.min_label) as usize;
        if self.succ[slot] != 0 {
            return Err(GraphError::EdgeOccupied { from });
        }
        self.succ[slot] = to;
        Ok(())
    }

    /// Finds a directed cycle if one exists. Deterministic: among all cycles
    /// the one whose minimal vertex is smallest is returned, listed starting
    /// from that vertex.
    pub fn detect_cycle(&self) -> Option<CycleWitness> {
        const UNVISITED: u8 = 0;
        const IN_PROGRESS: u8 = 1;
        const DONE: u8 = 2;
        let mut state = vec![UNVISITED; self.succ.len()];
        let mut best: Option<CycleWitness> = None;
        let mut chain: Vec<u64> = Vec::new();

        for root in self.vertices() {
            if state[(root - self.min_label) as usize] != UNVISITED {
                continue;
            }
            chain.clear();
            let mut cur = root;
            loop {
                state[(cur - self.min_label) as usize] = IN_PROGRESS;
                chain.push(cur);
                match self.successor(cur) {
                    None => break,
                    Some(next) => match state[(next - self.min_label) as usize] {
                        UNVISITED => cur = next,
                        IN_PROGRESS => {
                            // next lies on the current chain: its suffix is a cycle
                            let start = chain.iter().position(|&v| v == next).unwrap();
                            let witness = CycleWitness::from_loop(chain[start..].to_vec());
                            let better = match &best {
                                None => true,
                                Some(b) => witness.vertices[0] < b.vertices[0],
                            };
                            if better {
                                best = Some(witness);
                            }
                            break;
                        }
                        _ => break,
                    },
                }
            }
            for &v in &chain {
                state[(v - self.min_label) as usize] = DONE;
            }
        }
        best
    }

    /// Longest-path depth of every vertex, or the canonical cycle witness if
    /// the graph is cyclic. Memoized, iterative, O(n).
    fn compute_depths(&self) -> Result<Vec<u32>, GraphError> {
        const UNVISITED: u32 = u32::MAX;
        const IN_PROGRESS: u32 = u32::MAX - 1;
        assert!(
            self.succ.len() < (IN_PROGRESS as usize),
            "vertex count collides with depth sentinels"
        );
        let mut memo = vec![UNVISITED; self.succ.len()];
        let mut chain: Vec<u64> = Vec::new();

        for root in self.vertices() {
            if memo[(root - self.min_label) as usize] != UNVISITED {
                continue;
            }
            chain.clear();
            let mut cur = root;
            // walk forward until the chain exits, hits a memoized vertex,
            // or revisits the walk itself
            let mut base = loop {
                let idx = (cur - self.min_label) as usize;
                match memo[idx] {
                    UNVISITED => {}
                    IN_PROGRESS => {
                        return Err(GraphError::CycleExists(
                            self.detect_cycle().expect("in-progress revisit implies a cycle"),
                        ));
                    }
                    depth => break depth,
                }
                memo[idx] = IN_PROGRESS;
                chain.push(cur);
                match self.successor(cur) {
                    Some(next) => cur = next,
                    None => break u32::MAX, // marker: depth of chain end is 0
                }
            };
            for &v in chain.iter().rev() {
                base = if base == u32::MAX { 0 } else { base + 1 };
                memo[(v - self.min_label) as usize] = base;
            }
        }
        Ok(memo)
    }

    /// Edges traversable from `i` before the successor chain exits the
    /// vertex set: 0 when `i` has no successor, else `1 + depth(succ(i))`.
    pub fn depth(&self, i: u64) -> Result<u64, GraphError> {
        if !self.contains(i) {
            return Err(GraphError::VertexOutOfRange { vertex: i });
        }
        let mut seen = std::collections::HashSet::new();
        let mut cur = i;
        let mut steps = 0u64;
        loop {
            if !seen.insert(cur) {
                return Err(GraphError::CycleExists(
                    self.detect_cycle().expect("revisit implies a cycle"),
                ));
            }
            match self.successor(cur) {
                Some(next) => {
                    steps += 1;
                    cur = next;
                }
                None => return Ok(steps),
            }
        }
    }

    /// Topological witness of acyclicity: an order with every edge going
    /// forward, the longest path length, and the nilpotency index
    /// `longest + 1` of the corresponding adjacency matrix.
    pub fn topological_certificate(&self) -> Result<NilpotencyCertificate, GraphError> {
        let depths = self.compute_depths()?;
        let longest = u64::from(depths.iter().copied().max().unwrap_or(0));
        let mut order: Vec<u64> = self.vertices().collect();
        // deeper vertices first puts every edge (i, succ(i)) forward,
        // since depth(i) = 1 + depth(succ(i))
        order.sort_by_key(|&v| {
            (
                std::cmp::Reverse(depths[(v - self.min_label) as usize]),
                v,
            )
        });
        Ok(NilpotencyCertificate {
            order,
            longest_path_len: longest,
            index: longest + 1,
        })
    }

    /// Deterministic DOT rendering: vertices ascending, one line per vertex,
    /// `i -> j;` when the edge is present and `i;` otherwise.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {}_{} {{", self.variant.name(), self.n);
        for v in self.vertices() {
            match self.successor(v) {
                Some(s) => {
                    let _ = writeln!(out, "    {} -> {};", v, s);
                }
                None => {
                    let _ = writeln!(out, "    {};", v);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Witness that a digraph is acyclic, in the form that makes the adjacency
/// matrix strictly triangular: a topological order plus the longest path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotencyCertificate {
    pub order: Vec<u64>,
    pub longest_path_len: u64,
    /// `longest_path_len + 1`: the smallest power of the adjacency matrix
    /// that vanishes.
    pub index: u64,
}

/// Result of a whole-range acyclicity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeReport {
    pub n_max: u64,
    pub vertex_count: usize,
    pub max_depth: u64,
    /// Smallest vertex attaining `max_depth`.
    pub deepest_vertex: u64,
}

impl RangeReport {
    /// Nilpotency index of the deepest truncation scanned.
    pub fn index(&self) -> u64 {
        self.max_depth + 1
    }
}

/// Scans the `{3..n_max}` truncation in one pass. Acyclicity of this graph
/// implies acyclicity of every smaller truncation, because truncations nest:
/// each edge of the graph on `{3..n}` is an edge of the graph on `{3..m}`
/// whenever `n <= m`.
pub fn verify_range(n_max: Nat) -> Result<RangeReport, GraphError> {
    let g = build_digraph(n_max, GraphVariant::CSub)?;
    let depths = g.compute_depths()?;
    let mut max_depth = 0u32;
    let mut deepest = g.min_label();
    for (idx, &d) in depths.iter().enumerate() {
        if d > max_depth {
            max_depth = d;
            deepest = g.min_label() + idx as u64;
        }
    }
    Ok(RangeReport {
        n_max: g.order(),
        vertex_count: g.vertex_count(),
        max_depth: u64::from(max_depth),
        deepest_vertex: deepest,
    })
}
