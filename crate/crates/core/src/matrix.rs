//! Explicit sparse matrices over the truncated Collatz digraph, with exact
//! integer powers, traces, and brute-force nilpotency tests.
//!
//! Two indexing conventions coexist. The public API speaks *labels*: the
//! full adjacency matrix of the `{1..n}` truncation is labeled `1..n`, and
//! the trailing principal submatrix obtained by deleting rows and columns
//! 1 and 2 is labeled `3..n`. Storage is 0-based; offsets are applied at the
//! boundary so exported artifacts keep the label convention.
//!
//! Entries are exact unsigned integers rather than booleans: powers of an
//! adjacency matrix count directed walks, and the trace checks need the
//! counts undistorted. That the counts never exceed 1 for these matrices is
//! a consequence of out-degree <= 1 and is asserted by tests, not assumed
//! here. All arithmetic is overflow-checked.

use thiserror::Error;

use crate::collatz::{step_checked, Nat};
use crate::graph::CollatzDigraph;

pub mod market;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: left is {lrows}x{lcols} starting at ({lro},{lco}), right is {rrows}x{rcols} starting at ({rro},{rco})")]
    ShapeMismatch {
        lrows: usize,
        lcols: usize,
        lro: u64,
        lco: u64,
        rrows: usize,
        rcols: usize,
        rro: u64,
        rco: u64,
    },
    #[error("operation requires a square matrix with equal row and column offsets")]
    NotSquare,
    #[error("order {n} is below the minimum {min} for this matrix family")]
    OrderTooSmall { n: u64, min: u64 },
    #[error("entry overflow during exact multiplication")]
    EntryOverflow,
    #[error("block labels {lo}..={hi} fall outside the matrix")]
    BlockOutOfRange { lo: u64, hi: u64 },
}

/// Sparse matrix with nonnegative integer entries and labeled indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    nrows: usize,
    ncols: usize,
    row_offset: u64,
    col_offset: u64,
    /// Per row: sorted `(0-based column, value > 0)` pairs.
    rows: Vec<Vec<(usize, u64)>>,
}

impl SparseBinaryMatrix {
    /// Zero matrix of the given shape. Row label `i` occupies storage row
    /// `i - row_offset`, and likewise for columns.
    pub fn zero(nrows: usize, ncols: usize, row_offset: u64, col_offset: u64) -> Self {
        assert!(nrows >= 1 && ncols >= 1, "matrix must be nonempty");
        assert!(row_offset >= 1 && col_offset >= 1, "labels start at 1");
        SparseBinaryMatrix {
            nrows,
            ncols,
            row_offset,
            col_offset,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Identity matrix labeled `offset .. offset + dim - 1`.
    pub fn identity(dim: usize, offset: u64) -> Self {
        let mut m = Self::zero(dim, dim, offset, offset);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.push((i, 1));
        }
        m
    }

    /// Adjacency matrix of a successor-array digraph, in the digraph's own
    /// labeling. This is how corrupted graphs enter the matrix engine.
    pub fn from_digraph(g: &CollatzDigraph) -> Self {
        let mut m = Self::zero(
            g.vertex_count(),
            g.vertex_count(),
            g.min_label(),
            g.min_label(),
        );
        for (i, j) in g.edges() {
            m.rows[(i - g.min_label()) as usize].push(((j - g.min_label()) as usize, 1));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row_offset(&self) -> u64 {
        self.row_offset
    }

    pub fn col_offset(&self) -> u64 {
        self.col_offset
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols && self.row_offset == self.col_offset
    }

    /// Common label offset of a square matrix (1 for the full adjacency
    /// matrix, 3 for the deleted-vertex submatrix).
    pub fn index_offset(&self) -> u64 {
        assert!(self.is_square(), "index_offset is defined for square matrices");
        self.row_offset
    }

    fn row_idx(&self, i: u64) -> usize {
        assert!(
            i >= self.row_offset && i < self.row_offset + self.nrows as u64,
            "row label {i} out of range"
        );
        (i - self.row_offset) as usize
    }

    fn col_idx(&self, j: u64) -> usize {
        assert!(
            j >= self.col_offset && j < self.col_offset + self.ncols as u64,
            "column label {j} out of range"
        );
        (j - self.col_offset) as usize
    }

    /// Entry at row label `i`, column label `j`.
    pub fn get(&self, i: u64, j: u64) -> u64 {
        let r = self.row_idx(i);
        let c = self.col_idx(j);
        match self.rows[r].binary_search_by_key(&c, |&(col, _)| col) {
            Ok(pos) => self.rows[r][pos].1,
            Err(_) => 0,
        }
    }

    /// Sets the entry at labels `(i, j)`; zero removes it.
    pub fn set(&mut self, i: u64, j: u64, value: u64) {
        let r = self.row_idx(i);
        let c = self.col_idx(j);
        match self.rows[r].binary_search_by_key(&c, |&(col, _)| col) {
            Ok(pos) => {
                if value == 0 {
                    self.rows[r].remove(pos);
                } else {
                    self.rows[r][pos].1 = value;
                }
            }
            Err(pos) => {
                if value != 0 {
                    self.rows[r].insert(pos, (c, value));
                }
            }
        }
    }

    /// Nonzero entries as `(row label, column label, value)`, in row-major
    /// label order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter().map(move |&(c, v)| {
                (
                    self.row_offset + r as u64,
                    self.col_offset + c as u64,
                    v,
                )
            })
        })
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn max_entry(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().map(|&(_, v)| v))
            .max()
            .unwrap_or(0)
    }

    /// Sum of diagonal entries of a square matrix.
    pub fn trace(&self) -> u64 {
        assert!(self.is_square(), "trace is defined for square matrices");
        (0..self.nrows)
            .map(|i| {
                match self.rows[i].binary_search_by_key(&i, |&(col, _)| col) {
                    Ok(pos) => self.rows[i][pos].1,
                    Err(_) => 0,
                }
            })
            .sum()
    }

    /// Exact integer product. Column labels of `self` must line up with the
    /// row labels of `rhs`.
    pub fn mul(&self, rhs: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix, MatrixError> {
        if self.ncols != rhs.nrows || self.col_offset != rhs.row_offset {
            return Err(MatrixError::ShapeMismatch {
                lrows: self.nrows,
                lcols: self.ncols,
                lro: self.row_offset,
                lco: self.col_offset,
                rrows: rhs.nrows,
                rcols: rhs.ncols,
                rro: rhs.row_offset,
                rco: rhs.col_offset,
            });
        }
        let mut out = SparseBinaryMatrix::zero(
            self.nrows,
            rhs.ncols,
            self.row_offset,
            rhs.col_offset,
        );
        let mut acc = vec![0u64; rhs.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(k, v) in row {
                for &(j, w) in &rhs.rows[k] {
                    let prod = v.checked_mul(w).ok_or(MatrixError::EntryOverflow)?;
                    if acc[j] == 0 && prod != 0 {
                        touched.push(j);
                    }
                    acc[j] = acc[j].checked_add(prod).ok_or(MatrixError::EntryOverflow)?;
                }
            }
            touched.sort_unstable();
            out.rows[r] = touched.iter().map(|&j| (j, acc[j])).collect();
            for &j in &touched {
                acc[j] = 0;
            }
            touched.clear();
        }
        Ok(out)
    }

    /// `self^p` by repeated squaring; the zeroth power is the identity.
    pub fn pow(&self, p: u64) -> Result<SparseBinaryMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare);
        }
        let mut result = SparseBinaryMatrix::identity(self.nrows, self.row_offset);
        let mut base = self.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Smallest `k >= 1` with `self^k = 0`, determined by sequential
    /// products so each intermediate power is zero-tested; a square matrix
    /// is nilpotent iff its dim-th power vanishes, so the scan stops there.
    pub fn nilpotency_index(&self) -> Result<MatrixNilpotency, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare);
        }
        let mut acc = self.clone();
        for k in 1..=self.nrows as u64 {
            if acc.is_zero() {
                return Ok(MatrixNilpotency::Nilpotent { index: k });
            }
            acc = acc.mul(self)?;
        }
        Ok(MatrixNilpotency::NotNilpotent)
    }

    /// Checks `trace(self^p) = 0` for `p = 1..dim`, which suffices for
    /// nilpotency: a nonzero eigenvalue would surface in one of the first
    /// dim power traces.
    pub fn trace_nilpotency_check(&self) -> Result<TraceCheck, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare);
        }
        let mut acc = self.clone();
        for p in 1..=self.nrows as u64 {
            let t = acc.trace();
            if t != 0 {
                return Ok(TraceCheck::Fail { p, trace: t });
            }
            if p < self.nrows as u64 {
                acc = acc.mul(self)?;
            }
        }
        Ok(TraceCheck::Pass)
    }

    /// Submatrix selected by inclusive label ranges; the result is labeled
    /// from the range starts.
    pub fn block(
        &self,
        rows: std::ops::RangeInclusive<u64>,
        cols: std::ops::RangeInclusive<u64>,
    ) -> Result<SparseBinaryMatrix, MatrixError> {
        let (rlo, rhi) = (*rows.start(), *rows.end());
        let (clo, chi) = (*cols.start(), *cols.end());
        if rlo < self.row_offset || rhi >= self.row_offset + self.nrows as u64 || rlo > rhi {
            return Err(MatrixError::BlockOutOfRange { lo: rlo, hi: rhi });
        }
        if clo < self.col_offset || chi >= self.col_offset + self.ncols as u64 || clo > chi {
            return Err(MatrixError::BlockOutOfRange { lo: clo, hi: chi });
        }
        let mut out = SparseBinaryMatrix::zero(
            (rhi - rlo + 1) as usize,
            (chi - clo + 1) as usize,
            rlo,
            clo,
        );
        for (i, j, v) in self.entries() {
            if i >= rlo && i <= rhi && j >= clo && j <= chi {
                out.rows[(i - rlo) as usize].push((((j - clo) as usize), v));
            }
        }
        Ok(out)
    }
}

/// Verdict of the brute-force nilpotency scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixNilpotency {
    Nilpotent { index: u64 },
    NotNilpotent,
}

/// Verdict of the power-trace criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceCheck {
    Pass,
    Fail { p: u64, trace: u64 },
}

/// Full adjacency matrix of the `{1..n}` truncation: row `i` holds a single
/// 1 in column `f(i)` when the image stays within range.
pub fn build_a(n: Nat) -> SparseBinaryMatrix {
    let n = n.get();
    let dim = usize::try_from(n).expect("matrix order exceeds address space");
    let mut m = SparseBinaryMatrix::zero(dim, dim, 1, 1);
    for i in 1..=n {
        if let Some(j) = step_checked(i) {
            if j <= n {
                m.rows[(i - 1) as usize].push(((j - 1) as usize, 1));
            }
        }
    }
    m
}

/// Trailing principal submatrix labeled `3..n`: rows and columns 1 and 2 of
/// the full matrix are deleted.
pub fn build_c(n: Nat) -> Result<SparseBinaryMatrix, MatrixError> {
    let n = n.get();
    if n < 3 {
        return Err(MatrixError::OrderTooSmall { n, min: 3 });
    }
    let dim = usize::try_from(n - 2).expect("matrix order exceeds address space");
    let mut m = SparseBinaryMatrix::zero(dim, dim, 3, 3);
    for i in 3..=n {
        if let Some(j) = step_checked(i) {
            if (3..=n).contains(&j) {
                m.rows[(i - 3) as usize].push(((j - 3) as usize, 1));
            }
        }
    }
    Ok(m)
}

/// The lower block-triangular split of the full matrix for `n > 2`:
/// the 2x2 head, the `(n-2)x2` coupling block, and the `(n-2)x(n-2)` tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub a2: SparseBinaryMatrix,
    pub b: SparseBinaryMatrix,
    pub c: SparseBinaryMatrix,
}

impl BlockDecomposition {
    /// Reassembles `[a2 0; b c]` into one matrix labeled from 1.
    pub fn reassemble(&self) -> SparseBinaryMatrix {
        let dim = 2 + self.c.nrows();
        let mut out = SparseBinaryMatrix::zero(dim, dim, 1, 1);
        for (i, j, v) in self.a2.entries() {
            out.set(i, j, v);
        }
        for (i, j, v) in self.b.entries() {
            out.set(i, j, v);
        }
        for (i, j, v) in self.c.entries() {
            out.set(i, j, v);
        }
        out
    }
}

/// Splits a full adjacency matrix (square, labeled from 1, order > 2) into
/// its lower block-triangular parts.
pub fn extract_blocks(a: &SparseBinaryMatrix) -> Result<BlockDecomposition, MatrixError> {
    if !a.is_square() || a.index_offset() != 1 {
        return Err(MatrixError::NotSquare);
    }
    let n = a.nrows() as u64;
    if n <= 2 {
        return Err(MatrixError::OrderTooSmall { n, min: 3 });
    }
    Ok(BlockDecomposition {
        a2: a.block(1..=2, 1..=2)?,
        b: a.block(3..=n, 1..=2)?,
        c: a.block(3..=n, 3..=n)?,
    })
}

/// The trace the aperiodicity condition predicts for the p-th power of a
/// full adjacency matrix: 2 when `p` is even (the closed walks around
/// 1 <-> 2), and 0 when `p` is odd.
pub fn expected_trace(p: u64) -> u64 {
    if p % 2 == 0 {
        2
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub p: u64,
    pub trace: u64,
    pub expected: u64,
}

impl TraceEntry {
    pub fn passes(&self) -> bool {
        self.trace == self.expected
    }
}

/// `trace(A^p)` for `p = 1..p_max` against the alternating 0/2 pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    pub n: u64,
    pub entries: Vec<TraceEntry>,
}

impl TraceTable {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(TraceEntry::passes)
    }
}

/// Tabulates `trace(A_n^p)` for `p = 1..p_max` via repeated squaring.
pub fn trace_table(n: Nat, p_max: u64) -> Result<TraceTable, MatrixError> {
    if n.get() < 2 {
        return Err(MatrixError::OrderTooSmall { n: n.get(), min: 2 });
    }
    assert!(p_max >= 1, "p_max must be positive");
    let a = build_a(n);
    let mut entries = Vec::with_capacity(p_max as usize);
    for p in 1..=p_max {
        entries.push(TraceEntry {
            p,
            trace: a.pow(p)?.trace(),
            expected: expected_trace(p),
        });
    }
    Ok(TraceTable { n: n.get(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_digraph, GraphVariant};

    fn nat(v: u64) -> Nat {
        Nat::new(v).unwrap()
    }

    fn dense(m: &SparseBinaryMatrix) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; m.ncols()]; m.nrows()];
        for (i, j, v) in m.entries() {
            out[(i - m.row_offset()) as usize][(j - m.col_offset()) as usize] = v;
        }
        out
    }

    #[test]
    fn build_a_examples() {
        assert_eq!(dense(&build_a(nat(2))), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(dense(&build_a(nat(1))), vec![vec![0]]);
        let a4 = build_a(nat(4));
        assert_eq!(
            a4.entries().collect::<Vec<_>>(),
            vec![(1, 2, 1), (2, 1, 1), (4, 2, 1)]
        );
    }

    #[test]
    fn build_c_examples() {
        assert!(build_c(nat(3)).unwrap().is_zero());
        assert!(build_c(nat(4)).unwrap().is_zero());
        assert_eq!(build_c(nat(4)).unwrap().nrows(), 2);
        let c5 = build_c(nat(5)).unwrap();
        assert_eq!(c5.entries().collect::<Vec<_>>(), vec![(3, 5, 1)]);
        assert_eq!(c5.index_offset(), 3);
        assert!(matches!(
            build_c(nat(2)),
            Err(MatrixError::OrderTooSmall { n: 2, min: 3 })
        ));
    }

    #[test]
    fn matrix_matches_digraph_adjacency() {
        for n in [3u64, 5, 17, 64] {
            let g = build_digraph(nat(n), GraphVariant::CSub).unwrap();
            assert_eq!(SparseBinaryMatrix::from_digraph(&g), build_c(nat(n)).unwrap());
            let gf = build_digraph(nat(n), GraphVariant::Full).unwrap();
            assert_eq!(SparseBinaryMatrix::from_digraph(&gf), build_a(nat(n)));
        }
    }

    #[test]
    fn mul_examples() {
        let a2 = build_a(nat(2));
        assert_eq!(a2.mul(&a2).unwrap(), SparseBinaryMatrix::identity(2, 1));

        let z = SparseBinaryMatrix::zero(3, 3, 3, 3);
        let c5 = build_c(nat(5)).unwrap();
        assert_eq!(z.mul(&c5).unwrap(), z);
        assert!(c5.mul(&c5).unwrap().is_zero());
    }

    #[test]
    fn mul_rejects_misaligned_operands() {
        let a = build_a(nat(5));
        let c = build_c(nat(5)).unwrap();
        assert!(matches!(a.mul(&c), Err(MatrixError::ShapeMismatch { .. })));
    }

    #[test]
    fn pow_examples() {
        let a2 = build_a(nat(2));
        assert_eq!(a2.pow(3).unwrap(), a2);
        assert_eq!(a2.pow(0).unwrap(), SparseBinaryMatrix::identity(2, 1));
        assert!(build_c(nat(10)).unwrap().pow(5).unwrap().is_zero());
        assert!(!build_c(nat(10)).unwrap().pow(4).unwrap().is_zero());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(build_a(nat(2)).trace(), 0);
        assert_eq!(SparseBinaryMatrix::identity(7, 1).trace(), 7);
        let a2 = build_a(nat(2));
        assert_eq!(a2.pow(2).unwrap().trace(), 2);
    }

    #[test]
    fn nilpotency_index_examples() {
        let idx = |n: u64| build_c(nat(n)).unwrap().nilpotency_index().unwrap();
        assert_eq!(idx(3), MatrixNilpotency::Nilpotent { index: 1 });
        assert_eq!(idx(5), MatrixNilpotency::Nilpotent { index: 2 });
        assert_eq!(idx(10), MatrixNilpotency::Nilpotent { index: 5 });
        assert_eq!(
            build_a(nat(4)).nilpotency_index().unwrap(),
            MatrixNilpotency::NotNilpotent
        );
    }

    #[test]
    fn trace_check_examples() {
        assert_eq!(
            build_c(nat(10)).unwrap().trace_nilpotency_check().unwrap(),
            TraceCheck::Pass
        );
        assert_eq!(
            build_a(nat(2)).trace_nilpotency_check().unwrap(),
            TraceCheck::Fail { p: 2, trace: 2 }
        );
        assert_eq!(
            build_c(nat(3)).unwrap().trace_nilpotency_check().unwrap(),
            TraceCheck::Pass
        );
    }

    #[test]
    fn trace_table_examples() {
        let t = trace_table(nat(2), 4).unwrap();
        assert_eq!(
            t.entries.iter().map(|e| e.trace).collect::<Vec<_>>(),
            vec![0, 2, 0, 2]
        );
        assert!(t.all_pass());

        let t4 = trace_table(nat(4), 1).unwrap();
        assert_eq!(t4.entries[0].trace, 0);
        assert!(t4.all_pass());

        let t100 = trace_table(nat(100), 50).unwrap();
        assert!(t100.all_pass());

        assert!(matches!(
            trace_table(nat(1), 4),
            Err(MatrixError::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn extract_blocks_examples() {
        let d4 = extract_blocks(&build_a(nat(4))).unwrap();
        assert_eq!(d4.b.entries().collect::<Vec<_>>(), vec![(4, 2, 1)]);
        assert!(d4.c.is_zero());

        let d3 = extract_blocks(&build_a(nat(3))).unwrap();
        assert_eq!(d3.b.nnz(), 0);
        assert_eq!(dense(&d3.c), vec![vec![0]]);

        let d5 = extract_blocks(&build_a(nat(5))).unwrap();
        assert_eq!(d5.b.entries().collect::<Vec<_>>(), vec![(4, 2, 1)]);
        assert_eq!(d5.c, build_c(nat(5)).unwrap());
        assert_eq!(d5.a2, build_a(nat(2)));

        assert!(extract_blocks(&build_a(nat(2))).is_err());
    }

    #[test]
    fn reassembly_is_identity() {
        for n in [3u64, 4, 5, 20, 77] {
            let a = build_a(nat(n));
            assert_eq!(extract_blocks(&a).unwrap().reassemble(), a);
        }
    }

    #[test]
    fn set_and_get_round_trip() {
        let mut m = SparseBinaryMatrix::zero(3, 3, 3, 3);
        m.set(5, 3, 1);
        assert_eq!(m.get(5, 3), 1);
        assert_eq!(m.get(3, 5), 0);
        m.set(5, 3, 0);
        assert!(m.is_zero());
    }

    #[test]
    fn block_rejects_bad_ranges() {
        let a = build_a(nat(5));
        assert!(a.block(0..=2, 1..=2).is_err());
        assert!(a.block(1..=6, 1..=2).is_err());
    }
}
