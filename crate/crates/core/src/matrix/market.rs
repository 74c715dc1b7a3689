//! Matrix Market coordinate export and import.
//!
//! Coordinates are written in *label* space, so the single entry of the
//! `n = 5` deleted-vertex submatrix reads `3 5 1`, matching the labeling of
//! its rows and columns by `{3..5}`. A header comment records the offset;
//! an importer that wants 1-based storage coordinates subtracts
//! `offset - 1`. Entries are sorted by row then column and files end with a
//! newline, so exports are byte-reproducible.

use thiserror::Error;

use super::SparseBinaryMatrix;

pub const BANNER: &str = "%%MatrixMarket matrix coordinate integer general";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error("missing or unsupported banner; expected `{BANNER}`")]
    BadBanner,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: entry ({i}, {j}) duplicated")]
    Duplicate { line: usize, i: u64, j: u64 },
    #[error("line {line}: label ({i}, {j}) outside the declared shape")]
    LabelOutOfRange { line: usize, i: u64, j: u64 },
    #[error("declared {declared} entries, found {found}")]
    CountMismatch { declared: usize, found: usize },
}

/// Renders a matrix in coordinate format with labeled indices.
pub fn write_matrix_market(m: &SparseBinaryMatrix) -> String {
    let mut out = String::new();
    out.push_str(BANNER);
    out.push('\n');
    if m.row_offset() == m.col_offset() {
        out.push_str(&format!("%% index_offset: {}\n", m.row_offset()));
    } else {
        out.push_str(&format!("%% row_offset: {}\n", m.row_offset()));
        out.push_str(&format!("%% col_offset: {}\n", m.col_offset()));
    }
    out.push_str(&format!("{} {} {}\n", m.nrows(), m.ncols(), m.nnz()));
    for (i, j, v) in m.entries() {
        out.push_str(&format!("{} {} {}\n", i, j, v));
    }
    out
}

/// Parses coordinate format produced by [`write_matrix_market`]. Offset
/// comments are honored; absent any, labels are taken to start at 1.
pub fn read_matrix_market(input: &str) -> Result<SparseBinaryMatrix, MarketError> {
    let mut lines = input.lines().enumerate();

    let banner = lines.next().ok_or(MarketError::BadBanner)?.1.trim();
    if !banner.eq_ignore_ascii_case(BANNER) {
        return Err(MarketError::BadBanner);
    }

    let mut row_offset: u64 = 1;
    let mut col_offset: u64 = 1;
    let mut size_line = None;
    for (lineno, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('%') {
            let comment = comment.trim_start_matches('%').trim();
            for (key, slot) in [
                ("index_offset:", None),
                ("row_offset:", Some(true)),
                ("col_offset:", Some(false)),
            ] {
                if let Some(rest) = comment.strip_prefix(key) {
                    let value = rest.trim().parse::<u64>().map_err(|e| MarketError::Parse {
                        line: lineno + 1,
                        reason: format!("bad offset: {e}"),
                    })?;
                    match slot {
                        None => {
                            row_offset = value;
                            col_offset = value;
                        }
                        Some(true) => row_offset = value,
                        Some(false) => col_offset = value,
                    }
                }
            }
            continue;
        }
        size_line = Some((lineno, line.to_string()));
        break;
    }

    let (size_lineno, size_line) = size_line.ok_or(MarketError::Parse {
        line: input.lines().count(),
        reason: "missing size line".into(),
    })?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(MarketError::Parse {
            line: size_lineno + 1,
            reason: "size line must be `nrows ncols nnz`".into(),
        });
    }
    let parse_usize = |s: &str, lineno: usize| {
        s.parse::<usize>().map_err(|e| MarketError::Parse {
            line: lineno + 1,
            reason: format!("bad size field `{s}`: {e}"),
        })
    };
    let nrows = parse_usize(dims[0], size_lineno)?;
    let ncols = parse_usize(dims[1], size_lineno)?;
    let nnz = parse_usize(dims[2], size_lineno)?;
    if nrows == 0 || ncols == 0 {
        return Err(MarketError::Parse {
            line: size_lineno + 1,
            reason: "matrix must be nonempty".into(),
        });
    }

    let mut m = SparseBinaryMatrix::zero(nrows, ncols, row_offset, col_offset);
    let mut found = 0usize;
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MarketError::Parse {
                line: lineno + 1,
                reason: "entry must be `row col value`".into(),
            });
        }
        let parse_u64 = |s: &str| {
            s.parse::<u64>().map_err(|e| MarketError::Parse {
                line: lineno + 1,
                reason: format!("bad entry field `{s}`: {e}"),
            })
        };
        let i = parse_u64(fields[0])?;
        let j = parse_u64(fields[1])?;
        let v = parse_u64(fields[2])?;
        if i < row_offset
            || i >= row_offset + nrows as u64
            || j < col_offset
            || j >= col_offset + ncols as u64
        {
            return Err(MarketError::LabelOutOfRange {
                line: lineno + 1,
                i,
                j,
            });
        }
        if m.get(i, j) != 0 {
            return Err(MarketError::Duplicate {
                line: lineno + 1,
                i,
                j,
            });
        }
        m.set(i, j, v);
        found += 1;
    }
    if found != nnz {
        return Err(MarketError::CountMismatch {
            declared: nnz,
            found,
        });
    }
    Ok(m)
}
