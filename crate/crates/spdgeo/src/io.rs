//! Matrix file formats.
//!
//! Dense matrices travel as JSON `{"n": <int>, "rows": [[...], ...]}`,
//! row-major. Sparse matrices travel as Matrix Market
//! `coordinate real symmetric` with 1-based indices and the lower triangle
//! stored on disk; in memory both triangles are kept.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dense::DenseSpd;
use crate::error::{Result, SpdError};
use crate::sparse::SparseSpd;

/// A matrix of either storage kind, as read from a file.
#[derive(Clone, Debug)]
pub enum SpdMatrix {
    Dense(DenseSpd),
    Sparse(SparseSpd),
}

impl SpdMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SpdMatrix::Dense(m) => m.dim(),
            SpdMatrix::Sparse(m) => m.dim(),
        }
    }

    /// Densifies sparse input; passes dense input through.
    pub fn into_dense(self) -> Result<DenseSpd> {
        match self {
            SpdMatrix::Dense(m) => Ok(m),
            SpdMatrix::Sparse(m) => m.to_dense(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DenseJson {
    n: usize,
    rows: Vec<Vec<f64>>,
}

/// Reads a matrix file, sniffing the format from the first byte:
/// `%` starts Matrix Market, `{` starts the dense JSON schema.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<SpdMatrix> {
    let text = fs::read_to_string(path.as_ref())?;
    match text.trim_start().chars().next() {
        Some('%') => Ok(SpdMatrix::Sparse(parse_matrix_market(&text)?)),
        Some('{') => Ok(SpdMatrix::Dense(parse_dense_json(&text)?)),
        _ => Err(SpdError::Parse(
            "unrecognized matrix format: expected '%%MatrixMarket' or JSON object".into(),
        )),
    }
}

/// Writes a matrix in the format matching its kind.
pub fn write_matrix(m: &SpdMatrix, path: impl AsRef<Path>) -> Result<()> {
    match m {
        SpdMatrix::Dense(d) => write_dense(d, path),
        SpdMatrix::Sparse(s) => write_sparse(s, path),
    }
}

pub fn write_dense(m: &DenseSpd, path: impl AsRef<Path>) -> Result<()> {
    let n = m.dim();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.matrix()[(i, j)]).collect())
        .collect();
    let body = serde_json::to_string(&DenseJson { n, rows })
        .map_err(|e| SpdError::Parse(e.to_string()))?;
    let mut f = fs::File::create(path.as_ref())?;
    f.write_all(body.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn write_sparse(m: &SparseSpd, path: impl AsRef<Path>) -> Result<()> {
    let n = m.dim();
    let mut lines = String::new();
    lines.push_str("%%MatrixMarket matrix coordinate real symmetric\n");
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..n {
        for (j, v) in m.row(i) {
            if j <= i {
                entries.push((i, j, v));
            }
        }
    }
    lines.push_str(&format!("{} {} {}\n", n, n, entries.len()));
    for (i, j, v) in entries {
        lines.push_str(&format!("{} {} {:.16e}\n", i + 1, j + 1, v));
    }
    let mut f = fs::File::create(path.as_ref())?;
    f.write_all(lines.as_bytes())?;
    Ok(())
}

fn parse_dense_json(text: &str) -> Result<DenseSpd> {
    let parsed: DenseJson =
        serde_json::from_str(text).map_err(|e| SpdError::Parse(e.to_string()))?;
    let n = parsed.n;
    if parsed.rows.len() != n || parsed.rows.iter().any(|r| r.len() != n) {
        return Err(SpdError::Parse(format!(
            "dense matrix body does not match declared dimension {n}"
        )));
    }
    let mat = DMatrix::from_fn(n, n, |i, j| parsed.rows[i][j]);
    DenseSpd::from_matrix(mat)
}

fn parse_matrix_market(text: &str) -> Result<SparseSpd> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| SpdError::Parse("empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 5
        || fields[0] != "%%MatrixMarket"
        || fields[1] != "matrix"
        || fields[2] != "coordinate"
        || fields[3] != "real"
        || fields[4] != "symmetric"
    {
        return Err(SpdError::Parse(format!(
            "unsupported Matrix Market header: {header:?} \
             (expected 'matrix coordinate real symmetric')"
        )));
    }
    let mut data_lines = lines.filter(|l| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let size_line = data_lines
        .next()
        .ok_or_else(|| SpdError::Parse("missing size line".into()))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(SpdError::Parse(format!("malformed size line: {size_line:?}")));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| SpdError::Parse("cannot parse row count".into()))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| SpdError::Parse("cannot parse column count".into()))?;
    let nnz: usize = dims[2]
        .parse()
        .map_err(|_| SpdError::Parse("cannot parse entry count".into()))?;
    if rows != cols {
        return Err(SpdError::Parse(format!(
            "matrix must be square, got {rows}x{cols}"
        )));
    }
    let mut entries = Vec::with_capacity(nnz);
    for line in data_lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(SpdError::Parse(format!("malformed entry line: {line:?}")));
        }
        let i: usize = parts[0]
            .parse()
            .map_err(|_| SpdError::Parse(format!("cannot parse row index in {line:?}")))?;
        let j: usize = parts[1]
            .parse()
            .map_err(|_| SpdError::Parse(format!("cannot parse column index in {line:?}")))?;
        let v: f64 = parts[2]
            .parse()
            .map_err(|_| SpdError::Parse(format!("cannot parse value in {line:?}")))?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(SpdError::Parse(format!(
                "index ({i}, {j}) out of bounds (1-based, dimension {rows})"
            )));
        }
        entries.push((i - 1, j - 1, v));
    }
    if entries.len() != nnz {
        return Err(SpdError::Parse(format!(
            "entry count mismatch: header says {nnz}, found {}",
            entries.len()
        )));
    }
    SparseSpd::from_entries(rows, &entries)
}
