//! Coordinate-list text export of sparse matrices.
//!
//! ```text
//! %hypolab-coo rows=<r> cols=<c> nnz=<n> basis=<hash>
//! <row> <col> <re> <im>
//! ```
//!
//! Indices are zero-based; values use Rust's shortest round-trip formatting.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::sparse::{CsrMatrix, C64};
use crate::error::{Error, Result};

const MAGIC: &str = "%hypolab-coo";
const MAX_DIM: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct CooDocument {
    pub basis: String,
    pub matrix: CsrMatrix,
}

pub fn to_coo(matrix: &CsrMatrix, basis_hash: &str) -> String {
    let mut out = format!(
        "{MAGIC} rows={} cols={} nnz={} basis={basis_hash}\n",
        matrix.nrows(),
        matrix.ncols(),
        matrix.nnz()
    );
    for (i, j, v) in matrix.triplets() {
        writeln!(out, "{i} {j} {:?} {:?}", v.re, v.im).expect("writing to a string");
    }
    out
}

fn header_value<'a>(fields: &[&'a str], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find_map(|f| f.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("header is missing {key}=")))
}

fn parse_usize(s: &str, what: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("line {line}: invalid {what} {s:?}")))
}

fn parse_f64(s: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse(format!("line {line}: invalid {what} {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line}: non-finite {what}")));
    }
    Ok(v)
}

pub fn from_coo(text: &str) -> Result<CooDocument> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty document".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&MAGIC) {
        return Err(Error::Parse(format!("header must start with {MAGIC}")));
    }
    let rows = parse_usize(header_value(&fields, "rows")?, "rows", 1)?;
    let cols = parse_usize(header_value(&fields, "cols")?, "cols", 1)?;
    let nnz = parse_usize(header_value(&fields, "nnz")?, "nnz", 1)?;
    let basis = header_value(&fields, "basis")?.to_string();
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Parse(format!("dimensions {rows}×{cols} are too large")));
    }
    let mut triplets = Vec::with_capacity(nnz.min(1 << 20));
    let mut seen = HashSet::new();
    for (idx, line) in lines {
        let n = idx + 1;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("line {n}: expected 4 fields, got {}", parts.len())));
        }
        let i = parse_usize(parts[0], "row", n)?;
        let j = parse_usize(parts[1], "col", n)?;
        if i >= rows || j >= cols {
            return Err(Error::Parse(format!("line {n}: entry ({i}, {j}) outside {rows}×{cols}")));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Parse(format!("line {n}: duplicate entry ({i}, {j})")));
        }
        triplets.push((i, j, C64::new(parse_f64(parts[2], "re", n)?, parse_f64(parts[3], "im", n)?)));
    }
    if triplets.len() != nnz {
        return Err(Error::Parse(format!("header declares nnz={nnz}, found {} entries", triplets.len())));
    }
    Ok(CooDocument { basis, matrix: CsrMatrix::from_triplets(rows, cols, triplets) })
}
