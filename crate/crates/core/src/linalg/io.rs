//! Matrix file I/O: MatrixMarket dense array format and plain CSV.
//!
//! Both readers reject NaN/Inf so files cannot smuggle non-finite values
//! into solver state.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{DenseMatrix, DenseVector};
use crate::{Error, Result};

const MM_HEADER: &str = "%%MatrixMarket matrix array real general";

/// Write a matrix in MatrixMarket dense array format (column-major entries).
pub fn write_matrix_market(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{MM_HEADER}")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            writeln!(w, "{}", m.get(i, j))?;
        }
    }
    Ok(())
}

pub fn read_matrix_market(path: &Path) -> Result<DenseMatrix> {
    let r = BufReader::new(File::open(path)?);
    let mut lines = r.lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty MatrixMarket file".into()))??;
    if !header.trim().eq_ignore_ascii_case(MM_HEADER) {
        return Err(Error::Parse(format!(
            "unsupported MatrixMarket header: {header}"
        )));
    }

    let mut dims: Option<(usize, usize)> = None;
    let mut entries: Vec<f64> = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if dims.is_none() {
            let mut it = t.split_whitespace();
            let rows = parse_usize(it.next(), "row count")?;
            let cols = parse_usize(it.next(), "column count")?;
            dims = Some((rows, cols));
            continue;
        }
        for tok in t.split_whitespace() {
            entries.push(parse_finite(tok)?);
        }
    }

    let (rows, cols) = dims.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            entries.len()
        )));
    }
    // File order is column-major.
    let mut data = vec![0.0; rows * cols];
    for (idx, &x) in entries.iter().enumerate() {
        let (j, i) = (idx / rows, idx % rows);
        data[i * cols + j] = x;
    }
    DenseMatrix::new(rows, cols, data)
}

/// Write a matrix as plain CSV: one row per line, comma-separated, `.`
/// decimal separator.
pub fn write_csv_matrix(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_csv_matrix(path: &Path) -> Result<DenseMatrix> {
    let r = BufReader::new(File::open(path)?);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in r.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let row: Result<Vec<f64>> = t.split(',').map(|tok| parse_finite(tok.trim())).collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty CSV matrix".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged CSV rows".into()));
    }
    let data: Vec<f64> = rows.into_iter().flatten().collect();
    let n_rows = data.len() / cols;
    DenseMatrix::new(n_rows, cols, data)
}

/// Write a vector as a single-column CSV.
pub fn write_csv_vector(path: &Path, v: &DenseVector) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for x in v.as_slice() {
        writeln!(w, "{x}")?;
    }
    Ok(())
}

pub fn read_csv_vector(path: &Path) -> Result<DenseVector> {
    let r = BufReader::new(File::open(path)?);
    let mut data = Vec::new();
    for line in r.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        data.push(parse_finite(t)?);
    }
    DenseVector::new(data)
}

fn parse_usize(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
}

fn parse_finite(tok: &str) -> Result<f64> {
    let x: f64 = tok
        .parse()
        .map_err(|e| Error::Parse(format!("bad numeric value {tok:?}: {e}")))?;
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite value {tok:?} rejected")));
    }
    Ok(x)
}
