//! Sparse-matrix interchange in alist text form, plus the provenance
//! sidecar for stacked bundles.
//!
//! The layout, fixed here so files round-trip bit-exactly:
//!
//! ```text
//! nrows ncols
//! max_col_weight max_row_weight
//! ncols column degrees
//! nrows row degrees
//! ncols lines: 1-based row indices per column, zero-padded to max_col_weight
//! nrows lines: 1-based column indices per row, zero-padded to max_row_weight
//! ```
//!
//! Note the header is row count first. Index lists carry real entries
//! first, then literal `0` padding. The parser is strict: degree lists,
//! index lists and padding must all be mutually consistent.
//!
//! A bundle is stored as the alist of its matrix plus a JSON sidecar at
//! `<path>.provenance.json` recording the per-source row ranges and rank.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{stack, BaseMatrixBundle, BundleSource};
use crate::gf2::{BitMatrix, BitVector};

/// Renders a matrix in alist form.
pub fn matrix_to_alist(m: &BitMatrix) -> String {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, row) in m.rows().enumerate() {
        for j in row.ones() {
            cols[j].push(i + 1);
        }
    }
    let rows: Vec<Vec<usize>> = m
        .rows()
        .map(|r| r.ones().map(|j| j + 1).collect())
        .collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{nrows} {ncols}\n"));
    out.push_str(&format!("{max_col} {max_row}\n"));
    push_list(&mut out, cols.iter().map(Vec::len));
    push_list(&mut out, rows.iter().map(Vec::len));
    for col in &cols {
        push_padded(&mut out, col, max_col);
    }
    for row in &rows {
        push_padded(&mut out, row, max_row);
    }
    out
}

fn push_list(out: &mut String, items: impl Iterator<Item = usize>) {
    let rendered: Vec<String> = items.map(|v| v.to_string()).collect();
    out.push_str(&rendered.join(" "));
    out.push('\n');
}

fn push_padded(out: &mut String, entries: &[usize], width: usize) {
    push_list(
        out,
        entries
            .iter()
            .copied()
            .chain(std::iter::repeat(0))
            .take(width),
    );
}

fn take(it: &mut std::vec::IntoIter<usize>, what: &str) -> Result<usize> {
    it.next()
        .ok_or_else(|| Error::BadAlist(format!("missing {what}")))
}

/// One zero-padded index block: `degrees.len()` lists of `width` slots,
/// each holding its declared number of 1-based indices then zeros.
fn take_block(
    it: &mut std::vec::IntoIter<usize>,
    degrees: &[usize],
    width: usize,
    limit: usize,
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    degrees
        .iter()
        .map(|&degree| {
            let mut entries = Vec::with_capacity(degree);
            for slot in 0..width {
                let v = take(it, what)?;
                if slot < degree {
                    if v == 0 || v > limit {
                        return Err(Error::BadAlist(format!(
                            "{what} index {v} out of range 1..={limit}"
                        )));
                    }
                    entries.push(v - 1);
                } else if v != 0 {
                    return Err(Error::BadAlist(format!(
                        "expected zero padding in {what} list, got {v}"
                    )));
                }
            }
            Ok(entries)
        })
        .collect()
}

/// Parses alist text back into a matrix, validating both index lists
/// against each other.
pub fn matrix_from_alist(text: &str) -> Result<BitMatrix> {
    let values: Vec<usize> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::BadAlist(format!("non-numeric token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let mut it = values.into_iter();

    let nrows = take(&mut it, "row count")?;
    let ncols = take(&mut it, "column count")?;
    if ncols == 0 {
        return Err(Error::BadAlist("column count must be positive".into()));
    }
    let max_col = take(&mut it, "max column weight")?;
    let max_row = take(&mut it, "max row weight")?;
    let col_degrees: Vec<usize> = (0..ncols)
        .map(|_| take(&mut it, "column degree"))
        .collect::<Result<_>>()?;
    let row_degrees: Vec<usize> = (0..nrows)
        .map(|_| take(&mut it, "row degree"))
        .collect::<Result<_>>()?;
    if col_degrees.iter().any(|&d| d > max_col) || row_degrees.iter().any(|&d| d > max_row) {
        return Err(Error::BadAlist("degree exceeds declared maximum".into()));
    }

    let col_lists = take_block(&mut it, &col_degrees, max_col, nrows, "column")?;
    let row_lists = take_block(&mut it, &row_degrees, max_row, ncols, "row")?;
    if it.next().is_some() {
        return Err(Error::BadAlist("trailing tokens after index lists".into()));
    }

    let mut rows = Vec::with_capacity(nrows);
    for list in &row_lists {
        let mut row = BitVector::zeros(ncols);
        for &j in list {
            if row.get(j) {
                return Err(Error::BadAlist(format!("duplicate column index {}", j + 1)));
            }
            row.set(j, true);
        }
        rows.push(row);
    }
    let matrix = BitMatrix::from_rows(rows, ncols)?;

    // The column lists are redundant; require they describe the same matrix.
    let mut cols_check: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, row) in matrix.rows().enumerate() {
        for j in row.ones() {
            cols_check[j].push(i);
        }
    }
    if cols_check != col_lists {
        return Err(Error::BadAlist(
            "column lists disagree with row lists".into(),
        ));
    }
    Ok(matrix)
}

pub fn write_matrix_file(path: &Path, m: &BitMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_alist(m))?;
    Ok(())
}

pub fn read_matrix_file(path: &Path) -> Result<BitMatrix> {
    matrix_from_alist(&std::fs::read_to_string(path)?)
}

#[derive(Serialize, Deserialize)]
struct Provenance {
    nrows: usize,
    ncols: usize,
    rank: usize,
    sources: Vec<BundleSource>,
}

/// Provenance sidecar location for a given alist path.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".provenance.json");
    os.into()
}

/// Writes `<path>` as alist and `<path>.provenance.json` as the sidecar.
pub fn write_bundle_files(path: &Path, bundle: &BaseMatrixBundle) -> Result<()> {
    write_matrix_file(path, bundle.matrix())?;
    let prov = Provenance {
        nrows: bundle.nrows(),
        ncols: bundle.ncols(),
        rank: bundle.rank(),
        sources: bundle.sources().to_vec(),
    };
    let json = serde_json::to_string_pretty(&prov)
        .map_err(|e| Error::BadReport(e.to_string()))?;
    std::fs::write(sidecar_path(path), json)?;
    Ok(())
}

/// Reads a bundle written by [`write_bundle_files`], revalidating the
/// sidecar against the matrix.
pub fn read_bundle_files(path: &Path) -> Result<BaseMatrixBundle> {
    let matrix = read_matrix_file(path)?;
    let json = std::fs::read_to_string(sidecar_path(path))?;
    let prov: Provenance =
        serde_json::from_str(&json).map_err(|e| Error::BadReport(e.to_string()))?;
    if prov.nrows != matrix.nrows() || prov.ncols != matrix.ncols() {
        return Err(Error::BadReport(
            "provenance sidecar shape disagrees with the alist".into(),
        ));
    }
    let mut expected_start = 0;
    let mut parts = Vec::with_capacity(prov.sources.len());
    for source in prov.sources {
        if source.start != expected_start || source.end < source.start {
            return Err(Error::BadReport(
                "provenance row ranges do not partition the matrix".into(),
            ));
        }
        expected_start = source.end;
        let rows = (source.start..source.end.min(matrix.nrows()))
            .map(|i| matrix.row(i).clone())
            .collect();
        parts.push((source.origin, BitMatrix::from_rows(rows, matrix.ncols())?));
    }
    if expected_start != matrix.nrows() {
        return Err(Error::BadReport(
            "provenance row ranges do not partition the matrix".into(),
        ));
    }
    let bundle = stack(parts)?;
    if bundle.rank() != prov.rank {
        return Err(Error::BadReport(
            "provenance rank disagrees with the matrix".into(),
        ));
    }
    Ok(bundle)
}
