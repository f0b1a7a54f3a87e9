//! CSV readers and writers for matrices and label files.
//!
//! Matrices are comma-separated, one object per row. A single header row is
//! skipped when none of its cells parse as numbers. Label files have an
//! `object_id,label` header followed by one row per object.
//!
//! Row and column numbers in parse errors are 1-based file positions.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{AlcError, Result};
use crate::partition::Partition;

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn csv_error(e: csv::Error) -> AlcError {
    match e.position() {
        Some(pos) => AlcError::Parse {
            row: pos.line() as usize,
            column: 0,
            message: e.to_string(),
        },
        None => AlcError::Io(e.to_string()),
    }
}

fn parse_cell(cell: &str, row: usize, column: usize) -> Result<f64> {
    if cell.is_empty() {
        return Err(AlcError::Parse {
            row,
            column,
            message: "missing value".into(),
        });
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(AlcError::Parse {
            row,
            column,
            message: format!("non-finite value {cell:?}"),
        }),
        Err(_) => Err(AlcError::Parse {
            row,
            column,
            message: format!("not a number: {cell:?}"),
        }),
    }
}

/// Reads a rectangular numeric matrix. Returns `(rows, cols, row-major values)`.
pub fn read_matrix<R: Read>(r: R) -> Result<(usize, usize, Vec<f64>)> {
    let mut rdr = reader(r);
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if k == 0 && rec.iter().all(|c| c.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() == 1 && rec.get(0) == Some("") {
            return Err(AlcError::Parse {
                row: line,
                column: 1,
                message: "empty row".into(),
            });
        }
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => {
                return Err(AlcError::Parse {
                    row: line,
                    column: rec.len().min(c) + 1,
                    message: format!("row has {} columns, expected {c}", rec.len()),
                })
            }
            _ => {}
        }
        for (j, cell) in rec.iter().enumerate() {
            values.push(parse_cell(cell, line, j + 1)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| AlcError::InvalidInput("no data rows".into()))?;
    Ok((rows, cols, values))
}

pub fn write_matrix<W: Write>(w: W, cols: usize, values: &[f64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(w);
    for row in values.chunks(cols) {
        let mut first = true;
        for v in row {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            write!(out, "{v}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an `object_id,label` file into a partition over `0..N`.
///
/// Every object id must appear exactly once and the ids must cover `0..N`;
/// when `expected` is given, `N` must equal it. Labels are arbitrary strings.
pub fn read_labels<R: Read>(r: R, expected: Option<usize>) -> Result<Partition> {
    let mut rdr = reader(r);
    let mut by_id: HashMap<usize, String> = HashMap::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        let id_cell = rec.get(0).unwrap_or("");
        if k == 0 && id_cell.parse::<usize>().is_err() {
            continue;
        }
        if rec.len() != 2 {
            return Err(AlcError::Parse {
                row: line,
                column: rec.len().min(2) + 1,
                message: format!("expected 2 columns (object_id,label), got {}", rec.len()),
            });
        }
        let id = id_cell.parse::<usize>().map_err(|_| AlcError::Parse {
            row: line,
            column: 1,
            message: format!("object_id is not a non-negative integer: {id_cell:?}"),
        })?;
        let label = rec.get(1).unwrap_or("");
        if label.is_empty() {
            return Err(AlcError::Parse {
                row: line,
                column: 2,
                message: "missing label".into(),
            });
        }
        if by_id.insert(id, label.to_string()).is_some() {
            return Err(AlcError::Parse {
                row: line,
                column: 1,
                message: format!("duplicate object_id {id}"),
            });
        }
    }
    let n = expected.unwrap_or(by_id.len());
    if by_id.len() != n {
        return Err(AlcError::InvalidInput(format!(
            "label file lists {} objects, expected {n}",
            by_id.len()
        )));
    }
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        match by_id.get(&i) {
            Some(l) => raw.push(l.as_str()),
            None => {
                return Err(AlcError::InvalidInput(format!(
                    "label file has no entry for object {i}"
                )))
            }
        }
    }
    Ok(Partition::from_labels(&raw))
}

pub fn write_labels<W: Write>(w: W, partition: &Partition) -> Result<()> {
    let mut out = std::io::BufWriter::new(w);
    writeln!(out, "object_id,label")?;
    for (i, l) in partition.labels().iter().enumerate() {
        writeln!(out, "{i},{l}")?;
    }
    out.flush()?;
    Ok(())
}
