/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! CSV formats.
//!
//! * Matrices: headerless dense CSV, one matrix row per line. The dimension
//!   is inferred from the number of lines.
//! * Sample sets: headerless CSV, one observation per line.
//! * Metric tables, per-run records, rate tables and iteration traces:
//!   headered CSV with the column order of the corresponding row type.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! reading a file back yields bit-identical values.

use std::io::{Read, Write};

use serde::Serialize;

use crate::datagen::SampleSet;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        kind => Error::Parse {
            line,
            message: format!("{kind:?}"),
        },
    }
}

fn format_value(x: f64) -> String {
    format!("{x:?}")
}

fn read_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("field {} ({field:?}): {e}", col + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("row has {} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn write_rows<'a, W: Write>(writer: W, rows: impl Iterator<Item = &'a [f64]>) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    for row in rows {
        wtr.write_record(row.iter().map(|&x| format_value(x)))
            .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a square matrix. The input is symmetrized as `(A + Aᵀ)/2`.
pub fn read_matrix_csv<R: Read>(reader: R) -> Result<SymMatrix> {
    let rows = read_rows(reader)?;
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "empty matrix".into(),
        });
    }
    let cols = rows[0].len();
    if cols != rows.len() {
        return Err(Error::NotSquare {
            rows: rows.len(),
            cols,
        });
    }
    SymMatrix::from_rows(&rows)
}

pub fn write_matrix_csv<W: Write>(writer: W, m: &SymMatrix) -> Result<()> {
    write_rows(writer, (0..m.dim()).map(|i| m.row(i)))
}

pub fn read_samples_csv<R: Read>(reader: R) -> Result<SampleSet> {
    SampleSet::from_rows(&read_rows(reader)?)
}

pub fn write_samples_csv<W: Write>(writer: W, samples: &SampleSet) -> Result<()> {
    write_rows(writer, samples.iter())
}

/// Writes serializable rows as a headered CSV table.
pub fn write_table<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for row in rows {
        wtr.serialize(row).map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}
