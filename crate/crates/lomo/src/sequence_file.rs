//! Header-less CSV sequences: one row per frame, `d` decimal columns.

use std::fs;
use std::io::Read;
use std::path::Path;

use lomo_core::FrameSequence;

use crate::error::{Error, Result};
use crate::fmt_f64;

/// Parse failure at a 1-based row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub row: usize,
    pub msg: String,
}

pub fn parse_sequence<R: Read>(id: &str, reader: R) -> std::result::Result<FrameSequence, RowError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut dim = 0;
    let mut data = Vec::new();
    let mut rows = 0;
    for (i, rec) in csv.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| RowError {
            row,
            msg: e.to_string(),
        })?;
        if row == 1 {
            dim = rec.len();
        } else if rec.len() != dim {
            return Err(RowError {
                row,
                msg: format!("ragged row: expected {dim} columns, found {}", rec.len()),
            });
        }
        for (col, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| RowError {
                row,
                msg: format!("column {}: '{cell}' is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(RowError {
                    row,
                    msg: format!("column {}: non-finite value '{cell}'", col + 1),
                });
            }
            data.push(v);
        }
        rows = row;
    }
    if rows == 0 {
        return Err(RowError {
            row: 1,
            msg: "empty sequence file".into(),
        });
    }
    FrameSequence::from_flat(id, dim, data).map_err(|e| RowError {
        row: 1,
        msg: e.to_string(),
    })
}

pub fn read_sequence(path: &Path, id: &str) -> Result<FrameSequence> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_sequence(id, std::io::BufReader::new(file)).map_err(|e| Error::parse(path, e.row, e.msg))
}

pub fn format_sequence(seq: &FrameSequence) -> String {
    let mut out = String::new();
    for frame in seq.frames() {
        let row: Vec<String> = frame.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_sequence(path: &Path, seq: &FrameSequence) -> Result<()> {
    fs::write(path, format_sequence(seq)).map_err(|e| Error::io(path, e))
}
