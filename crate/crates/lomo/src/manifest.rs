//! Dataset manifests: CSV with header `id,label,group,path`.
//!
//! Relative paths are resolved against the manifest's directory. Parsing
//! loads every referenced sequence; the dimension of the first one is
//! enforced on the rest.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use lomo_core::cv::Record;

use crate::error::{Error, Result};
use crate::sequence_file::read_sequence;

pub const HEADER: [&str; 4] = ["id", "label", "group", "path"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub label: String,
    pub group: String,
    /// Resolved path of the sequence file.
    pub path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub dim: usize,
    pub entries: Vec<ManifestEntry>,
    /// Loaded sequences, parallel to `entries`.
    pub records: Vec<Record>,
}

impl Manifest {
    /// Sorted distinct labels.
    pub fn labels(&self) -> Vec<&str> {
        let mut labels: Vec<&str> = self.entries.iter().map(|e| e.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }
}

fn record_err(id: &str, msg: impl Into<String>) -> Error {
    Error::Record {
        id: id.to_string(),
        msg: msg.into(),
    }
}

pub fn parse_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());

    let header = csv.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(Error::parse(
            path,
            1,
            format!("expected header '{}'", HEADER.join(",")),
        ));
    }

    let mut entries = Vec::new();
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut dim = None;
    for (i, row) in csv.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let (id, label, group, rel) = (&row[0], &row[1], &row[2], &row[3]);
        if id.is_empty() {
            return Err(Error::parse(path, line, "empty id"));
        }
        if label.is_empty() {
            return Err(record_err(id, "empty label"));
        }
        if !seen.insert(id.to_string()) {
            return Err(record_err(id, "duplicate id"));
        }
        let seq_path = base.join(rel);
        if !seq_path.is_file() {
            return Err(record_err(
                id,
                format!("missing sequence file {}", seq_path.display()),
            ));
        }
        let sequence = read_sequence(&seq_path, id).map_err(|e| record_err(id, e.to_string()))?;
        match dim {
            None => dim = Some(sequence.dim()),
            Some(d) if d != sequence.dim() => {
                return Err(record_err(
                    id,
                    format!("dimension {} differs from the manifest's {d}", sequence.dim()),
                ))
            }
            Some(_) => {}
        }
        records.push(Record {
            label: label.to_string(),
            group: group.to_string(),
            sequence,
        });
        entries.push(ManifestEntry {
            id: id.to_string(),
            label: label.to_string(),
            group: group.to_string(),
            path: seq_path,
        });
    }
    let dim = dim.ok_or_else(|| Error::parse(path, 2, "manifest lists no records"))?;
    Ok(Manifest {
        dim,
        entries,
        records,
    })
}

/// Writes a manifest whose paths are stored as given.
pub fn write_manifest(path: &Path, rows: &[(String, String, String, String)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::io(path, e.into());
    w.write_record(HEADER).map_err(io)?;
    for (id, label, group, p) in rows {
        w.write_record([id, label, group, p]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
