//! File formats, dataset handling and the command-line front end for
//! [`lomo_core`].
//!
//! * model files: versioned plain text (`LOMO v1`), see [`model_file`]
//! * sequences: header-less CSV, one frame per row, see [`sequence_file`]
//! * manifests: `id,label,group,path` CSV, see [`manifest`]
//! * result, score and timeline CSVs, see [`reports`]

pub mod cli;
pub mod error;
pub mod manifest;
pub mod model_file;
pub mod reports;
pub mod sequence_file;
pub mod synth_dir;

pub use error::{Error, Result};

/// Shortest decimal that parses back to exactly `v`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
