//! Writes a synthetic benchmark as a dataset directory.

use std::fs;
use std::path::Path;

use lomo_core::synth::{generate, NegativeMode, SynthDataset, SynthSpec};

use crate::error::{Error, Result};
use crate::manifest::write_manifest;
use crate::sequence_file::write_sequence;

pub fn spec_text(spec: &SynthSpec) -> String {
    let mode = match spec.neg_mode {
        NegativeMode::Shuffled => "shuffled",
        NegativeMode::Absent => "absent",
    };
    format!(
        "d={}\nn={}\nm_true={}\nnoise_sigma={}\nmin_gap={}\nn_pos={}\nn_neg={}\nneg_mode={mode}\ngroups={}\nseed={}\n",
        spec.dim,
        spec.frames,
        spec.planted,
        spec.noise_sigma,
        spec.min_gap,
        spec.n_pos,
        spec.n_neg,
        spec.groups,
        spec.seed
    )
}

/// Generates the dataset and writes `manifest.csv`, `spec.txt` and one
/// `seq_<id>.csv` per record into `dir` (created if missing).
pub fn write_synthetic(spec: &SynthSpec, dir: &Path) -> Result<SynthDataset> {
    let data = generate(spec)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut rows = Vec::with_capacity(data.records.len());
    for rec in &data.records {
        let file = format!("seq_{}.csv", rec.id());
        write_sequence(&dir.join(&file), &rec.sequence)?;
        rows.push((
            rec.id().to_string(),
            rec.label.to_string(),
            rec.group.clone(),
            file,
        ));
    }
    write_manifest(&dir.join("manifest.csv"), &rows)?;
    let spec_path = dir.join("spec.txt");
    fs::write(&spec_path, spec_text(spec)).map_err(|e| Error::io(&spec_path, e))?;
    Ok(data)
}
