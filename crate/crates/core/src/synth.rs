//! Synthetic benchmark with planted sub-events.
//!
//! Every sequence is Gaussian background noise. Positives contain the
//! `M_true` prototype directions at increasing positions, in canonical order.
//! In [`NegativeMode::Shuffled`] negatives contain the same prototypes in a
//! random non-identity order, so the two classes differ only in ordering; in
//! [`NegativeMode::Absent`] negatives contain no prototypes at all.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::{factorial, perm_unrank, MAX_TEMPLATES};
use crate::preprocess::l2_normalize;
use crate::rng::Rng;
use crate::sequence::FrameSequence;

pub const POSITIVE_LABEL: &str = "pos";
pub const NEGATIVE_LABEL: &str = "neg";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativeMode {
    Shuffled,
    Absent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub dim: usize,
    pub frames: usize,
    pub planted: usize,
    pub noise_sigma: f64,
    pub min_gap: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub neg_mode: NegativeMode,
    /// Number of subject groups; example `i` of each class goes to group `i mod groups`.
    pub groups: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            dim: 20,
            frames: 40,
            planted: 3,
            noise_sigma: 0.3,
            min_gap: 5,
            n_pos: 200,
            n_neg: 200,
            neg_mode: NegativeMode::Shuffled,
            groups: 10,
            seed: 7,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dim == 0 {
            return fail("d must be at least 1".into());
        }
        if self.planted == 0 || self.planted > MAX_TEMPLATES {
            return fail(format!("M_true must lie in 1..={MAX_TEMPLATES}"));
        }
        if self.frames <= self.planted * (self.min_gap + 1) {
            return fail(format!(
                "N={} must exceed M_true*(min_gap+1)={}",
                self.frames,
                self.planted * (self.min_gap + 1)
            ));
        }
        if self.neg_mode == NegativeMode::Shuffled && self.planted < 2 {
            return fail("shuffled negatives need M_true >= 2 (no non-identity order exists)".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return fail(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        if self.n_pos + self.n_neg == 0 {
            return fail("at least one sequence must be generated".into());
        }
        if self.groups == 0 {
            return fail("groups must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthRecord {
    pub label: &'static str,
    pub group: String,
    pub sequence: FrameSequence,
    /// 0-based frame holding prototype `i`; empty when nothing is planted.
    pub planted_at: Vec<usize>,
}

impl SynthRecord {
    pub fn id(&self) -> &str {
        self.sequence.id()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub prototypes: Vec<Vec<f64>>,
    pub records: Vec<SynthRecord>,
}

/// Strictly increasing positions in `0..n` with consecutive differences of at
/// least `min_gap + 1`.
fn draw_positions(rng: &mut Rng, n: usize, count: usize, min_gap: usize) -> Vec<usize> {
    let step = min_gap + 1;
    let slack = n - 1 - (count - 1) * step;
    let mut base: Vec<usize> = (0..count).map(|_| rng.below(slack + 1)).collect();
    base.sort_unstable();
    base.iter().enumerate().map(|(i, b)| b + i * step).collect()
}

pub fn generate(spec: &SynthSpec) -> Result<SynthDataset> {
    spec.validate()?;
    let mut rng = Rng::new(spec.seed);
    let (d, n, m, sigma) = (spec.dim, spec.frames, spec.planted, spec.noise_sigma);

    let prototypes: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            let raw: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
            l2_normalize(&raw)
        })
        .collect();

    let width = (spec.n_pos.max(spec.n_neg).max(2) - 1).ilog10() as usize + 1;
    let mut records = Vec::with_capacity(spec.n_pos + spec.n_neg);
    for (label, count) in [(POSITIVE_LABEL, spec.n_pos), (NEGATIVE_LABEL, spec.n_neg)] {
        for i in 0..count {
            let mut data: Vec<f64> = (0..n * d).map(|_| sigma * rng.normal()).collect();
            let plant = label == POSITIVE_LABEL || spec.neg_mode == NegativeMode::Shuffled;
            let planted_at = if plant {
                let slots = draw_positions(&mut rng, n, m, spec.min_gap);
                let ranks = if label == POSITIVE_LABEL {
                    (1..=m).collect()
                } else {
                    let index = 2 + rng.below(factorial(m) - 1);
                    perm_unrank(index, m)?.ranks().to_vec()
                };
                ranks.into_iter().map(|r| slots[r - 1]).collect()
            } else {
                Vec::new()
            };
            for (p, &f) in prototypes.iter().zip(&planted_at) {
                for (x, v) in data[f * d..(f + 1) * d].iter_mut().zip(p) {
                    *x += v;
                }
            }
            let id = format!("{label}{i:0width$}");
            records.push(SynthRecord {
                label,
                group: format!("g{}", i % spec.groups),
                sequence: FrameSequence::from_flat(id, d, data)?,
                planted_at,
            });
        }
    }
    Ok(SynthDataset {
        prototypes,
        records,
    })
}
