use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::all_finite;

/// One sequence of `N ≥ 1` frames, each a `d`-dimensional feature vector.
///
/// Frames are stored row-major in a single buffer. Frame indices are 0-based
/// throughout the crate; reports convert to 1-based positions.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    id: String,
    dim: usize,
    data: Vec<f64>,
}

impl FrameSequence {
    pub fn new(id: impl Into<String>, frames: Vec<Vec<f64>>) -> Result<Self> {
        let first = frames.first().ok_or(Error::Empty { what: "sequence" })?;
        let dim = first.len();
        let mut data = Vec::with_capacity(dim * frames.len());
        for frame in &frames {
            if frame.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: frame.len(),
                });
            }
            data.extend_from_slice(frame);
        }
        Self::from_flat(id, dim, data)
    }

    /// Builds a sequence from a row-major buffer of `N·dim` values.
    pub fn from_flat(id: impl Into<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.is_empty() {
            return Err(Error::Empty { what: "sequence" });
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.len() % dim,
            });
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite { what: "sequence" });
        }
        Ok(FrameSequence {
            id: id.into(),
            dim,
            data,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Always false: a sequence holds at least one frame.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn frame(&self, f: usize) -> &[f64] {
        &self.data[f * self.dim..(f + 1) * self.dim]
    }

    pub fn frames(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Applies `f` to every frame, producing frames of a possibly different width.
    pub fn map_frames<F>(&self, mut f: F) -> Result<FrameSequence>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let frames: Vec<Vec<f64>> = self.frames().map(&mut f).collect();
        FrameSequence::new(self.id.clone(), frames)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}
