//! Frame-level preprocessing: unit-norm scaling, PCA projection, stacking of
//! consecutive frames, and temporal pooling.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::pca::PcaBasis;
use crate::sequence::FrameSequence;

const NORM_EPS: f64 = 1e-12;

/// `v / ||v||₂`, or `v` unchanged when its norm is at most 1e-12.
pub fn l2_normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    if n > NORM_EPS {
        v.iter().map(|x| x / n).collect()
    } else {
        v.to_vec()
    }
}

/// Replaces frame `f` by the concatenation of frames `f..f+window`. Frames
/// past the end repeat the last frame, so `N` is preserved and `d` becomes
/// `window·d`.
pub fn stack_frames(seq: &FrameSequence, window: usize) -> Result<FrameSequence> {
    if window == 0 {
        return Err(Error::InvalidConfig("stacking window must be at least 1".into()));
    }
    let n = seq.len();
    let d = seq.dim();
    let mut data = Vec::with_capacity(n * d * window);
    for f in 0..n {
        for offset in 0..window {
            data.extend_from_slice(seq.frame((f + offset).min(n - 1)));
        }
    }
    FrameSequence::from_flat(seq.id(), d * window, data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    Mean,
    Max,
}

/// Elementwise mean or max over all frames.
pub fn pool(seq: &FrameSequence, mode: Pooling) -> Vec<f64> {
    let mut frames = seq.frames();
    let mut acc = frames.next().map(<[f64]>::to_vec).unwrap_or_default();
    for x in frames {
        for (a, v) in acc.iter_mut().zip(x) {
            match mode {
                Pooling::Mean => *a += v,
                Pooling::Max => *a = a.max(*v),
            }
        }
    }
    if mode == Pooling::Mean {
        let n = seq.len() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
    }
    acc
}

/// The single-frame sequence holding `pool(seq, mode)`.
pub fn pooled_sequence(seq: &FrameSequence, mode: Pooling) -> FrameSequence {
    FrameSequence::from_flat(seq.id(), seq.dim(), pool(seq, mode))
        .expect("pooling a valid sequence yields a valid frame")
}

/// Appends a constant `1.0` to a frame so that one template weight acts as an
/// intercept.
pub fn append_bias(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.extend_from_slice(v);
    out.push(1.0);
    out
}

/// Preprocessing applied to every frame, in order: optional unit-norm scaling,
/// optional PCA projection (fitted on training frames), stacking of
/// `stack_window` consecutive frames, and an optional constant bias feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessConfig {
    pub l2_normalize: bool,
    pub pca_dims: Option<usize>,
    pub stack_window: usize,
    pub bias_feature: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            l2_normalize: false,
            pca_dims: None,
            stack_window: 1,
            bias_feature: false,
        }
    }
}

impl PreprocessConfig {
    pub fn is_identity(&self) -> bool {
        !self.l2_normalize
            && self.pca_dims.is_none()
            && self.stack_window == 1
            && !self.bias_feature
    }

    /// Fits the stateful parts (PCA) on the given training sequences.
    pub fn fit<'a, I>(&self, train: I) -> Result<Preprocessor>
    where
        I: IntoIterator<Item = &'a FrameSequence>,
    {
        let basis = match self.pca_dims {
            None => None,
            Some(k) => {
                let mut frames = Vec::new();
                for seq in train {
                    for x in seq.frames() {
                        frames.push(if self.l2_normalize {
                            l2_normalize(x)
                        } else {
                            x.to_vec()
                        });
                    }
                }
                Some(PcaBasis::fit(&frames, k)?)
            }
        };
        Ok(Preprocessor {
            config: *self,
            basis,
        })
    }
}

/// A fitted [`PreprocessConfig`].
#[derive(Debug, Clone)]
pub struct Preprocessor {
    config: PreprocessConfig,
    basis: Option<PcaBasis>,
}

impl Preprocessor {
    pub fn basis(&self) -> Option<&PcaBasis> {
        self.basis.as_ref()
    }

    pub fn apply(&self, seq: &FrameSequence) -> Result<FrameSequence> {
        let mut out = if self.config.l2_normalize {
            seq.map_frames(l2_normalize)?
        } else {
            seq.clone()
        };
        if let Some(basis) = &self.basis {
            if basis.input_dim() != out.dim() {
                return Err(Error::DimensionMismatch {
                    expected: basis.input_dim(),
                    found: out.dim(),
                });
            }
            out = out.map_frames(|x| basis.transform_unchecked(x))?;
        }
        if self.config.stack_window > 1 {
            out = stack_frames(&out, self.config.stack_window)?;
        }
        if self.config.bias_feature {
            out = out.map_frames(append_bias)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn seq(frames: Vec<Vec<f64>>) -> FrameSequence {
        FrameSequence::new("s", frames).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let v = l2_normalize(&[3.0, 4.0]);
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
        assert_eq!(l2_normalize(&[0.0, 1.0]), vec![0.0, 1.0]);
        assert_eq!(l2_normalize(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn stacking() {
        let x = seq(vec![vec![1.0, 0.0], vec![0.0, 2.0]]);
        assert_eq!(stack_frames(&x, 1).unwrap(), x);
        let s = stack_frames(&x, 2).unwrap();
        assert_eq!(s.frame(0), &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(s.frame(1), &[0.0, 2.0, 0.0, 2.0]);
        assert!(stack_frames(&x, 0).is_err());

        let wide = seq(vec![vec![0.5; 384]; 3]);
        assert_eq!(stack_frames(&wide, 5).unwrap().dim(), 1920);
    }

    #[test]
    fn pooling() {
        let x = seq(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(pool(&x, Pooling::Mean), vec![2.0, 3.0]);
        assert_eq!(pool(&x, Pooling::Max), vec![3.0, 4.0]);
        let one = seq(vec![vec![-1.0, 7.0]]);
        assert_eq!(pool(&one, Pooling::Mean), vec![-1.0, 7.0]);
        assert_eq!(pool(&one, Pooling::Max), vec![-1.0, 7.0]);
    }

    #[test]
    fn pipeline_pca_then_stack() {
        let train = seq(vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, 0.5, 0.0]]);
        let cfg = PreprocessConfig {
            l2_normalize: false,
            pca_dims: Some(2),
            stack_window: 3,
            bias_feature: true,
        };
        let p = cfg.fit([&train]).unwrap();
        let out = p.apply(&train).unwrap();
        assert_eq!(out.dim(), 7);
        assert_eq!(out.frame(2)[6], 1.0);
        assert_eq!(out.len(), 3);
        assert!(PreprocessConfig::default().is_identity());
    }

    proptest! {
        #[test]
        fn stacking_shape(n in 1usize..12, d in 1usize..5, w in 1usize..7) {
            let frames: Vec<Vec<f64>> = (0..n).map(|f| (0..d).map(|j| (f * d + j) as f64).collect()).collect();
            let s = stack_frames(&seq(frames), w).unwrap();
            prop_assert_eq!(s.len(), n);
            prop_assert_eq!(s.dim(), w * d);
        }
    }
}
