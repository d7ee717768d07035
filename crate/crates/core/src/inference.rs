//! Greedy latent assignment and scoring.
//!
//! Templates are visited in model order. Each picks the highest-responding
//! frame still available (lowest index on ties), and the closed window
//! `[k - t, k + t]` around the pick is removed before the next template runs.
//! The ordering cost is looked up after all picks are made, so it never
//! influences which frames are chosen.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::dot_unchecked;
use crate::model::LomoModel;
use crate::perm;
use crate::sequence::FrameSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InferenceConfig {
    /// Frames removed on each side of a detection before the next template picks.
    pub exclusion: usize,
}

impl InferenceConfig {
    pub fn new(exclusion: usize) -> Self {
        InferenceConfig { exclusion }
    }
}

/// Result of scoring one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentAssignment {
    /// 0-based frame chosen by each template, in template order.
    pub frames: Vec<usize>,
    /// Response `w_i · x_{k_i}` of each template at its chosen frame.
    pub template_scores: Vec<f64>,
    /// 1-based lexicographic index of the detections' temporal order.
    pub perm: usize,
    pub ordering_cost: f64,
    /// Mean template score plus ordering cost.
    pub total: f64,
}

pub fn latent_assign(
    model: &LomoModel,
    seq: &FrameSequence,
    cfg: InferenceConfig,
) -> Result<LatentAssignment> {
    if seq.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: seq.dim(),
        });
    }
    let n = seq.len();
    let m = model.num_templates();
    let t = cfg.exclusion;
    let mut available = alloc::vec![true; n];
    let mut frames = Vec::with_capacity(m);
    let mut template_scores = Vec::with_capacity(m);

    for template in model.templates() {
        let mut best: Option<(usize, f64)> = None;
        for (f, x) in seq.frames().enumerate() {
            if !available[f] {
                continue;
            }
            let s = dot_unchecked(template, x);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((f, s));
            }
        }
        let (k, s) = best.ok_or_else(|| Error::SequenceTooShort {
            id: String::from(seq.id()),
            frames: n,
            templates: m,
            exclusion: t,
        })?;
        let lo = k.saturating_sub(t);
        let hi = k.saturating_add(t).min(n - 1);
        available[lo..=hi].iter_mut().for_each(|a| *a = false);
        frames.push(k);
        template_scores.push(s);
    }

    let perm = perm::order_index(&frames)?;
    let ordering_cost = model.cost(perm);
    let total = template_scores.iter().sum::<f64>() / m as f64 + ordering_cost;
    Ok(LatentAssignment {
        frames,
        template_scores,
        perm,
        ordering_cost,
        total,
    })
}

/// Score of `seq` under `model`; positive means "present".
pub fn score(model: &LomoModel, seq: &FrameSequence, cfg: InferenceConfig) -> Result<f64> {
    latent_assign(model, seq, cfg).map(|a| a.total)
}

/// Late fusion: arithmetic mean of scores from several models.
pub fn fuse_scores(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Empty { what: "score list" });
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// One-vs-all prediction. Returns the best-scoring class (ties go to the
/// lexicographically smallest name) and every class's score.
pub fn ova_predict<'a>(
    models: &'a BTreeMap<String, LomoModel>,
    seq: &FrameSequence,
    cfg: InferenceConfig,
) -> Result<(&'a str, BTreeMap<String, f64>)> {
    let mut scores = BTreeMap::new();
    let mut best: Option<(&'a str, f64)> = None;
    // BTreeMap iterates in ascending key order, so a strict `>` keeps the
    // smallest name among equal scores.
    for (class, model) in models {
        let s = score(model, seq, cfg)?;
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((class.as_str(), s));
        }
        scores.insert(class.clone(), s);
    }
    let (class, _) = best.ok_or(Error::Empty { what: "model map" })?;
    Ok((class, scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use alloc::vec;

    fn two_template_model() -> LomoModel {
        LomoModel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, -0.5]).unwrap()
    }

    fn seq(frames: Vec<Vec<f64>>) -> FrameSequence {
        FrameSequence::new("s", frames).unwrap()
    }

    #[test]
    fn hand_traced_forward_order() {
        let x = seq(vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 2.0]]);
        let a = latent_assign(&two_template_model(), &x, InferenceConfig::new(0)).unwrap();
        assert_eq!(a.frames, vec![0, 2]);
        assert_eq!(a.template_scores, vec![1.0, 2.0]);
        assert_eq!(a.perm, 1);
        assert_eq!(a.ordering_cost, 0.5);
        assert_eq!(a.total, 2.0);
    }

    #[test]
    fn hand_traced_reversed_order() {
        let x = seq(vec![vec![0.0, 2.0], vec![0.0, 0.0], vec![1.0, 0.0]]);
        let a = latent_assign(&two_template_model(), &x, InferenceConfig::new(0)).unwrap();
        assert_eq!(a.frames, vec![2, 0]);
        assert_eq!(a.perm, 2);
        assert_eq!(a.total, 1.0);
    }

    #[test]
    fn single_template_is_argmax_plus_cost() {
        let m = LomoModel::new(vec![vec![1.0, -1.0]], vec![0.25]).unwrap();
        let x = seq(vec![vec![0.0, 0.0], vec![3.0, 1.0], vec![2.0, 0.0], vec![1.0, 1.0]]);
        let a = latent_assign(&m, &x, InferenceConfig::new(5)).unwrap();
        // frames 1 and 2 tie at 2.0: lowest index wins
        assert_eq!(a.frames, vec![1]);
        assert_eq!(a.total, 2.0 + 0.25);
    }

    #[test]
    fn zero_model_scores_zero() {
        let m = LomoModel::zeros(3, 3).unwrap();
        let mut rng = Rng::new(9);
        let frames: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..3).map(|_| rng.normal()).collect())
            .collect();
        assert_eq!(score(&m, &seq(frames), InferenceConfig::new(1)).unwrap(), 0.0);
    }

    #[test]
    fn score_is_positively_homogeneous_with_zero_costs() {
        let mut rng = Rng::new(4);
        let m = LomoModel::new(
            (0..3).map(|_| (0..4).map(|_| rng.normal()).collect()).collect(),
            vec![0.0; 6],
        )
        .unwrap();
        let frames: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..4).map(|_| rng.normal()).collect())
            .collect();
        let scaled: Vec<Vec<f64>> = frames
            .iter()
            .map(|f| f.iter().map(|v| v * 2.5).collect())
            .collect();
        let cfg = InferenceConfig::new(2);
        let s = score(&m, &seq(frames), cfg).unwrap();
        let s2 = score(&m, &seq(scaled), cfg).unwrap();
        assert!((s2 - 2.5 * s).abs() < 1e-12);
    }

    #[test]
    fn too_short_names_sequence() {
        let m = LomoModel::zeros(1, 3).unwrap();
        let x = FrameSequence::new("clip7", vec![vec![0.0]; 4]).unwrap();
        let err = latent_assign(&m, &x, InferenceConfig::new(1)).unwrap_err();
        assert_eq!(
            err,
            Error::SequenceTooShort {
                id: "clip7".into(),
                frames: 4,
                templates: 3,
                exclusion: 1
            }
        );
        assert!(alloc::format!("{err}").contains("clip7"));
    }

    #[test]
    fn dimension_mismatch() {
        let m = LomoModel::zeros(3, 1).unwrap();
        let x = seq(vec![vec![0.0, 1.0]]);
        assert!(matches!(
            score(&m, &x, InferenceConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cost_permutation_shifts_total_only() {
        let x = seq(vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 2.0]]);
        let a = latent_assign(&two_template_model(), &x, InferenceConfig::new(0)).unwrap();
        let swapped = LomoModel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![-0.5, 0.5]).unwrap();
        let b = latent_assign(&swapped, &x, InferenceConfig::new(0)).unwrap();
        assert_eq!(a.frames, b.frames);
        assert_eq!(a.total - b.total, 0.5 - (-0.5));
    }

    #[test]
    fn fusion() {
        assert_eq!(fuse_scores(&[2.0]).unwrap(), 2.0);
        assert_eq!(fuse_scores(&[1.0, -1.0]).unwrap(), 0.0);
        assert!((fuse_scores(&[0.3, 0.6, 0.9]).unwrap() - 0.6).abs() < 1e-15);
        assert!(fuse_scores(&[]).is_err());
    }

    fn constant_model(score: f64) -> LomoModel {
        LomoModel::new(vec![vec![0.0]], vec![score]).unwrap()
    }

    #[test]
    fn ova_argmax_and_ties() {
        let x = seq(vec![vec![1.0]]);
        let cfg = InferenceConfig::default();
        let mut models = BTreeMap::new();
        models.insert(String::from("B"), constant_model(-1.0));
        models.insert(String::from("A"), constant_model(2.0));
        assert_eq!(ova_predict(&models, &x, cfg).unwrap().0, "A");

        let mut tied = BTreeMap::new();
        tied.insert(String::from("B"), constant_model(0.0));
        tied.insert(String::from("A"), constant_model(0.0));
        let (class, scores) = ova_predict(&tied, &x, cfg).unwrap();
        assert_eq!(class, "A");
        assert_eq!(scores.len(), 2);

        let mut single = BTreeMap::new();
        single.insert(String::from("only"), constant_model(-3.0));
        assert_eq!(ova_predict(&single, &x, cfg).unwrap().0, "only");

        let empty = BTreeMap::new();
        assert!(ova_predict(&empty, &x, cfg).is_err());
    }
}
