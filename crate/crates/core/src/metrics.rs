//! Classification metrics.
//!
//! ROC quantities use the convention "predict positive iff score ≥ threshold".
//! The equal-error rate is taken from a discrete threshold sweep without
//! curve interpolation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Fraction of exactly matching predictions.
pub fn accuracy<T: PartialEq>(pairs: &[(T, T)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Empty { what: "prediction set" });
    }
    Ok(pairs.iter().filter(|(t, p)| t == p).count() as f64 / pairs.len() as f64)
}

/// Mean over true classes of per-class recall. `pairs` are `(truth, prediction)`.
pub fn avg_class_accuracy<T: Ord>(pairs: &[(T, T)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Empty { what: "prediction set" });
    }
    let mut per_class: BTreeMap<&T, (usize, usize)> = BTreeMap::new();
    for (truth, pred) in pairs {
        let entry = per_class.entry(truth).or_default();
        entry.1 += 1;
        if truth == pred {
            entry.0 += 1;
        }
    }
    let recall_sum: f64 = per_class
        .values()
        .map(|&(hit, total)| hit as f64 / total as f64)
        .sum();
    Ok(recall_sum / per_class.len() as f64)
}

fn split_scores(scored: &[(bool, f64)]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &(label, score) in scored {
        if !score.is_finite() {
            return Err(Error::NonFinite { what: "scores" });
        }
        if label { pos.push(score) } else { neg.push(score) }
    }
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InvalidConfig(
            "ROC metrics need both positive and negative examples".into(),
        ));
    }
    Ok((pos, neg))
}

/// Area under the ROC curve in its Mann–Whitney form: the probability that a
/// random positive outscores a random negative, ties counting one half.
/// `scored` holds `(is_positive, score)`.
pub fn roc_auc(scored: &[(bool, f64)]) -> Result<f64> {
    let (pos, mut neg) = split_scores(scored)?;
    neg.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for s in &pos {
        let below = neg.partition_point(|n| n < s);
        let not_above = neg.partition_point(|n| n <= s);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (pos.len() as f64 * neg.len() as f64))
}

/// Operating point of the ROC sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EerPoint {
    pub threshold: f64,
    pub false_positive_rate: f64,
    pub false_negative_rate: f64,
}

impl EerPoint {
    /// Balanced classification rate `1 − (FPR + FNR)/2`.
    pub fn rate(&self) -> f64 {
        1.0 - 0.5 * (self.false_positive_rate + self.false_negative_rate)
    }
}

/// Candidate thresholds: every distinct score, the midpoints between
/// consecutive distinct scores, and one value beyond each end.
fn candidate_thresholds(pos: &[f64], neg: &[f64]) -> Vec<f64> {
    let mut scores: Vec<f64> = pos.iter().chain(neg).copied().collect();
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    let mut out = Vec::with_capacity(2 * scores.len() + 1);
    out.push(scores[0] - 1.0);
    for (i, &s) in scores.iter().enumerate() {
        out.push(s);
        match scores.get(i + 1) {
            Some(next) => out.push(0.5 * (s + next)),
            None => out.push(s + 1.0),
        }
    }
    out
}

/// Threshold minimizing `|FPR − FNR|` (ties go to the lower FPR, then the
/// lower FNR, then the lower threshold).
pub fn roc_eer_point(scored: &[(bool, f64)]) -> Result<EerPoint> {
    let (pos, neg) = split_scores(scored)?;
    let mut best: Option<EerPoint> = None;
    for threshold in candidate_thresholds(&pos, &neg) {
        let fnr = pos.iter().filter(|&&s| s < threshold).count() as f64 / pos.len() as f64;
        let fpr = neg.iter().filter(|&&s| s >= threshold).count() as f64 / neg.len() as f64;
        let point = EerPoint {
            threshold,
            false_positive_rate: fpr,
            false_negative_rate: fnr,
        };
        let better = match best {
            None => true,
            Some(b) => {
                let (gap, best_gap) = ((fpr - fnr).abs(), (b.false_positive_rate - b.false_negative_rate).abs());
                gap < best_gap
                    || (gap == best_gap
                        && (fpr < b.false_positive_rate
                            || (fpr == b.false_positive_rate && fnr < b.false_negative_rate)))
            }
        };
        if better {
            best = Some(point);
        }
    }
    Ok(best.expect("at least one candidate threshold"))
}

/// Classification rate at the ROC equal-error point.
pub fn roc_eer_rate(scored: &[(bool, f64)]) -> Result<f64> {
    roc_eer_point(scored).map(|p| p.rate())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pos: &[f64], neg: &[f64]) -> Vec<(bool, f64)> {
        pos.iter().map(|&s| (true, s)).chain(neg.iter().map(|&s| (false, s))).collect()
    }

    #[test]
    fn class_accuracy() {
        assert_eq!(avg_class_accuracy(&[("a", "a"), ("b", "b")]).unwrap(), 1.0);
        let pairs = [("a", "a"), ("a", "a"), ("b", "b"), ("b", "a")];
        assert_eq!(avg_class_accuracy(&pairs).unwrap(), 0.75);
        let constant = [("a", "a"), ("a", "a"), ("b", "a"), ("b", "a")];
        assert_eq!(avg_class_accuracy(&constant).unwrap(), 0.5);
        assert!(avg_class_accuracy::<&str>(&[]).is_err());
        assert_eq!(accuracy(&[(1, 1), (1, 0)]).unwrap(), 0.5);
    }

    #[test]
    fn auc_examples() {
        assert_eq!(roc_auc(&set(&[0.9, 0.8], &[0.1, 0.2])).unwrap(), 1.0);
        assert_eq!(roc_auc(&set(&[0.9, 0.4], &[0.6, 0.1])).unwrap(), 0.75);
        assert_eq!(roc_auc(&set(&[0.5, 0.5], &[0.5, 0.5])).unwrap(), 0.5);
        assert!(roc_auc(&set(&[0.5], &[])).is_err());
    }

    #[test]
    fn eer_examples() {
        assert_eq!(roc_eer_rate(&set(&[0.9, 0.8], &[0.1, 0.2])).unwrap(), 1.0);
        assert_eq!(roc_eer_rate(&set(&[0.9, 0.4], &[0.6, 0.1])).unwrap(), 0.5);
        assert!(roc_eer_rate(&set(&[], &[0.3])).is_err());
    }

    /// With every positive below every negative the only point where FPR and
    /// FNR meet is FPR = FNR = 1, so the rate is 0.
    #[test]
    fn eer_inverted_perfect_set() {
        let p = roc_eer_point(&set(&[0.1, 0.2], &[0.9, 0.8])).unwrap();
        assert_eq!(p.false_positive_rate, 1.0);
        assert_eq!(p.false_negative_rate, 1.0);
        assert_eq!(p.rate(), 0.0);
    }

    #[test]
    fn auc_negation_complement() {
        let s = set(&[0.3, 0.9, 0.7], &[0.1, 0.5, 0.8, 0.2]);
        let neg: Vec<(bool, f64)> = s.iter().map(|&(l, v)| (l, -v)).collect();
        assert!((roc_auc(&s).unwrap() + roc_auc(&neg).unwrap() - 1.0).abs() < 1e-15);
    }
}
