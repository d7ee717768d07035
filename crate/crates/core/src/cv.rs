//! Cross-validation runner.
//!
//! For every fold the preprocessing is fitted on the training records only,
//! a model (or one model per class) is trained with seed `cfg.seed + fold`,
//! and the test records are scored. Folds are numbered from 1 in reports and
//! errors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::folds::{Fold, FoldPlan};
use crate::inference::{ova_predict, score};
use crate::metrics::{accuracy, avg_class_accuracy, roc_auc, roc_eer_rate};
use crate::model::LomoModel;
use crate::preprocess::{PreprocessConfig, Preprocessor};
use crate::sequence::FrameSequence;
use crate::training::{train_examples, train_ova, Label, TrainConfig};

/// A labeled, subject-annotated sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub label: String,
    pub group: String,
    pub sequence: FrameSequence,
}

impl Record {
    pub fn id(&self) -> &str {
        self.sequence.id()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Accuracy,
    AvgClassAccuracy,
    Auc,
    /// Classification rate at the ROC equal-error point.
    EerRate,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::AvgClassAccuracy => "avg-class-accuracy",
            Metric::Auc => "auc",
            Metric::EerRate => "eer-rate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    /// `label == positive` is the positive class, everything else negative.
    Binary { positive: String },
    /// One-vs-all over all labels present in the training split.
    Multiclass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub train: TrainConfig,
    pub preprocess: PreprocessConfig,
    pub metric: Metric,
    pub task: Task,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub metric: Metric,
    /// Metric value per fold, in fold order.
    pub folds: Vec<f64>,
    /// Unweighted mean over folds.
    pub mean: f64,
}

/// Fits the fold's preprocessing on its training records only.
pub fn fit_fold_preprocessor(
    records: &[Record],
    fold: &Fold,
    preprocess: &PreprocessConfig,
) -> Result<Preprocessor> {
    preprocess.fit(fold.train.iter().map(|&i| &records[i].sequence))
}

/// Binary model trained on one fold's training split. Returns the fitted
/// preprocessing alongside the model.
pub fn train_binary_fold(
    records: &[Record],
    fold: &Fold,
    positive: &str,
    cfg: &TrainConfig,
    preprocess: &PreprocessConfig,
) -> Result<(Preprocessor, LomoModel)> {
    let pre = fit_fold_preprocessor(records, fold, preprocess)?;
    let train: Vec<FrameSequence> = fold
        .train
        .iter()
        .map(|&i| pre.apply(&records[i].sequence))
        .collect::<Result<_>>()?;
    let examples: Vec<(&FrameSequence, Label)> = fold
        .train
        .iter()
        .zip(&train)
        .map(|(&i, seq)| (seq, binary_label(&records[i], positive)))
        .collect();
    let model = train_examples(&examples, cfg)?;
    Ok((pre, model))
}

fn binary_label(record: &Record, positive: &str) -> Label {
    if record.label == positive {
        Label::Positive
    } else {
        Label::Negative
    }
}

fn degenerate(fold: usize, err: Error) -> Error {
    match err {
        Error::SingleLabel => Error::DegenerateFold {
            fold,
            reason: "training split contains only one label".into(),
        },
        Error::DegenerateFold { .. } => err,
        other => Error::DegenerateFold {
            fold,
            reason: format!("{other}"),
        },
    }
}

fn run_fold(records: &[Record], fold: &Fold, number: usize, cfg: &CvConfig) -> Result<f64> {
    if fold.train.is_empty() || fold.test.is_empty() {
        return Err(Error::DegenerateFold {
            fold: number,
            reason: "empty train or test split".into(),
        });
    }
    let train_cfg = TrainConfig {
        seed: cfg.train.seed.wrapping_add(number as u64 - 1),
        ..cfg.train
    };
    let variant = train_cfg.variant;
    let inference = train_cfg.inference();
    match &cfg.task {
        Task::Binary { positive } => {
            let (pre, model) = train_binary_fold(records, fold, positive, &train_cfg, &cfg.preprocess)?;
            let mut scored = Vec::with_capacity(fold.test.len());
            for &i in &fold.test {
                let seq = pre.apply(&records[i].sequence)?;
                let s = score(&model, &variant.prepare(&seq), inference)?;
                scored.push((records[i].label == *positive, s));
            }
            match cfg.metric {
                Metric::Accuracy => {
                    let pairs: Vec<(bool, bool)> = scored.iter().map(|&(l, s)| (l, s > 0.0)).collect();
                    accuracy(&pairs)
                }
                Metric::AvgClassAccuracy => {
                    let pairs: Vec<(bool, bool)> = scored.iter().map(|&(l, s)| (l, s > 0.0)).collect();
                    avg_class_accuracy(&pairs)
                }
                Metric::Auc => roc_auc(&scored),
                Metric::EerRate => roc_eer_rate(&scored),
            }
        }
        Task::Multiclass => {
            let pre = fit_fold_preprocessor(records, fold, &cfg.preprocess)?;
            let train: Vec<FrameSequence> = fold
                .train
                .iter()
                .map(|&i| pre.apply(&records[i].sequence))
                .collect::<Result<_>>()?;
            let examples: Vec<(&FrameSequence, &str)> = fold
                .train
                .iter()
                .zip(&train)
                .map(|(&i, seq)| (seq, records[i].label.as_str()))
                .collect();
            let models: BTreeMap<String, LomoModel> = train_ova(&examples, &train_cfg)?;
            let mut pairs = Vec::with_capacity(fold.test.len());
            for &i in &fold.test {
                let seq = pre.apply(&records[i].sequence)?;
                let (class, _) = ova_predict(&models, &variant.prepare(&seq), inference)?;
                pairs.push((records[i].label.as_str(), class));
            }
            match cfg.metric {
                Metric::Accuracy => accuracy(&pairs),
                Metric::AvgClassAccuracy => avg_class_accuracy(&pairs),
                Metric::Auc | Metric::EerRate => Err(Error::InvalidConfig(format!(
                    "metric {} is only defined for binary tasks",
                    cfg.metric.name()
                ))),
            }
        }
    }
}

pub fn run_cv(records: &[Record], plan: &FoldPlan, cfg: &CvConfig) -> Result<CvReport> {
    if plan.is_empty() {
        return Err(Error::Empty { what: "fold plan" });
    }
    if let Task::Multiclass = cfg.task {
        if matches!(cfg.metric, Metric::Auc | Metric::EerRate) {
            return Err(Error::InvalidConfig(format!(
                "metric {} is only defined for binary tasks",
                cfg.metric.name()
            )));
        }
    }
    let mut folds = Vec::with_capacity(plan.len());
    for (i, fold) in plan.folds.iter().enumerate() {
        let number = i + 1;
        if let Some(&bad) = fold.train.iter().chain(&fold.test).find(|&&r| r >= records.len()) {
            return Err(Error::InvalidConfig(format!(
                "fold {number} references record {bad} but only {} exist",
                records.len()
            )));
        }
        let value = run_fold(records, fold, number, cfg).map_err(|e| degenerate(number, e))?;
        folds.push(value);
    }
    let mean = folds.iter().sum::<f64>() / folds.len() as f64;
    Ok(CvReport {
        metric: cfg.metric,
        folds,
        mean,
    })
}
