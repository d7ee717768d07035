//! Stochastic subgradient training on the regularized hinge loss
//!
//! `λ/2 Σ_i ||w_i||² + 1/|X| Σ_X [1 − y·s(X)]₊`
//!
//! Each step samples one example uniformly with replacement, runs greedy
//! inference, and only when the margin is violated shrinks the templates,
//! moves each template towards (or away from) its detected frame, and updates
//! the cost of the realized ordering.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inference::{latent_assign, score, InferenceConfig};
use crate::linalg::{blend_into, squared_norm};
use crate::model::LomoModel;
use crate::perm::MAX_TEMPLATES;
use crate::preprocess::{pooled_sequence, Pooling};
use crate::rng::Rng;
use crate::sequence::FrameSequence;

/// Model family trained by [`train`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Full model: `M` templates and a learned ordering cost table.
    Lomo,
    /// Multiple instance learning: one template scoring the best frame, no costs.
    Mil,
    /// Linear SVM on a temporally pooled sequence (one template, no costs).
    SvmPool(Pooling),
}

impl Variant {
    /// Input as seen by this variant: pooled to a single frame for
    /// [`Variant::SvmPool`], unchanged otherwise.
    pub fn prepare<'a>(&self, seq: &'a FrameSequence) -> Cow<'a, FrameSequence> {
        match self {
            Variant::SvmPool(mode) if seq.len() > 1 => Cow::Owned(pooled_sequence(seq, *mode)),
            _ => Cow::Borrowed(seq),
        }
    }
}

/// How the cost of the realized ordering moves on a margin violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostUpdate {
    /// `c ← c + η·y`, the hinge-loss subgradient step.
    Gradient,
    /// `c ← c − η` regardless of the label.
    Literal,
    /// Costs never change.
    Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub templates: usize,
    pub eta: f64,
    pub lambda: f64,
    pub exclusion: usize,
    /// Number of SGD steps; `None` means 100 passes worth (`100·|X|`).
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub variant: Variant,
    pub cost_update: CostUpdate,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            templates: 3,
            eta: 0.05,
            lambda: 1e-5,
            exclusion: 5,
            max_iter: None,
            seed: 42,
            variant: Variant::Lomo,
            cost_update: CostUpdate::Gradient,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidConfig(alloc::format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(alloc::format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.max_iter == Some(0) {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        let m = self.effective_templates();
        if m == 0 || m > MAX_TEMPLATES {
            return Err(Error::InvalidConfig(alloc::format!(
                "M must lie in 1..={MAX_TEMPLATES}, got {m}"
            )));
        }
        Ok(())
    }

    /// `M` after applying the variant's restriction.
    pub fn effective_templates(&self) -> usize {
        match self.variant {
            Variant::Lomo => self.templates,
            Variant::Mil | Variant::SvmPool(_) => 1,
        }
    }

    /// Cost update after applying the variant's restriction.
    pub fn effective_cost_update(&self) -> CostUpdate {
        match self.variant {
            Variant::Lomo => self.cost_update,
            Variant::Mil | Variant::SvmPool(_) => CostUpdate::Frozen,
        }
    }

    pub fn inference(&self) -> InferenceConfig {
        InferenceConfig::new(self.exclusion)
    }

    pub fn iterations(&self, num_examples: usize) -> usize {
        self.max_iter.unwrap_or(100 * num_examples)
    }
}

/// Fewest frames for which greedy inference is guaranteed to place `m`
/// detections with exclusion `t`, whatever the frame contents.
pub fn min_frames(m: usize, t: usize) -> usize {
    (m - 1) * (2 * t + 1) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_sign(y: f64) -> Option<Label> {
        if y == 1.0 {
            Some(Label::Positive)
        } else if y == -1.0 {
            Some(Label::Negative)
        } else {
            None
        }
    }

    pub fn y(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSequence {
    pub sequence: FrameSequence,
    pub label: Label,
}

impl LabeledSequence {
    pub fn new(sequence: FrameSequence, label: Label) -> Self {
        LabeledSequence { sequence, label }
    }
}

fn hinge(v: f64) -> f64 {
    v.max(0.0)
}

/// Regularized hinge objective. `lambda` penalizes template norms only.
pub fn objective(
    model: &LomoModel,
    data: &[(&FrameSequence, Label)],
    lambda: f64,
    cfg: InferenceConfig,
) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Empty { what: "training data" });
    }
    let reg: f64 = model.templates().iter().map(|w| squared_norm(w)).sum();
    let mut loss = 0.0;
    for (seq, label) in data {
        loss += hinge(1.0 - label.y() * score(model, seq, cfg)?);
    }
    Ok(0.5 * lambda * reg + loss / data.len() as f64)
}

/// One SGD step on `(seq, label)`. Returns whether the model changed, i.e.
/// whether the example violated the margin.
pub fn sgd_step(
    model: &mut LomoModel,
    seq: &FrameSequence,
    label: Label,
    cfg: &TrainConfig,
) -> Result<bool> {
    let assignment = latent_assign(model, seq, cfg.inference())?;
    let y = label.y();
    if y * assignment.total >= 1.0 {
        return Ok(false);
    }
    let eta = cfg.eta;
    let shrink = 1.0 - cfg.lambda * eta;
    let step = eta * y / model.num_templates() as f64;
    for (i, &k) in assignment.frames.iter().enumerate() {
        blend_into(model.template_mut(i), shrink, seq.frame(k), step)?;
    }
    match cfg.effective_cost_update() {
        CostUpdate::Gradient => *model.cost_mut(assignment.perm) += eta * y,
        CostUpdate::Literal => *model.cost_mut(assignment.perm) -= eta,
        CostUpdate::Frozen => {}
    }
    Ok(true)
}

/// Trains a binary model on owned examples. See [`train_examples`].
pub fn train(data: &[LabeledSequence], cfg: &TrainConfig) -> Result<LomoModel> {
    let examples: Vec<(&FrameSequence, Label)> =
        data.iter().map(|e| (&e.sequence, e.label)).collect();
    train_examples(&examples, cfg)
}

/// Initializes a model from `cfg.seed` and runs `cfg.iterations(|X|)` SGD
/// steps, sampling examples uniformly with replacement. For
/// [`Variant::SvmPool`] every sequence is pooled first.
pub fn train_examples(data: &[(&FrameSequence, Label)], cfg: &TrainConfig) -> Result<LomoModel> {
    cfg.validate()?;
    let (first, _) = data.first().ok_or(Error::Empty { what: "training data" })?;
    let labels: BTreeSet<Label> = data.iter().map(|(_, l)| *l).collect();
    if labels.len() < 2 {
        return Err(Error::SingleLabel);
    }
    let prepared: Vec<(Cow<'_, FrameSequence>, Label)> = data
        .iter()
        .map(|(s, l)| (cfg.variant.prepare(s), *l))
        .collect();

    let m = cfg.effective_templates();
    let dim = first.dim();
    let needed = min_frames(m, cfg.exclusion);
    for (seq, _) in &prepared {
        if seq.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: seq.dim(),
            });
        }
        if seq.len() < needed {
            return Err(Error::SequenceTooShort {
                id: String::from(seq.id()),
                frames: seq.len(),
                templates: m,
                exclusion: cfg.exclusion,
            });
        }
    }

    let mut rng = Rng::new(cfg.seed);
    let mut model = LomoModel::init(dim, m, &mut rng)?;
    for _ in 0..cfg.iterations(prepared.len()) {
        let (seq, label) = &prepared[rng.below(prepared.len())];
        sgd_step(&mut model, seq, *label, cfg)?;
    }
    Ok(model)
}

/// One-vs-all training over every class present in `data`.
pub fn train_ova(data: &[(&FrameSequence, &str)], cfg: &TrainConfig) -> Result<BTreeMap<String, LomoModel>> {
    let classes: BTreeSet<&str> = data.iter().map(|(_, c)| *c).collect();
    if classes.len() < 2 {
        return Err(Error::InvalidConfig("one-vs-all needs at least 2 classes".into()));
    }
    let classes: Vec<&str> = classes.into_iter().collect();
    train_ova_for(&classes, data, cfg)
}

/// One-vs-all training for an explicit class list. Classes are sorted before
/// training; the `i`-th class uses seed `cfg.seed + i`.
pub fn train_ova_for(
    classes: &[&str],
    data: &[(&FrameSequence, &str)],
    cfg: &TrainConfig,
) -> Result<BTreeMap<String, LomoModel>> {
    let sorted: BTreeSet<&str> = classes.iter().copied().collect();
    let mut models = BTreeMap::new();
    for (i, class) in sorted.into_iter().enumerate() {
        if !data.iter().any(|(_, c)| *c == class) {
            return Err(Error::EmptyClass(String::from(class)));
        }
        let relabeled: Vec<(&FrameSequence, Label)> = data
            .iter()
            .map(|(s, c)| {
                let label = if *c == class { Label::Positive } else { Label::Negative };
                (*s, label)
            })
            .collect();
        let class_cfg = TrainConfig {
            seed: cfg.seed.wrapping_add(i as u64),
            ..*cfg
        };
        models.insert(String::from(class), train_examples(&relabeled, &class_cfg)?);
    }
    Ok(models)
}
