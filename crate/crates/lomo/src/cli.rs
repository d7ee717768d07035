//! Command-line interface: `synth`, `train`, `predict`, `cv` and `report`.
//!
//! Every command is a pure function of its flags, input files and seed.
//! Logs go to standard error; data goes to the `--out` file or standard
//! output.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lomo_core::cv::{run_cv, CvConfig, Metric, Task};
use lomo_core::folds::{make_folds, FoldScheme};
use lomo_core::inference::fuse_scores;
use lomo_core::preprocess::{Pooling, PreprocessConfig, Preprocessor};
use lomo_core::synth::{NegativeMode, SynthSpec};
use lomo_core::training::{train_examples, train_ova, Label};
use lomo_core::{latent_assign, score, CostUpdate, FrameSequence, InferenceConfig, LomoModel, TrainConfig, Variant};

use crate::manifest::{parse_manifest, Manifest};
use crate::model_file::{load_model, save_model};
use crate::reports::{format_cv_results, format_predictions, format_timeline};
use crate::sequence_file::read_sequence;
use crate::synth_dir::write_synthetic;

#[derive(Debug, Parser)]
#[command(name = "lomo", version, about = "Latent ordinal models for weakly supervised sequence classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic planted-order dataset directory.
    Synth(SynthArgs),
    /// Train a model (or one model per class with --ova) from a manifest.
    Train(TrainArgs),
    /// Score every sequence of a manifest, averaging over several models.
    Predict(PredictArgs),
    /// Cross-validate on a manifest with subject-grouped folds.
    Cv(CvArgs),
    /// Write the detection timeline of one sequence under a model.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NegModeArg {
    Shuffled,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Lomo,
    Mil,
    SvmMean,
    SvmMax,
}

impl VariantArg {
    pub fn variant(self) -> Variant {
        match self {
            VariantArg::Lomo => Variant::Lomo,
            VariantArg::Mil => Variant::Mil,
            VariantArg::SvmMean => Variant::SvmPool(Pooling::Mean),
            VariantArg::SvmMax => Variant::SvmPool(Pooling::Max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostUpdateArg {
    Gradient,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Kfold,
    Logo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Accuracy,
    AvgClassAccuracy,
    Auc,
    EerRate,
}

impl MetricArg {
    fn metric(self) -> Metric {
        match self {
            MetricArg::Accuracy => Metric::Accuracy,
            MetricArg::AvgClassAccuracy => Metric::AvgClassAccuracy,
            MetricArg::Auc => Metric::Auc,
            MetricArg::EerRate => Metric::EerRate,
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Frame dimension.
    #[arg(long = "d", default_value_t = 20)]
    pub dim: usize,
    /// Frames per sequence.
    #[arg(long = "n", default_value_t = 40)]
    pub frames: usize,
    /// Number of planted sub-events.
    #[arg(long, default_value_t = 3)]
    pub m_true: usize,
    /// Standard deviation of the background and planted-frame noise.
    #[arg(long, default_value_t = 0.3)]
    pub noise_sigma: f64,
    /// Planted frames are more than this many frames apart.
    #[arg(long, default_value_t = 5)]
    pub min_gap: usize,
    /// Number of positive sequences.
    #[arg(long, default_value_t = 200)]
    pub pos: usize,
    /// Number of negative sequences.
    #[arg(long, default_value_t = 200)]
    pub neg: usize,
    /// Negatives carry the sub-events out of order, or none at all.
    #[arg(long, value_enum, default_value_t = NegModeArg::Shuffled)]
    pub neg_mode: NegModeArg,
    /// Number of subject groups the sequences are dealt into.
    #[arg(long, default_value_t = 10)]
    pub groups: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

impl SynthArgs {
    pub fn spec(&self) -> SynthSpec {
        SynthSpec {
            dim: self.dim,
            frames: self.frames,
            planted: self.m_true,
            noise_sigma: self.noise_sigma,
            min_gap: self.min_gap,
            n_pos: self.pos,
            n_neg: self.neg,
            neg_mode: match self.neg_mode {
                NegModeArg::Shuffled => NegativeMode::Shuffled,
                NegModeArg::Absent => NegativeMode::Absent,
            },
            groups: self.groups,
            seed: self.seed,
        }
    }
}

/// Inference settings shared by every command that scores sequences.
#[derive(Debug, Clone, Args)]
pub struct InferArgs {
    /// Model family: full model, multiple instance learning, or a linear
    /// SVM on mean/max pooled sequences.
    #[arg(long, value_enum, default_value_t = VariantArg::Lomo)]
    pub variant: VariantArg,
    /// Exclusion window: frames removed on each side of a detection.
    #[arg(long = "t", default_value_t = 5)]
    pub exclusion: usize,
}

/// Learning settings.
#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Number of templates (forced to 1 for non-lomo variants).
    #[arg(long = "m", default_value_t = 3)]
    pub templates: usize,
    /// Learning rate.
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
    /// Regularization weight.
    #[arg(long, default_value_t = 1e-5)]
    pub lambda: f64,
    /// SGD steps [default: 100 x number of training sequences]
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Ordering cost step on a margin violation: c += eta*y (gradient) or
    /// c -= eta (literal).
    #[arg(long, value_enum, default_value_t = CostUpdateArg::Gradient)]
    pub cost_update: CostUpdateArg,
}

/// Per-frame preprocessing that needs no fitting.
#[derive(Debug, Clone, Args)]
pub struct FrameArgs {
    /// Scale every frame to unit l2 norm [default: off]
    #[arg(long)]
    pub l2_normalize: bool,
    /// Concatenate this many consecutive frames (including the current one).
    #[arg(long, default_value_t = 1)]
    pub stack: usize,
    /// Append a constant 1.0 to every frame [default: off]
    #[arg(long)]
    pub bias_feature: bool,
}

impl FrameArgs {
    pub fn config(&self, pca_dims: Option<usize>) -> PreprocessConfig {
        PreprocessConfig {
            l2_normalize: self.l2_normalize,
            pca_dims,
            stack_window: self.stack,
            bias_feature: self.bias_feature,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Dataset manifest (CSV with header id,label,group,path).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Model file, or output directory with --ova.
    #[arg(long)]
    pub out: PathBuf,
    /// Label treated as the positive class.
    #[arg(long, default_value = "pos")]
    pub positive: String,
    /// Train one model per class and write `model_<class>.txt` files [default: off]
    #[arg(long)]
    pub ova: bool,
    #[command(flatten)]
    pub infer: InferArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    #[command(flatten)]
    pub frames: FrameArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Model file; repeat to average the scores of several models.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    /// Scores CSV [default: standard output]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub infer: InferArgs,
    #[command(flatten)]
    pub frames: FrameArgs,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Grouped k-fold or leave-one-group-out.
    #[arg(long, value_enum, default_value_t = SchemeArg::Kfold)]
    pub scheme: SchemeArg,
    /// Folds for the kfold scheme.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// eer-rate uses a discrete threshold sweep over the observed scores.
    #[arg(long, value_enum, default_value_t = MetricArg::Accuracy)]
    pub metric: MetricArg,
    /// Label treated as the positive class in binary mode.
    #[arg(long, default_value = "pos")]
    pub positive: String,
    /// One-vs-all over all labels instead of a binary task [default: off]
    #[arg(long)]
    pub multiclass: bool,
    /// Project frames onto this many principal components fitted on each
    /// fold's training frames [default: off]
    #[arg(long)]
    pub pca: Option<usize>,
    /// Results CSV [default: standard output]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub infer: InferArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    #[command(flatten)]
    pub frames: FrameArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Sequence CSV (no header, one frame per row).
    #[arg(long)]
    pub sequence: PathBuf,
    /// Timeline CSV [default: standard output]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub infer: InferArgs,
    #[command(flatten)]
    pub frames: FrameArgs,
}

pub fn train_config(infer: &InferArgs, fit: &FitArgs) -> TrainConfig {
    TrainConfig {
        templates: fit.templates,
        eta: fit.eta,
        lambda: fit.lambda,
        exclusion: infer.exclusion,
        max_iter: fit.max_iter,
        seed: fit.seed,
        variant: infer.variant.variant(),
        cost_update: match fit.cost_update {
            CostUpdateArg::Gradient => CostUpdate::Gradient,
            CostUpdateArg::Literal => CostUpdate::Literal,
        },
    }
}

fn flag_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn describe(cfg: &TrainConfig, infer: &InferArgs, fit: &FitArgs, frames: &FrameArgs, n: usize) -> String {
    format!(
        "variant={} M={} eta={} lambda={:e} t={} max_iter={} seed={} cost_update={} \
         l2_normalize={} stack={} bias_feature={}",
        flag_name(infer.variant),
        cfg.effective_templates(),
        cfg.eta,
        cfg.lambda,
        cfg.exclusion,
        cfg.iterations(n),
        cfg.seed,
        flag_name(fit.cost_update),
        frames.l2_normalize,
        frames.stack,
        frames.bias_feature
    )
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stateless(frames: &FrameArgs) -> anyhow::Result<Preprocessor> {
    ensure!(frames.stack >= 1, "--stack must be at least 1");
    Ok(frames.config(None).fit(std::iter::empty())?)
}

fn prepared(pre: &Preprocessor, manifest: &Manifest) -> anyhow::Result<Vec<FrameSequence>> {
    manifest
        .records
        .iter()
        .map(|r| {
            pre.apply(&r.sequence)
                .with_context(|| format!("sequence '{}'", r.id()))
        })
        .collect()
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Synth(args) => cmd_synth(&args),
        Command::Train(args) => cmd_train(&args),
        Command::Predict(args) => cmd_predict(&args),
        Command::Cv(args) => cmd_cv(&args),
        Command::Report(args) => cmd_report(&args),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> anyhow::Result<()> {
    let spec = args.spec();
    let data = write_synthetic(&spec, &args.out)?;
    println!(
        "wrote {} sequences ({} pos, {} neg) d={} N={} M_true={} neg_mode={} to {}",
        data.records.len(),
        spec.n_pos,
        spec.n_neg,
        spec.dim,
        spec.frames,
        spec.planted,
        flag_name(args.neg_mode),
        args.out.display()
    );
    Ok(())
}

fn model_file_name(class: &str) -> anyhow::Result<String> {
    ensure!(
        !class.is_empty() && !class.contains(['/', '\\']) && class != "." && class != "..",
        "class name '{class}' cannot be used in a file name"
    );
    Ok(format!("model_{class}.txt"))
}

pub fn cmd_train(args: &TrainArgs) -> anyhow::Result<()> {
    let manifest = parse_manifest(&args.manifest)?;
    let cfg = train_config(&args.infer, &args.fit);
    cfg.validate()?;
    eprintln!(
        "train: {} records={}",
        describe(&cfg, &args.infer, &args.fit, &args.frames, manifest.records.len()),
        manifest.records.len()
    );
    let pre = stateless(&args.frames)?;
    let seqs = prepared(&pre, &manifest)?;

    if args.ova {
        let data: Vec<(&FrameSequence, &str)> = seqs
            .iter()
            .zip(&manifest.records)
            .map(|(s, r)| (s, r.label.as_str()))
            .collect();
        let models = train_ova(&data, &cfg)?;
        let names = models
            .keys()
            .map(|c| model_file_name(c))
            .collect::<anyhow::Result<Vec<_>>>()?;
        fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
        for (model, name) in models.values().zip(names) {
            save_model(model, &args.out.join(&name))?;
            eprintln!("train: wrote {}", args.out.join(&name).display());
        }
    } else {
        let labels = manifest.labels();
        if !labels.contains(&args.positive.as_str()) {
            bail!(
                "positive class '{}' does not occur in the manifest (labels: {})",
                args.positive,
                labels.join(", ")
            );
        }
        let data: Vec<(&FrameSequence, Label)> = seqs
            .iter()
            .zip(&manifest.records)
            .map(|(s, r)| {
                let label = if r.label == args.positive { Label::Positive } else { Label::Negative };
                (s, label)
            })
            .collect();
        let model = train_examples(&data, &cfg)?;
        save_model(&model, &args.out)?;
        eprintln!("train: wrote {}", args.out.display());
    }
    Ok(())
}

fn check_variant(model: &LomoModel, variant: VariantArg, path: &Path) -> anyhow::Result<()> {
    if variant != VariantArg::Lomo && model.num_templates() != 1 {
        bail!(
            "{}: variant {} needs a single-template model, found M={}",
            path.display(),
            flag_name(variant),
            model.num_templates()
        );
    }
    Ok(())
}

pub fn cmd_predict(args: &PredictArgs) -> anyhow::Result<()> {
    let manifest = parse_manifest(&args.manifest)?;
    let mut models = Vec::with_capacity(args.models.len());
    for path in &args.models {
        let model = load_model(path)?;
        check_variant(&model, args.infer.variant, path)?;
        models.push(model);
    }
    let pre = stateless(&args.frames)?;
    let seqs = prepared(&pre, &manifest)?;
    let variant = args.infer.variant.variant();
    let inference = InferenceConfig::new(args.infer.exclusion);

    let mut scored = Vec::with_capacity(seqs.len());
    for seq in &seqs {
        let input = variant.prepare(seq);
        let scores = models
            .iter()
            .zip(&args.models)
            .map(|(m, path)| {
                score(m, &input, inference)
                    .with_context(|| format!("sequence '{}' under model {}", seq.id(), path.display()))
            })
            .collect::<anyhow::Result<Vec<f64>>>()?;
        scored.push((seq.id(), fuse_scores(&scores)?));
    }
    eprintln!(
        "predict: {} sequences, {} model(s), variant={} t={}",
        scored.len(),
        models.len(),
        flag_name(args.infer.variant),
        args.infer.exclusion
    );
    write_output(args.out.as_deref(), &format_predictions(scored))
}

pub fn cmd_cv(args: &CvArgs) -> anyhow::Result<()> {
    let manifest = parse_manifest(&args.manifest)?;
    let train = train_config(&args.infer, &args.fit);
    train.validate()?;
    ensure!(args.frames.stack >= 1, "--stack must be at least 1");
    let scheme = match args.scheme {
        SchemeArg::Kfold => FoldScheme::GroupedKFold(args.k),
        SchemeArg::Logo => FoldScheme::LeaveOneGroupOut,
    };
    let groups: Vec<&str> = manifest.records.iter().map(|r| r.group.as_str()).collect();
    let plan = make_folds(&groups, scheme, train.seed)?;
    let task = if args.multiclass {
        Task::Multiclass
    } else {
        let labels = manifest.labels();
        if !labels.contains(&args.positive.as_str()) {
            bail!(
                "positive class '{}' does not occur in the manifest (labels: {})",
                args.positive,
                labels.join(", ")
            );
        }
        Task::Binary {
            positive: args.positive.clone(),
        }
    };
    let cfg = CvConfig {
        train,
        preprocess: args.frames.config(args.pca),
        metric: args.metric.metric(),
        task,
    };
    eprintln!(
        "cv: scheme={} folds={} metric={} pca={} {}",
        flag_name(args.scheme),
        plan.len(),
        cfg.metric.name(),
        args.pca.map_or("off".to_string(), |k| k.to_string()),
        describe(&train, &args.infer, &args.fit, &args.frames, manifest.records.len())
    );
    let report = run_cv(&manifest.records, &plan, &cfg)?;
    for (i, v) in report.folds.iter().enumerate() {
        eprintln!("cv: fold {} {}={v}", i + 1, cfg.metric.name());
    }
    eprintln!("cv: mean {}={}", cfg.metric.name(), report.mean);
    write_output(args.out.as_deref(), &format_cv_results(&report))
}

pub fn cmd_report(args: &ReportArgs) -> anyhow::Result<()> {
    let model = load_model(&args.model)?;
    check_variant(&model, args.infer.variant, &args.model)?;
    let id = args
        .sequence
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let raw = read_sequence(&args.sequence, &id)?;
    let seq = stateless(&args.frames)?.apply(&raw)?;
    let input = args.infer.variant.variant().prepare(&seq);
    let assignment = latent_assign(&model, &input, InferenceConfig::new(args.infer.exclusion))
        .with_context(|| format!("sequence '{id}'"))?;
    write_output(args.out.as_deref(), &format_timeline(&assignment, input.len()))
}
