//! LOMo vs MIL on the synthetic planted-order benchmark.
//!
//! `cargo run --release -p lomo-core --example ordinal_benchmark [seeds] [shuffled|absent] [bias]`

use lomo_core::inference::score;
use lomo_core::preprocess::PreprocessConfig;
use lomo_core::synth::{generate, NegativeMode, SynthSpec, POSITIVE_LABEL};
use lomo_core::training::{train_examples, Label, TrainConfig, Variant};
use lomo_core::FrameSequence;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seeds: u64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(5);
    let mode = match args.get(1).map(String::as_str) {
        Some("absent") => NegativeMode::Absent,
        _ => NegativeMode::Shuffled,
    };
    let pre = PreprocessConfig {
        bias_feature: args.get(2).map(String::as_str) == Some("bias"),
        ..PreprocessConfig::default()
    }
    .fit(std::iter::empty())
    .unwrap();

    for seed in 0..seeds {
        let spec = SynthSpec {
            n_pos: 400,
            n_neg: 400,
            neg_mode: mode,
            seed,
            ..SynthSpec::default()
        };
        let data = generate(&spec).unwrap();
        let seqs: Vec<(FrameSequence, Label)> = data
            .records
            .iter()
            .map(|r| {
                let label = if r.label == POSITIVE_LABEL { Label::Positive } else { Label::Negative };
                (pre.apply(&r.sequence).unwrap(), label)
            })
            .collect();
        // records come grouped by class; the first half of each class trains
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for (i, (s, l)) in seqs.iter().enumerate() {
            let target = if i % 400 < 200 { &mut train } else { &mut test };
            target.push((s, *l));
        }
        let accuracy = |cfg: &TrainConfig| {
            let model = train_examples(&train, cfg).unwrap();
            let correct = test
                .iter()
                .filter(|(s, l)| (score(&model, s, cfg.inference()).unwrap() > 0.0) == (*l == Label::Positive))
                .count();
            (correct as f64 / test.len() as f64, model)
        };
        let (lomo_acc, model) = accuracy(&TrainConfig { seed, ..TrainConfig::default() });
        let (mil_acc, _) = accuracy(&TrainConfig { variant: Variant::Mil, seed, ..TrainConfig::default() });
        let others = &model.costs()[1..];
        println!(
            "seed {seed}: lomo {lomo_acc:.3} mil {mil_acc:.3} canonical cost {:.3} mean other {:.3}",
            model.cost(1),
            others.iter().sum::<f64>() / others.len() as f64
        );
    }
}
