use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lomo::model_file::{load_model, save_model};
use lomo::sequence_file::write_sequence;
use lomo_core::{FrameSequence, LomoModel};

fn lomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lomo")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = lomo(args);
    assert!(
        out.status.success(),
        "lomo {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn synth(dir: &Path, extra: &[&str]) -> String {
    let mut args = vec!["synth", "--pos", "20", "--neg", "20", "--groups", "5", "--out"];
    let out = s(dir);
    args.push(&out);
    args.extend_from_slice(extra);
    ok(&args);
    s(&dir.join("manifest.csv"))
}

/// Model and sequence whose greedy trace is worked out by hand: template 1
/// picks frame 1 (score 1), template 2 picks frame 3 (score 3), the order is
/// canonical, so the total is (1 + 3) / 2 + 0 = 2.
fn hand_traced(dir: &Path) -> (String, String, String) {
    let model = LomoModel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, -1.0]).unwrap();
    let seq = FrameSequence::new(
        "trace",
        vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 3.0], vec![0.5, 0.5]],
    )
    .unwrap();
    save_model(&model, &dir.join("m.txt")).unwrap();
    write_sequence(&dir.join("trace.csv"), &seq).unwrap();
    fs::write(dir.join("manifest.csv"), "id,label,group,path\ntrace,pos,g,trace.csv\n").unwrap();
    (s(&dir.join("m.txt")), s(&dir.join("trace.csv")), s(&dir.join("manifest.csv")))
}

#[test]
fn synth_writes_dataset_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = ok(&["synth", "--d", "20", "--n", "40", "--m-true", "3", "--pos", "200", "--neg", "200",
        "--neg-mode", "shuffled", "--seed", "7", "--out", &s(&a)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("400 sequences"));
    ok(&["synth", "--pos", "200", "--neg", "200", "--out", &s(&b)]);
    let seqs = fs::read_dir(&a)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("seq_"))
        .count();
    assert_eq!(seqs, 400);
    for name in ["manifest.csv", "spec.txt", "seq_pos000.csv", "seq_neg199.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn synth_rejects_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = lomo(&["synth", "--m-true", "1", "--neg-mode", "shuffled", "--out", &s(dir.path())]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("M_true"));
    assert!(!dir.path().join("manifest.csv").exists());
}

#[test]
fn unknown_flags_are_rejected_and_help_lists_defaults() {
    assert!(!lomo(&["train", "--no-such-flag"]).status.success());
    for cmd in ["synth", "train", "predict", "cv", "report"] {
        let out = ok(&[cmd, "--help"]);
        let help = String::from_utf8_lossy(&out.stdout);
        assert!(help.contains("[default:"), "{cmd}: {help}");
    }
    let help = String::from_utf8_lossy(&ok(&["train", "--help"]).stdout).into_owned();
    for flag in ["--eta", "--lambda", "--t ", "--m ", "--max-iter", "--seed", "--variant", "--ova", "--bias-feature"] {
        assert!(help.contains(flag), "missing {flag}");
    }
}

#[test]
fn train_logs_defaults_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = synth(&dir.path().join("d"), &[]);
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    let out = ok(&["train", "--manifest", &manifest, "--seed", "9", "--out", &s(&a)]);
    let log = String::from_utf8_lossy(&out.stderr);
    assert!(log.contains("eta=0.05") && log.contains("lambda=1e-5") && log.contains("t=5"), "{log}");
    ok(&["train", "--manifest", &manifest, "--seed", "9", "--out", &s(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(load_model(&a).unwrap().num_templates(), 3);
}

#[test]
fn mil_variant_writes_single_template_without_costs() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = synth(&dir.path().join("d"), &[]);
    let model = dir.path().join("mil.txt");
    ok(&["train", "--manifest", &manifest, "--variant", "mil", "--out", &s(&model)]);
    let text = fs::read_to_string(&model).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..3], &["LOMO v1", "M=1 d=20", "costs 0"]);
    assert_eq!(lines.len(), 4);
}

#[test]
fn ova_training_writes_one_model_per_class() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut manifest = String::from("id,label,group,path\n");
    for (i, label) in ["a", "b", "c", "a", "b", "c"].iter().enumerate() {
        let frames = (0..12).map(|f| vec![(f * (i + 1)) as f64 % 5.0, i as f64]).collect();
        write_sequence(&d.join(format!("{i}.csv")), &FrameSequence::new("x", frames).unwrap()).unwrap();
        manifest.push_str(&format!("s{i},{label},g{i},{i}.csv\n"));
    }
    fs::write(d.join("manifest.csv"), manifest).unwrap();
    let out = d.join("models");
    ok(&["train", "--manifest", &s(&d.join("manifest.csv")), "--ova", "--m", "2", "--t", "1",
        "--max-iter", "50", "--out", &s(&out)]);
    for class in ["a", "b", "c"] {
        assert_eq!(load_model(&out.join(format!("model_{class}.txt"))).unwrap().num_templates(), 2);
    }
}

#[test]
fn predict_hand_traced_score_and_fusion() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _, manifest) = hand_traced(dir.path());
    let out = ok(&["predict", "--manifest", &manifest, "--model", &model, "--t", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "id,score,decision\ntrace,2,1\n");
    let fused = ok(&["predict", "--manifest", &manifest, "--model", &model, "--model", &model, "--t", "1"]);
    assert_eq!(fused.stdout, out.stdout);

    let zero = dir.path().join("zero.txt");
    save_model(&LomoModel::zeros(2, 1).unwrap(), &zero).unwrap();
    let out = ok(&["predict", "--manifest", &manifest, "--model", &s(&zero), "--variant", "mil"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "id,score,decision\ntrace,0,-1\n");
}

#[test]
fn predict_errors_name_the_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _, manifest) = hand_traced(dir.path());
    let out = lomo(&["predict", "--manifest", &manifest, "--model", &model, "--t", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("'trace'"));

    let wide = dir.path().join("wide.txt");
    save_model(&LomoModel::zeros(3, 1).unwrap(), &wide).unwrap();
    let out = lomo(&["predict", "--manifest", &manifest, "--model", &s(&wide)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("'trace'"));
}

#[test]
fn report_rows_for_hand_traced_example() {
    let dir = tempfile::tempdir().unwrap();
    let (model, seq, _) = hand_traced(dir.path());
    let out = ok(&["report", "--model", &model, "--sequence", &seq, "--t", "1"]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "template,frame_index,percentile,template_score\n\
         1,1,25,1\n\
         2,3,75,3\n\
         perm_index,1\n\
         ordering_cost,0\n\
         total_score,2\n"
    );
}

#[test]
fn report_single_template_is_argmax_frame() {
    let dir = tempfile::tempdir().unwrap();
    let (_, seq, _) = hand_traced(dir.path());
    let m = dir.path().join("m1.txt");
    save_model(&LomoModel::new(vec![vec![0.0, 1.0]], vec![0.0]).unwrap(), &m).unwrap();
    let out = ok(&["report", "--model", &s(&m), "--sequence", &seq]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert_eq!(text.lines().nth(1), Some("1,3,75,3"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn cv_logo_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = synth(&dir.path().join("d"), &[]);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |out: &Path| {
        vec!["cv".to_string(), "--manifest".into(), manifest.clone(), "--scheme".into(), "logo".into(),
            "--max-iter".into(), "500".into(), "--out".into(), s(out)]
    };
    let run = |out: &Path| {
        let v = args(out);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    };
    run(&a);
    run(&b);
    let text = fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "fold,metric,value");
    assert_eq!(lines.len(), 1 + 5 + 1);
    assert!(lines[6].starts_with("mean,accuracy,"));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn cv_auc_on_one_class_fold_names_the_fold() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut manifest = String::from("id,label,group,path\n");
    // Group g0 holds only positives, so the fold that tests on g0 trains on
    // positives and negatives but tests on one class.
    for i in 0..6 {
        let label = if i < 2 || i % 2 == 0 { "pos" } else { "neg" };
        let group = if i < 2 { "g0" } else { "g1" };
        let frames = (0..3).map(|f| vec![(i + f) as f64, 1.0]).collect();
        write_sequence(&d.join(format!("{i}.csv")), &FrameSequence::new("x", frames).unwrap()).unwrap();
        manifest.push_str(&format!("s{i},{label},{group},{i}.csv\n"));
    }
    fs::write(d.join("manifest.csv"), manifest).unwrap();
    let out = lomo(&["cv", "--manifest", &s(&d.join("manifest.csv")), "--scheme", "logo", "--metric", "auc",
        "--m", "1", "--t", "0", "--max-iter", "20"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fold 1"), "{err}");
}

#[test]
fn report_shuffled_negative_costs_less_than_canonical_order() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d");
    let manifest = s(&data.join("manifest.csv"));
    ok(&["synth", "--pos", "200", "--neg", "200", "--out", &s(&data)]);
    let model = dir.path().join("m.txt");
    ok(&["train", "--manifest", &manifest, "--bias-feature", "--out", &s(&model)]);
    let canonical = load_model(&model).unwrap().cost(1);
    let out = ok(&["report", "--model", &s(&model), "--sequence", &s(&data.join("seq_neg000.csv")),
        "--bias-feature"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let cost: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("ordering_cost,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(cost < canonical, "ordering cost {cost} vs canonical {canonical}\n{text}");
}
