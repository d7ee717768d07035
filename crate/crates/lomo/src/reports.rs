//! CSV outputs: cross-validation results, prediction scores and detection
//! timelines.

use lomo_core::cv::CvReport;
use lomo_core::LatentAssignment;

use crate::fmt_f64;

pub fn format_cv_results(report: &CvReport) -> String {
    let name = report.metric.name();
    let mut out = String::from("fold,metric,value\n");
    for (i, v) in report.folds.iter().enumerate() {
        out.push_str(&format!("{},{name},{}\n", i + 1, fmt_f64(*v)));
    }
    out.push_str(&format!("mean,{name},{}\n", fmt_f64(report.mean)));
    out
}

/// `1` for a strictly positive score, `-1` otherwise.
pub fn decision(score: f64) -> i8 {
    if score > 0.0 {
        1
    } else {
        -1
    }
}

pub fn format_predictions<'a, I>(scores: I) -> String
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut out = String::from("id,score,decision\n");
    for (id, s) in scores {
        out.push_str(&format!("{id},{},{}\n", fmt_f64(s), decision(s)));
    }
    out
}

/// Position of 0-based frame `k` as a rounded percentage of `n` frames,
/// counting frames from 1.
pub fn percentile(k: usize, n: usize) -> u32 {
    (100.0 * (k + 1) as f64 / n as f64).round() as u32
}

pub fn format_timeline(a: &LatentAssignment, frames: usize) -> String {
    let mut out = String::from("template,frame_index,percentile,template_score\n");
    for (i, (&k, &s)) in a.frames.iter().zip(&a.template_scores).enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            k + 1,
            percentile(k, frames),
            fmt_f64(s)
        ));
    }
    out.push_str(&format!("perm_index,{}\n", a.perm));
    out.push_str(&format!("ordering_cost,{}\n", fmt_f64(a.ordering_cost)));
    out.push_str(&format!("total_score,{}\n", fmt_f64(a.total)));
    out
}
