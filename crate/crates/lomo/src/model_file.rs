//! Plain-text model files.
//!
//! ```text
//! LOMO v1
//! M=<templates> d=<dim>
//! costs <M! values in permutation-index order>
//! w1 <d values>
//! ...
//! wM <d values>
//! ```
//!
//! Values use the shortest decimal representation that reads back to the
//! identical `f64`, so a save/load cycle is bit-exact. Lines end in LF and
//! carry no trailing whitespace.

use std::fs;
use std::path::Path;

use lomo_core::perm::factorial;
use lomo_core::LomoModel;

use crate::error::{Error, Result};
use crate::fmt_f64;

pub const MAGIC: &str = "LOMO";
pub const VERSION: &str = "v1";

fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" ")
}

pub fn format_model(model: &LomoModel) -> String {
    let mut out = format!("{MAGIC} {VERSION}\n");
    out.push_str(&format!("M={} d={}\n", model.num_templates(), model.dim()));
    out.push_str(&format!("costs {}\n", join(model.costs())));
    for (i, w) in model.templates().iter().enumerate() {
        out.push_str(&format!("w{} {}\n", i + 1, join(w)));
    }
    out
}

/// Parse failure at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

fn parse_values(line_no: usize, tokens: &[&str], expected: usize, what: &str) -> std::result::Result<Vec<f64>, ParseError> {
    if tokens.len() != expected {
        return Err(err(
            line_no,
            format!("{what}: expected {expected} values, found {}", tokens.len()),
        ));
    }
    tokens
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line_no, format!("{what}: '{t}' is not a finite number")))
        })
        .collect()
}

fn parse_header_field(line_no: usize, token: Option<&str>, key: &str) -> std::result::Result<usize, ParseError> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(line_no, format!("expected '{key}=<integer>'")))
}

pub fn parse_model(text: &str) -> std::result::Result<LomoModel, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (n, magic) = lines.next().ok_or_else(|| err(1, "empty model file"))?;
    match magic.split_once(' ') {
        Some((MAGIC, VERSION)) => {}
        Some((MAGIC, other)) => {
            return Err(err(n, format!("unsupported model version '{other}' (expected {VERSION})")))
        }
        _ => return Err(err(n, format!("malformed header, expected '{MAGIC} {VERSION}'"))),
    }

    let (n, dims) = lines.next().ok_or_else(|| err(2, "missing 'M=<int> d=<int>' line"))?;
    let mut fields = dims.split(' ');
    let m = parse_header_field(n, fields.next(), "M")?;
    let d = parse_header_field(n, fields.next(), "d")?;
    if fields.next().is_some() {
        return Err(err(n, "unexpected token after d=<int>"));
    }
    if m == 0 || m > lomo_core::perm::MAX_TEMPLATES || d == 0 {
        return Err(err(n, format!("unsupported dimensions M={m} d={d}")));
    }

    let (n, costs_line) = lines.next().ok_or_else(|| err(3, "missing costs line"))?;
    let tokens: Vec<&str> = costs_line.split(' ').collect();
    if tokens[0] != "costs" {
        return Err(err(n, "expected 'costs' line"));
    }
    let costs = parse_values(n, &tokens[1..], factorial(m), "costs")?;

    let mut templates = Vec::with_capacity(m);
    for i in 1..=m {
        let (n, line) = lines
            .next()
            .ok_or_else(|| err(3 + i, format!("missing template line w{i}")))?;
        let tokens: Vec<&str> = line.split(' ').collect();
        let tag = format!("w{i}");
        if tokens[0] != tag {
            return Err(err(n, format!("expected '{tag}' line")));
        }
        templates.push(parse_values(n, &tokens[1..], d, &tag)?);
    }
    if let Some((n, extra)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(err(n, format!("unexpected trailing content '{extra}'")));
    }
    LomoModel::new(templates, costs).map_err(|e| err(3, e.to_string()))
}

pub fn save_model(model: &LomoModel, path: &Path) -> Result<()> {
    fs::write(path, format_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<LomoModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text).map_err(|e| Error::parse(path, e.line, e.msg))
}
