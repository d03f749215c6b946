//! The sparse multi-label text format.
//!
//! ```text
//! #n 3 #d 4 #q 3
//! 1,3 2:0.5 4:1.0
//!  1:1.0
//! 2
//! ```
//!
//! The header fixes the number of instances, features and labels. Every other
//! line starting with `#` is a comment. Each instance line holds the
//! comma-separated 1-based indices of its relevant labels (possibly none),
//! followed by space-separated `index:value` pairs with 1-based, strictly
//! increasing feature indices. Absent features are zero.

use std::fmt::Write as _;
use std::path::Path;

use ccmn_core::{Features, LabelVector, MultiLabelDataset};

use crate::error::{self, Error, Result};

pub use ccmn_core::synth::{generate_synthetic, SyntheticDataset};

pub fn parse_multilabel_svm(path: &Path) -> Result<MultiLabelDataset> {
    let text = error::read_to_string(path)?;
    parse_multilabel_svm_str(&text, &path.display().to_string())
}

/// Parses the format from memory; `source` names the input in error messages.
pub fn parse_multilabel_svm_str(text: &str, source: &str) -> Result<MultiLabelDataset> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let range_err = |line: usize, message: String| Error::Range {
        path: source.to_string(),
        line,
        message,
    };

    let mut shape: Option<(usize, usize, usize)> = None;
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut last_line = 0;
    for (i, line) in body.split('\n').enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        if text.is_empty() {
            break;
        }
        if line.starts_with("#n ") {
            if shape.is_some() {
                return Err(parse_err(lineno, "second header line".into()));
            }
            shape = Some(parse_header(line).map_err(|m| parse_err(lineno, m))?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let Some((n, d, q)) = shape else {
            return Err(parse_err(lineno, "instance before the '#n <n> #d <d> #q <q>' header".into()));
        };
        if labels.len() == n {
            return Err(parse_err(lineno, format!("more than the declared {n} instances")));
        }
        let (label_field, features) = line.split_once(' ').unwrap_or((line, ""));

        let mut relevant = Vec::new();
        if !label_field.is_empty() {
            for tok in label_field.split(',') {
                let l: usize = parse_index(tok).map_err(|m| parse_err(lineno, format!("label '{tok}': {m}")))?;
                if l == 0 || l > q {
                    return Err(range_err(lineno, format!("label {l} not in 1..={q}")));
                }
                if relevant.contains(&(l - 1)) {
                    return Err(parse_err(lineno, format!("label {l} repeated")));
                }
                relevant.push(l - 1);
            }
        }
        labels.push(LabelVector::from_relevant(q, &relevant)?);

        let mut row = Vec::new();
        if line.contains(' ') {
            for tok in features.split(' ') {
                let (idx, val) = tok
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, format!("feature '{tok}' is not index:value")))?;
                let idx = parse_index(idx).map_err(|m| parse_err(lineno, format!("feature index '{idx}': {m}")))?;
                if idx == 0 || idx > d {
                    return Err(range_err(lineno, format!("feature {idx} not in 1..={d}")));
                }
                let val: f64 = val
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("feature value '{val}' is not a number")))?;
                if !val.is_finite() {
                    return Err(parse_err(lineno, format!("feature value '{val}' is not finite")));
                }
                let idx = (idx - 1) as u32;
                if row.last().is_some_and(|&(prev, _)| prev >= idx) {
                    return Err(parse_err(lineno, "feature indices must be strictly increasing".into()));
                }
                row.push((idx, val));
            }
        }
        rows.push(row);
    }
    let Some((n, d, q)) = shape else {
        return Err(parse_err(last_line.max(1), "missing '#n <n> #d <d> #q <q>' header".into()));
    };
    if labels.len() != n {
        return Err(parse_err(last_line, format!("header declares {n} instances, found {}", labels.len())));
    }
    Ok(MultiLabelDataset::new(Features::sparse_from_rows(d, rows)?, labels, q)?)
}

/// Digits only; rejects signs and whitespace that `usize::from_str` would
/// otherwise accept.
fn parse_index(tok: &str) -> Result<usize, String> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err("expected a positive integer".into());
    }
    tok.parse().map_err(|_| "integer too large".into())
}

fn parse_header(line: &str) -> Result<(usize, usize, usize), String> {
    let toks: Vec<&str> = line.split(' ').collect();
    match toks.as_slice() {
        ["#n", n, "#d", d, "#q", q] => {
            let n = parse_index(n)?;
            let d = parse_index(d)?;
            let q = parse_index(q)?;
            if q == 0 {
                return Err("the number of labels must be positive".into());
            }
            Ok((n, d, q))
        }
        _ => Err(format!("malformed header '{line}', expected '#n <n> #d <d> #q <q>'")),
    }
}

/// The file contents for `data`. Values are written with 17 significant
/// digits, so parsing the output reproduces every feature bit for bit.
pub fn to_multilabel_svm_string(data: &MultiLabelDataset) -> String {
    let mut out = String::new();
    writeln!(out, "#n {} #d {} #q {}", data.len(), data.dim(), data.num_labels()).unwrap();
    for i in 0..data.len() {
        let labels: Vec<String> = data.label(i).relevant().map(|j| (j + 1).to_string()).collect();
        out.push_str(&labels.join(","));
        for (j, v) in data.row(i).entries() {
            write!(out, " {}:{v:.16e}", j + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_multilabel_svm(data: &MultiLabelDataset, path: &Path) -> Result<()> {
    error::write(path, to_multilabel_svm_string(data))
}
