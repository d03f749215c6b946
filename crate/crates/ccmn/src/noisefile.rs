//! Noise-rate files: one `j rho_pos rho_neg` line per label, `j` 1-based.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ccmn_core::NoiseSpec;

use crate::error::{self, Error, Result};

/// `G.noise` for a dataset written to `G`.
pub fn sidecar_path(dataset: &Path) -> PathBuf {
    let mut s = dataset.as_os_str().to_owned();
    s.push(".noise");
    PathBuf::from(s)
}

/// Rates are written in Rust's shortest round-trip form.
pub fn to_noise_string(spec: &NoiseSpec) -> String {
    let mut out = String::from("# j rho_pos rho_neg\n");
    for j in 0..spec.num_labels() {
        writeln!(out, "{} {} {}", j + 1, spec.rho_pos(j), spec.rho_neg(j)).unwrap();
    }
    out
}

pub fn write_noise_file(spec: &NoiseSpec, path: &Path) -> Result<()> {
    error::write(path, to_noise_string(spec))
}

pub fn read_noise_file(path: &Path) -> Result<NoiseSpec> {
    parse_noise_str(&error::read_to_string(path)?, &path.display().to_string())
}

pub fn parse_noise_str(text: &str, source: &str) -> Result<NoiseSpec> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [j, p, n] = toks.as_slice() else {
            return Err(err(i + 1, format!("expected 'j rho_pos rho_neg', got '{line}'")));
        };
        let j: usize = j.parse().map_err(|_| err(i + 1, format!("bad label index '{j}'")))?;
        if j != pos.len() + 1 {
            return Err(err(i + 1, format!("label index {j}, expected {}", pos.len() + 1)));
        }
        let rate = |s: &str| s.parse::<f64>().map_err(|_| err(i + 1, format!("bad rate '{s}'")));
        pos.push(rate(p)?);
        neg.push(rate(n)?);
    }
    if pos.is_empty() {
        return Err(err(1, "no noise rates".into()));
    }
    Ok(NoiseSpec::new(pos, neg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let spec = NoiseSpec::new(vec![0.1, 0.0, 1.0 / 3.0], vec![0.2, 0.6, 0.25]).unwrap();
        let text = to_noise_string(&spec);
        assert!(text.contains("\n2 0 0.6\n"), "{text}");
        assert_eq!(parse_noise_str(&text, "t").unwrap(), spec);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_noise_str("1 0.5 0.5\n", "t").is_err());
        assert!(parse_noise_str("2 0.1 0.1\n", "t").is_err());
        assert!(parse_noise_str("1 0.1\n", "t").is_err());
        assert!(parse_noise_str("# only a comment\n", "t").is_err());
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/train.svm")), PathBuf::from("out/train.svm.noise"));
    }
}
