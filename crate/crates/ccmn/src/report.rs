//! JSON reports. Real numbers are written with exactly six decimals.

use std::str::FromStr;

use ccmn_core::correction::compute_bound_constants;
use ccmn_core::metrics::MetricsReport;
use ccmn_core::{Architecture, MultiLabelDataset};
use serde_json::{json, Number, Value};

use crate::checkpoint::Checkpoint;

pub const METRIC_NAMES: [&str; 3] = ["hamming_loss", "ranking_loss", "average_precision"];

pub fn fixed6(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.6}");
    // "-0.000000" is not a distinct value worth keeping
    let s = if s == "-0.000000" { "0.000000".to_string() } else { s };
    Value::Number(Number::from_str(&s).expect("fixed-point text is valid JSON"))
}

pub fn metric_values(m: &MetricsReport) -> [f64; 3] {
    [m.hamming_loss, m.ranking_loss, m.average_precision]
}

/// The `ccmn evaluate` report.
pub fn evaluation_report(checkpoint: &Checkpoint, data: &MultiLabelDataset, metrics: &MetricsReport) -> Value {
    let bounds = compute_bound_constants(&checkpoint.noise);
    let hidden = match checkpoint.model.architecture() {
        Architecture::Linear => Value::Null,
        Architecture::Mlp { hidden } => json!(hidden),
    };
    let values = metric_values(metrics);
    json!({
        "dataset": {
            "instances": data.len(),
            "features": data.dim(),
            "labels": data.num_labels(),
        },
        "metrics": {
            "hamming_loss": fixed6(values[0]),
            "ranking_loss": fixed6(values[1]),
            "average_precision": fixed6(values[2]),
            "average_precision_skipped": metrics.ap_skipped,
        },
        "noise": {
            "mu_independent": fixed6(bounds.mu_independent),
            "mu_dependent": fixed6(bounds.mu_dependent),
            "kappa_max": fixed6(bounds.kappa_max),
        },
        "model": {
            "architecture": checkpoint.model.architecture().name(),
            "hidden": hidden,
            "objective": checkpoint.objective.name(),
            "loss": checkpoint.loss.kind().name(),
            "prediction": checkpoint.prediction.name(),
        },
    })
}

/// `name value` lines for the terminal.
pub fn metric_lines(metrics: &MetricsReport) -> String {
    METRIC_NAMES
        .iter()
        .zip(metric_values(metrics))
        .map(|(name, v)| format!("{name} {v:.6}\n"))
        .collect()
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fixed6(0.0).to_string(), "0.000000");
        assert_eq!(fixed6(1.0).to_string(), "1.000000");
        assert_eq!(fixed6(2.0 / 3.0).to_string(), "0.666667");
        assert_eq!(fixed6(-1e-9).to_string(), "0.000000");
        assert_eq!(fixed6(f64::NAN), Value::Null);
        assert_eq!(fixed6(0.25).as_f64(), Some(0.25));
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.7]), (0.7, 0.0));
    }
}
