//! Text checkpoints.
//!
//! ```text
//! ccmn-checkpoint 1
//! architecture mlp
//! hidden 128
//! input_dim 20
//! output_dim 6
//! num_labels 5
//! objective ranking-corrected
//! loss square
//! clamp_bound 1e1
//! prediction dummy-threshold
//! learning_rate 5e-3
//! best_epoch 117
//! rho_pos 3e-1 3e-1 3e-1 3e-1 3e-1
//! rho_neg 3e-1 3e-1 3e-1 3e-1 3e-1
//! tensor W1 128 20
//! <128 lines of 20 values>
//! tensor b1 128 1
//! ...
//! end
//! ```
//!
//! Header keys appear in this order (`hidden` only for `mlp`). Tensors follow
//! the model's parameter layout (`W`, `b` for linear; `W1`, `b1`, `W2`, `b2`
//! for mlp), one matrix row per line. Every number is written in the shortest
//! form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use ccmn_core::metrics::PredictionRule;
use ccmn_core::{Architecture, DecisionModel, LossKind, NoiseSpec, ObjectiveKind, SurrogateLoss};

use crate::error::{self, Error, Result};

pub const MAGIC: &str = "ccmn-checkpoint 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: DecisionModel,
    pub num_labels: usize,
    pub objective: ObjectiveKind,
    pub loss: SurrogateLoss,
    pub prediction: PredictionRule,
    /// Noise rates the model was trained under.
    pub noise: NoiseSpec,
    pub learning_rate: f64,
    pub best_epoch: usize,
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ")
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "architecture {}", m.architecture().name()).unwrap();
        if let Architecture::Mlp { hidden } = m.architecture() {
            writeln!(out, "hidden {hidden}").unwrap();
        }
        writeln!(out, "input_dim {}", m.input_dim()).unwrap();
        writeln!(out, "output_dim {}", m.output_dim()).unwrap();
        writeln!(out, "num_labels {}", self.num_labels).unwrap();
        writeln!(out, "objective {}", self.objective).unwrap();
        writeln!(out, "loss {}", self.loss.kind()).unwrap();
        writeln!(out, "clamp_bound {:e}", self.loss.clamp_bound()).unwrap();
        writeln!(out, "prediction {}", self.prediction).unwrap();
        writeln!(out, "learning_rate {:e}", self.learning_rate).unwrap();
        writeln!(out, "best_epoch {}", self.best_epoch).unwrap();
        writeln!(out, "rho_pos {}", join(self.noise.rho_pos_all())).unwrap();
        writeln!(out, "rho_neg {}", join(self.noise.rho_neg_all())).unwrap();
        for t in m.layout() {
            writeln!(out, "tensor {} {} {}", t.name, t.rows, t.cols).unwrap();
            for row in m.params()[t.range].chunks(t.cols) {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        error::write(path, self.to_text())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&error::read_to_string(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut lines = Lines {
            inner: text.lines().enumerate(),
            source,
            line: 0,
        };
        if lines.next_line()? != MAGIC {
            return Err(lines.err(format!("not a checkpoint (expected '{MAGIC}')")));
        }
        let arch_name = lines.value("architecture")?;
        let arch = match arch_name.as_str() {
            "linear" => Architecture::Linear,
            "mlp" => Architecture::Mlp {
                hidden: lines.parsed("hidden")?,
            },
            other => return Err(lines.err(format!("unknown architecture '{other}'"))),
        };
        let input_dim: usize = lines.parsed("input_dim")?;
        let output_dim: usize = lines.parsed("output_dim")?;
        let num_labels: usize = lines.parsed("num_labels")?;
        let objective: ObjectiveKind = lines.parsed("objective")?;
        let kind: LossKind = lines.parsed("loss")?;
        let clamp_bound: f64 = lines.parsed("clamp_bound")?;
        let prediction: PredictionRule = lines.parsed("prediction")?;
        let learning_rate: f64 = lines.parsed("learning_rate")?;
        let best_epoch: usize = lines.parsed("best_epoch")?;
        let rho_pos = lines.floats("rho_pos")?;
        let rho_neg = lines.floats("rho_neg")?;
        let loss = SurrogateLoss::new(kind, clamp_bound)?;
        let noise = NoiseSpec::new(rho_pos, rho_neg)?;

        let template = DecisionModel::zeros(arch, input_dim, output_dim);
        let mut params = Vec::with_capacity(template.params().len());
        for t in template.layout() {
            let header = lines.next_line()?;
            let expected = format!("tensor {} {} {}", t.name, t.rows, t.cols);
            if header != expected {
                return Err(lines.err(format!("expected '{expected}', found '{header}'")));
            }
            for _ in 0..t.rows {
                let row = lines.next_line()?;
                let values = parse_floats(&row).map_err(|m| lines.err(m))?;
                if values.len() != t.cols {
                    return Err(lines.err(format!("{} values in a row of {}", values.len(), t.cols)));
                }
                params.extend(values);
            }
        }
        if lines.next_line()? != "end" {
            return Err(lines.err("expected 'end'".into()));
        }
        let model = DecisionModel::from_params(arch, input_dim, output_dim, params)?;
        let checkpoint = Checkpoint {
            model,
            num_labels,
            objective,
            loss,
            prediction,
            noise,
            learning_rate,
            best_epoch,
        };
        checkpoint.validate().map_err(|m| lines.err(m))?;
        Ok(checkpoint)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let expected_out = self.num_labels + usize::from(self.prediction == PredictionRule::DummyThreshold);
        if self.model.output_dim() != expected_out {
            return Err(format!(
                "{} outputs for {} labels with {} prediction",
                self.model.output_dim(),
                self.num_labels,
                self.prediction
            ));
        }
        if self.noise.num_labels() != self.num_labels {
            return Err(format!("{} noise rates for {} labels", self.noise.num_labels(), self.num_labels));
        }
        Ok(())
    }
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(' ')
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number '{t}'"))
        })
        .collect()
}

struct Lines<'a, I> {
    inner: I,
    source: &'a str,
    line: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn err(&self, message: String) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line: self.line,
            message,
        }
    }

    fn next_line(&mut self) -> Result<String> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l.to_string())
            }
            None => Err(self.err("unexpected end of checkpoint".into())),
        }
    }

    fn value(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.to_string()),
            _ => Err(self.err(format!("expected '{key} <value>', found '{line}'"))),
        }
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.value(key)?;
        v.parse().map_err(|_| self.err(format!("bad value '{v}' for {key}")))
    }

    fn floats(&mut self, key: &str) -> Result<Vec<f64>> {
        let v = self.value(key)?;
        parse_floats(&v).map_err(|m| self.err(m))
    }
}
