//! Linear and one-hidden-layer decision functions with exact gradients.
//!
//! Parameters live in one flat vector so the optimizer, gradient checks and
//! checkpoints can treat every architecture the same way. Layout:
//!
//! * linear: `W` (`out x d`, row-major), then `b` (`out`)
//! * mlp: `W1` (`hidden x d`), `b1` (`hidden`), `W2` (`out x hidden`), `b2` (`out`)

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use rand::Rng;

use crate::dataset::{MultiLabelDataset, Row};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::{self, Purpose};

pub const DEFAULT_HIDDEN_UNITS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Linear,
    /// input -> rectifier hidden layer -> output
    Mlp { hidden: usize },
}

impl Architecture {
    pub fn mlp() -> Self {
        Architecture::Mlp {
            hidden: DEFAULT_HIDDEN_UNITS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Linear => "linear",
            Architecture::Mlp { .. } => "mlp",
        }
    }

    pub fn num_params(self, input_dim: usize, output_dim: usize) -> usize {
        match self {
            Architecture::Linear => output_dim * input_dim + output_dim,
            Architecture::Mlp { hidden } => hidden * input_dim + hidden + output_dim * hidden + output_dim,
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    /// `linear`, `mlp` (128 hidden units) or `mlp:<hidden>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Architecture::Linear),
            "mlp" => Ok(Architecture::mlp()),
            other => match other.strip_prefix("mlp:").map(str::parse::<usize>) {
                Some(Ok(hidden)) if hidden > 0 => Ok(Architecture::Mlp { hidden }),
                _ => Err(Error::InvalidConfig(format!("unknown model '{other}'"))),
            },
        }
    }
}

/// A named block of the flat parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorLayout {
    pub name: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub range: Range<usize>,
    pub is_weight: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionModel {
    arch: Architecture,
    input_dim: usize,
    output_dim: usize,
    params: Vec<f64>,
}

impl DecisionModel {
    pub fn zeros(arch: Architecture, input_dim: usize, output_dim: usize) -> Self {
        DecisionModel {
            arch,
            input_dim,
            output_dim,
            params: alloc::vec![0.0; arch.num_params(input_dim, output_dim)],
        }
    }

    pub fn from_params(
        arch: Architecture,
        input_dim: usize,
        output_dim: usize,
        params: Vec<f64>,
    ) -> Result<Self> {
        let expected = arch.num_params(input_dim, output_dim);
        if params.len() != expected {
            return Err(Error::shape(format!(
                "{arch} model {input_dim}->{output_dim} needs {expected} parameters, got {}",
                params.len()
            )));
        }
        if let Some(&bad) = params.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(bad));
        }
        Ok(DecisionModel {
            arch,
            input_dim,
            output_dim,
            params,
        })
    }

    /// Weights uniform on `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`, biases zero.
    pub fn init(arch: Architecture, input_dim: usize, output_dim: usize, seed: u64) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "model dimensions must be positive, got {input_dim}->{output_dim}"
            )));
        }
        if let Architecture::Mlp { hidden: 0 } = arch {
            return Err(Error::InvalidConfig("mlp needs at least one hidden unit".into()));
        }
        let mut model = DecisionModel::zeros(arch, input_dim, output_dim);
        let mut rng = rng::for_purpose(seed, Purpose::Init);
        for t in model.layout() {
            if !t.is_weight {
                continue;
            }
            let s = 1.0 / libm::sqrt(t.cols as f64);
            for p in &mut model.params[t.range] {
                *p = rng.random_range(-s..=s);
            }
        }
        Ok(model)
    }

    pub fn architecture(&self) -> Architecture {
        self.arch
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn layout(&self) -> Vec<TensorLayout> {
        let (d, out) = (self.input_dim, self.output_dim);
        let mut offset = 0;
        let mut block = |name, rows, cols, is_weight| {
            let range = offset..offset + rows * cols;
            offset = range.end;
            TensorLayout {
                name,
                rows,
                cols,
                range,
                is_weight,
            }
        };
        match self.arch {
            Architecture::Linear => alloc::vec![block("W", out, d, true), block("b", out, 1, false)],
            Architecture::Mlp { hidden } => alloc::vec![
                block("W1", hidden, d, true),
                block("b1", hidden, 1, false),
                block("W2", out, hidden, true),
                block("b2", out, 1, false),
            ],
        }
    }

    /// Model scores for one instance.
    pub fn forward(&self, x: Row<'_>) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.output_dim];
        let mut hidden = Vec::new();
        self.forward_into(x, &mut hidden, &mut out);
        out
    }

    /// Checked variant of [`forward`](Self::forward) for a dense input.
    pub fn forward_dense(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::shape(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.input_dim
            )));
        }
        Ok(self.forward(Row::Dense(x)))
    }

    /// Scores for every instance of `data`.
    pub fn predict_scores(&self, data: &MultiLabelDataset) -> Result<Vec<Vec<f64>>> {
        self.check_input(data)?;
        let mut hidden = Vec::new();
        Ok((0..data.len())
            .map(|i| {
                let mut out = alloc::vec![0.0; self.output_dim];
                self.forward_into(data.row(i), &mut hidden, &mut out);
                out
            })
            .collect())
    }

    /// Writes scores to `out`; `hidden` is scratch space holding the
    /// post-activation hidden layer afterwards.
    fn forward_into(&self, x: Row<'_>, hidden: &mut Vec<f64>, out: &mut [f64]) {
        let d = self.input_dim;
        match self.arch {
            Architecture::Linear => {
                let (w, b) = self.params.split_at(self.output_dim * d);
                for (o, (row, bias)) in out.iter_mut().zip(w.chunks_exact(d).zip(b)) {
                    *o = x.dot(row) + bias;
                }
            }
            Architecture::Mlp { hidden: h } => {
                let (w1, rest) = self.params.split_at(h * d);
                let (b1, rest) = rest.split_at(h);
                let (w2, b2) = rest.split_at(self.output_dim * h);
                hidden.clear();
                hidden.extend(w1.chunks_exact(d).zip(b1).map(|(row, bias)| {
                    let a = x.dot(row) + bias;
                    if a > 0.0 {
                        a
                    } else {
                        0.0
                    }
                }));
                for (o, (row, bias)) in out.iter_mut().zip(w2.chunks_exact(h).zip(b2)) {
                    *o = row.iter().zip(hidden.iter()).map(|(a, b)| a * b).sum::<f64>() + bias;
                }
            }
        }
    }

    fn check_input(&self, data: &MultiLabelDataset) -> Result<()> {
        if data.dim() != self.input_dim {
            return Err(Error::shape(format!(
                "data has {} features, model expects {}",
                data.dim(),
                self.input_dim
            )));
        }
        Ok(())
    }

    fn check_objective(&self, data: &MultiLabelDataset, objective: &Objective) -> Result<()> {
        self.check_input(data)?;
        if objective.output_dim() != self.output_dim || objective.num_labels() != data.num_labels() {
            return Err(Error::shape(format!(
                "model has {} outputs, objective needs {} for {} labels (data has {})",
                self.output_dim,
                objective.output_dim(),
                objective.num_labels(),
                data.num_labels()
            )));
        }
        Ok(())
    }

    /// `0.5 * l2 * ||weights||^2`; biases are not penalized.
    pub fn l2_penalty(&self, l2: f64) -> f64 {
        if l2 == 0.0 {
            return 0.0;
        }
        let sq: f64 = self
            .layout()
            .into_iter()
            .filter(|t| t.is_weight)
            .map(|t| self.params[t.range].iter().map(|w| w * w).sum::<f64>())
            .sum();
        0.5 * l2 * sq
    }

    /// Mean objective over `batch` plus the l2 penalty.
    pub fn batch_loss(
        &self,
        data: &MultiLabelDataset,
        batch: &[usize],
        objective: &Objective,
        l2: f64,
    ) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        self.check_objective(data, objective)?;
        let mut hidden = Vec::new();
        let mut scores = alloc::vec![0.0; self.output_dim];
        let mut total = 0.0;
        for &i in batch {
            self.forward_into(data.row(i), &mut hidden, &mut scores);
            total += objective.loss_value(&scores, data.label(i));
        }
        Ok(total / batch.len() as f64 + self.l2_penalty(l2))
    }

    /// [`batch_loss`](Self::batch_loss) and its exact gradient with respect to
    /// the flat parameter vector.
    pub fn loss_and_gradient(
        &self,
        data: &MultiLabelDataset,
        batch: &[usize],
        objective: &Objective,
        l2: f64,
    ) -> Result<(f64, Vec<f64>)> {
        let mut grad = alloc::vec![0.0; self.params.len()];
        let loss = self.loss_and_gradient_into(data, batch, objective, l2, &mut grad)?;
        Ok((loss, grad))
    }

    /// As [`loss_and_gradient`](Self::loss_and_gradient), writing into `grad`.
    pub fn loss_and_gradient_into(
        &self,
        data: &MultiLabelDataset,
        batch: &[usize],
        objective: &Objective,
        l2: f64,
        grad: &mut [f64],
    ) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        self.check_objective(data, objective)?;
        if grad.len() != self.params.len() {
            return Err(Error::shape("gradient buffer has the wrong length"));
        }
        grad.iter_mut().for_each(|g| *g = 0.0);

        let d = self.input_dim;
        let out_dim = self.output_dim;
        let inv_n = 1.0 / batch.len() as f64;
        let mut hidden = Vec::new();
        let mut scores = alloc::vec![0.0; out_dim];
        let mut score_grad = alloc::vec![0.0; out_dim];
        let mut hidden_grad = Vec::new();
        let mut total = 0.0;

        for &i in batch {
            let x = data.row(i);
            self.forward_into(x, &mut hidden, &mut scores);
            total += objective.loss_and_grad(&scores, data.label(i), &mut score_grad);
            score_grad.iter_mut().for_each(|g| *g *= inv_n);

            match self.arch {
                Architecture::Linear => {
                    let (gw, gb) = grad.split_at_mut(out_dim * d);
                    for ((g_row, gb), &gs) in gw.chunks_exact_mut(d).zip(gb).zip(&score_grad) {
                        x.add_scaled_to(gs, g_row);
                        *gb += gs;
                    }
                }
                Architecture::Mlp { hidden: h } => {
                    let w2 = &self.params[h * d + h..h * d + h + out_dim * h];
                    let (gw1, rest) = grad.split_at_mut(h * d);
                    let (gb1, rest) = rest.split_at_mut(h);
                    let (gw2, gb2) = rest.split_at_mut(out_dim * h);

                    hidden_grad.clear();
                    hidden_grad.resize(h, 0.0);
                    for (o, &gs) in score_grad.iter().enumerate() {
                        let w_row = &w2[o * h..(o + 1) * h];
                        let g_row = &mut gw2[o * h..(o + 1) * h];
                        for u in 0..h {
                            g_row[u] += gs * hidden[u];
                            hidden_grad[u] += gs * w_row[u];
                        }
                        gb2[o] += gs;
                    }
                    for u in 0..h {
                        // Rectifier gate: hidden[u] > 0 exactly when the pre-activation is.
                        if hidden[u] > 0.0 {
                            let g = hidden_grad[u];
                            x.add_scaled_to(g, &mut gw1[u * d..(u + 1) * d]);
                            gb1[u] += g;
                        }
                    }
                }
            }
        }

        let mut loss = total * inv_n;
        if l2 != 0.0 {
            loss += self.l2_penalty(l2);
            for t in self.layout().into_iter().filter(|t| t.is_weight) {
                for (g, w) in grad[t.range.clone()].iter_mut().zip(&self.params[t.range]) {
                    *g += l2 * w;
                }
            }
        }
        Ok(loss)
    }
}
