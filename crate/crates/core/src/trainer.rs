//! Minibatch Adam training with best-epoch selection on a validation set.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::adam::{Adam, AdamConfig};
use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::labels::NoiseSpec;
use crate::metrics::{self, MetricsReport, PredictionRule, RankingNormalization};
use crate::model::DecisionModel;
use crate::objective::{Objective, ObjectiveKind};
use crate::rng::{self, Purpose};
use crate::surrogate::SurrogateLoss;

pub const DEFAULT_EPOCHS: usize = 200;
pub const DEFAULT_L2: f64 = 1e-4;
pub const DEFAULT_LR_GRID: [f64; 3] = [5e-2, 5e-3, 5e-4];
pub const DEFAULT_BATCH_SIZE: usize = 100;

/// What the validation set is scored with after every epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    /// [`Metric`](Self::Metric) when the noise spec is all zero, otherwise
    /// [`ObjectiveLoss`](Self::ObjectiveLoss).
    #[default]
    Auto,
    /// Hamming loss for label-wise objectives, ranking loss for pairwise ones,
    /// computed against the validation labels as given.
    Metric,
    /// Mean training objective on the validation set. With noisy validation
    /// labels the corrected objectives make this an unbiased estimate of the
    /// clean surrogate risk.
    ObjectiveLoss,
}

impl SelectionMode {
    pub fn name(self) -> &'static str {
        match self {
            SelectionMode::Auto => "auto",
            SelectionMode::Metric => "metric",
            SelectionMode::ObjectiveLoss => "objective-loss",
        }
    }

    pub fn resolve(self, spec: &NoiseSpec) -> SelectionMode {
        match self {
            SelectionMode::Auto if spec.is_zero() => SelectionMode::Metric,
            SelectionMode::Auto => SelectionMode::ObjectiveLoss,
            other => other,
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SelectionMode::Auto),
            "metric" => Ok(SelectionMode::Metric),
            "objective-loss" => Ok(SelectionMode::ObjectiveLoss),
            other => Err(Error::InvalidConfig(format!("unknown selection mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub batch_size: usize,
    pub objective: ObjectiveKind,
    pub loss: SurrogateLoss,
    /// Train a `(q+1)`-th output as per-instance threshold.
    pub dummy_threshold: bool,
    pub seed: u64,
    pub adam: AdamConfig,
    pub selection: SelectionMode,
}

impl TrainConfig {
    pub fn new(objective: ObjectiveKind, loss: SurrogateLoss) -> Self {
        TrainConfig {
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LR_GRID[0],
            l2: DEFAULT_L2,
            batch_size: DEFAULT_BATCH_SIZE,
            objective,
            loss,
            dummy_threshold: false,
            seed: 0,
            adam: AdamConfig::default(),
            selection: SelectionMode::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch size must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::InvalidConfig(format!("l2 must be non-negative, got {}", self.l2)));
        }
        if self.dummy_threshold && !self.objective.is_ranking() {
            return Err(Error::InvalidConfig(format!(
                "the dummy threshold only applies to ranking objectives, not {}",
                self.objective
            )));
        }
        Ok(())
    }

    pub fn prediction_rule(&self) -> PredictionRule {
        if self.dummy_threshold {
            PredictionRule::DummyThreshold
        } else {
            PredictionRule::Sign
        }
    }

    /// Number of model outputs for `q` labels.
    pub fn output_dim(&self, q: usize) -> usize {
        q + usize::from(self.dummy_threshold)
    }

    pub fn objective_for(&self, spec: &NoiseSpec) -> Result<Objective> {
        Objective::new(self.objective, self.loss, spec, self.dummy_threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_metric: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters from the epoch with the lowest validation value.
    pub model: DecisionModel,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub best_val: f64,
    pub selection: SelectionMode,
}

/// Validation score used for model selection; lower is better.
pub fn selection_value(
    model: &DecisionModel,
    validation: &MultiLabelDataset,
    objective: &Objective,
    mode: SelectionMode,
) -> Result<f64> {
    match mode {
        SelectionMode::ObjectiveLoss | SelectionMode::Auto => {
            let all: Vec<usize> = (0..validation.len()).collect();
            model.batch_loss(validation, &all, objective, 0.0)
        }
        SelectionMode::Metric => {
            let scores = model.predict_scores(validation)?;
            let q = validation.num_labels();
            if objective.kind().is_ranking() {
                metrics::ranking_loss(&scores, validation.labels(), RankingNormalization::PerPair)
            } else {
                let preds: Vec<_> = scores.iter().map(|f| metrics::predict_sign(&f[..q])).collect();
                metrics::hamming_loss(&preds, validation.labels())
            }
        }
    }
}

/// Trains `init` on `train`, scoring `validation` after every epoch and
/// keeping the best parameters. Each epoch visits the training set in a fresh
/// permutation drawn from `config.seed`.
pub fn train(
    train: &MultiLabelDataset,
    validation: &MultiLabelDataset,
    init: DecisionModel,
    config: &TrainConfig,
    spec: &NoiseSpec,
) -> Result<TrainOutcome> {
    config.validate()?;
    spec.check_labels(train.num_labels())?;
    spec.check_labels(validation.num_labels())?;
    if train.is_empty() || validation.is_empty() {
        return Err(Error::InvalidConfig("training and validation sets must be nonempty".into()));
    }
    let objective = config.objective_for(spec)?;
    if init.output_dim() != objective.output_dim() {
        return Err(Error::shape(format!(
            "model has {} outputs, objective needs {}",
            init.output_dim(),
            objective.output_dim()
        )));
    }
    let selection = config.selection.resolve(spec);

    let mut model = init;
    let mut adam = Adam::new(config.adam, model.params().len());
    let mut grad = alloc::vec![0.0; model.params().len()];
    let mut history = Vec::with_capacity(config.epochs);
    let mut best: Option<(DecisionModel, usize, f64)> = None;
    let n = train.len();

    for epoch in 1..=config.epochs {
        let order = rng::permutation(&mut rng::substream(config.seed, Purpose::Shuffle, epoch as u64), n);
        let mut weighted_loss = 0.0;
        for (step, batch) in order.chunks(config.batch_size).enumerate() {
            let loss = model.loss_and_gradient_into(train, batch, &objective, config.l2, &mut grad)?;
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::DivergedTraining { epoch, step, loss });
            }
            adam.step(model.params_mut(), &grad, config.learning_rate);
            weighted_loss += loss * batch.len() as f64;
        }
        let train_loss = weighted_loss / n as f64;
        let val_metric = selection_value(&model, validation, &objective, selection)?;
        if !val_metric.is_finite() {
            return Err(Error::DivergedTraining {
                epoch,
                step: order.len().div_ceil(config.batch_size),
                loss: val_metric,
            });
        }
        history.push(EpochRecord {
            epoch,
            train_loss,
            val_metric,
        });
        if best.as_ref().map_or(true, |(_, _, v)| val_metric < *v) {
            best = Some((model.clone(), epoch, val_metric));
        }
    }

    let (model, best_epoch, best_val) = best.expect("at least one epoch ran");
    Ok(TrainOutcome {
        model,
        history,
        best_epoch,
        best_val,
        selection,
    })
}

#[derive(Debug, Clone)]
pub struct GridRun {
    pub learning_rate: f64,
    /// `None` when this learning rate diverged.
    pub history: Option<Vec<EpochRecord>>,
    pub best_val: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub best_config: TrainConfig,
    pub best: TrainOutcome,
    pub runs: Vec<GridRun>,
}

/// Trains once per learning rate from the same initial model and keeps the
/// run with the best validation value; ties go to the smaller rate. Diverged
/// rates are skipped unless every rate diverges.
pub fn grid_select(
    train_set: &MultiLabelDataset,
    validation: &MultiLabelDataset,
    init: &DecisionModel,
    config: &TrainConfig,
    learning_rates: &[f64],
    spec: &NoiseSpec,
) -> Result<GridOutcome> {
    if learning_rates.is_empty() {
        return Err(Error::InvalidConfig("learning-rate grid is empty".into()));
    }
    let mut runs = Vec::with_capacity(learning_rates.len());
    let mut best: Option<(TrainConfig, TrainOutcome)> = None;
    let mut last_divergence = None;
    for &lr in learning_rates {
        let cfg = TrainConfig {
            learning_rate: lr,
            ..config.clone()
        };
        match train(train_set, validation, init.clone(), &cfg, spec) {
            Ok(outcome) => {
                runs.push(GridRun {
                    learning_rate: lr,
                    history: Some(outcome.history.clone()),
                    best_val: Some(outcome.best_val),
                });
                let better = match &best {
                    None => true,
                    Some((bc, bo)) => {
                        outcome.best_val < bo.best_val
                            || (outcome.best_val == bo.best_val && lr < bc.learning_rate)
                    }
                };
                if better {
                    best = Some((cfg, outcome));
                }
            }
            Err(e @ Error::DivergedTraining { .. }) => {
                log::warn!("learning rate {lr} skipped: {e}");
                runs.push(GridRun {
                    learning_rate: lr,
                    history: None,
                    best_val: None,
                });
                last_divergence = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    match best {
        Some((best_config, best)) => Ok(GridOutcome {
            best_config,
            best,
            runs,
        }),
        None => Err(last_divergence.expect("every run diverged")),
    }
}

/// Hamming loss, ranking loss and average precision of `model` on `data`.
pub fn evaluate_model(
    model: &DecisionModel,
    data: &MultiLabelDataset,
    rule: PredictionRule,
) -> Result<MetricsReport> {
    let scores = model.predict_scores(data)?;
    metrics::evaluate(&scores, data.labels(), rule)
}
