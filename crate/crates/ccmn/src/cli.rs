//! Command-line interface. Everything a run depends on comes from flags; the
//! environment is never read.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ccmn_core::metrics::MetricsReport;
use ccmn_core::noise::{self, NoiseMode};
use ccmn_core::presets;
use ccmn_core::split::{split_dataset, SplitSpec};
use ccmn_core::trainer::{self, GridOutcome, SelectionMode, TrainConfig, DEFAULT_BATCH_SIZE};
use ccmn_core::verify::{self, Fault, VerifyOptions};
use ccmn_core::{Architecture, DecisionModel, LossKind, MultiLabelDataset, NoiseSpec, ObjectiveKind, SurrogateLoss};

use crate::checkpoint::Checkpoint;
use crate::dataio;
use crate::error::{self, Error, Result};
use crate::noisefile;
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "ccmn", version, about = "Learning from multi-label data with class-conditional label noise")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corrupt the labels of a dataset and record the noise rates next to it.
    InjectNoise(InjectArgs),
    /// Train a model with learning-rate selection on a validation set.
    Train(TrainFlags),
    /// Score a checkpoint on a (clean) test set.
    Evaluate(EvaluateArgs),
    /// Check the corrected losses against exact oracles.
    Verify(VerifyArgs),
    /// Split, corrupt, train and evaluate over several seeds.
    Experiment(ExperimentArgs),
    /// Write a linearly separable synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InjectMode {
    Ccmn,
    Pml,
    Explicit,
}

#[derive(Debug, Args)]
pub struct InjectArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Corrupted dataset; the rates go to `<output>.noise`.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub mode: InjectMode,
    /// Rates for `--mode explicit`, in the `j rho_pos rho_neg` format.
    #[arg(long)]
    pub rho_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Flags of `ccmn train`, recorded verbatim in the run manifest.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TrainFlags {
    #[arg(long, required_unless_present = "replay")]
    pub train: Option<PathBuf>,
    #[arg(long, required_unless_present = "replay")]
    pub val: Option<PathBuf>,
    /// Noise rates of the training and validation labels.
    #[arg(long, conflicts_with = "rho_zero")]
    pub noise: Option<PathBuf>,
    /// Treat the labels as clean.
    #[arg(long)]
    pub rho_zero: bool,
    /// hamming-corrected, ranking-corrected, hamming-plain, ranking-plain,
    /// upml-hamming or upml-ranking.
    #[arg(long, default_value = "hamming-corrected")]
    pub objective: String,
    /// square, hinge or sigmoid.
    #[arg(long, default_value = "square")]
    pub loss: String,
    /// Square and hinge are evaluated on margins clipped to [-B, B].
    #[arg(long, default_value_t = ccmn_core::surrogate::DEFAULT_CLAMP_BOUND)]
    pub clamp_bound: f64,
    /// linear or mlp.
    #[arg(long, default_value = "linear")]
    pub model: String,
    /// Hidden units of the mlp.
    #[arg(long, default_value_t = ccmn_core::model::DEFAULT_HIDDEN_UNITS)]
    pub hidden: usize,
    /// Learn an extra output used as per-instance threshold (ranking objectives).
    #[arg(long)]
    pub dummy_threshold: bool,
    #[arg(long, default_value_t = trainer::DEFAULT_EPOCHS)]
    pub epochs: usize,
    /// Comma-separated learning rates to select from.
    #[arg(long, default_value = "5e-2,5e-3,5e-4")]
    pub lr_grid: String,
    #[arg(long, default_value_t = trainer::DEFAULT_L2)]
    pub l2: f64,
    /// Minibatch size; defaults to the preset's or 100.
    #[arg(long)]
    pub batch: Option<usize>,
    /// Benchmark name whose batch size to use (e.g. yeast, tmc).
    #[arg(long)]
    pub preset: Option<String>,
    /// auto, metric or objective-loss.
    #[arg(long, default_value = "auto")]
    pub selection: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, required_unless_present = "replay")]
    pub out: Option<PathBuf>,
    /// Epoch log; defaults to `<out>.log`.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Run manifest; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Re-run the training recorded in a manifest. Only --out, --log and
    /// --manifest may be given alongside.
    #[arg(long)]
    #[serde(skip)]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    Sign,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = verify::DEFAULT_MAX_Q)]
    pub max_q: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = verify::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentNoise {
    Ccmn,
    Pml,
    None,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Clean dataset to split 50/30/20 into train, test and validation.
    #[arg(long)]
    pub data: PathBuf,
    /// Rates per label drawn from {0.1,...,0.5} (ccmn) or rho_pos = 0 and
    /// rho_neg from {0.1,...,0.6} (pml).
    #[arg(long, value_enum, default_value = "ccmn")]
    pub mode: ExperimentNoise,
    /// Repeats use seeds 0..seeds.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value = "hamming-corrected")]
    pub objective: String,
    #[arg(long, default_value = "square")]
    pub loss: String,
    #[arg(long, default_value_t = ccmn_core::surrogate::DEFAULT_CLAMP_BOUND)]
    pub clamp_bound: f64,
    #[arg(long, default_value = "linear")]
    pub model: String,
    #[arg(long, default_value_t = ccmn_core::model::DEFAULT_HIDDEN_UNITS)]
    pub hidden: usize,
    #[arg(long)]
    pub dummy_threshold: bool,
    #[arg(long, default_value_t = trainer::DEFAULT_EPOCHS)]
    pub epochs: usize,
    #[arg(long, default_value = "5e-2,5e-3,5e-4")]
    pub lr_grid: String,
    #[arg(long, default_value_t = trainer::DEFAULT_L2)]
    pub l2: f64,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, default_value = "auto")]
    pub selection: String,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub q: usize,
    /// Instances closer than this to a labeling hyperplane are redrawn.
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::InjectNoise(a) => inject_noise(&a).map(|()| ExitCode::SUCCESS),
        Command::Train(a) => train(a).map(|()| ExitCode::SUCCESS),
        Command::Evaluate(a) => evaluate(&a).map(|()| ExitCode::SUCCESS),
        Command::Verify(a) => verify_cmd(&a),
        Command::Experiment(a) => experiment(&a).map(|()| ExitCode::SUCCESS),
        Command::Synth(a) => synth(&a).map(|()| ExitCode::SUCCESS),
    }
}

fn usage(e: impl std::fmt::Display) -> Error {
    Error::Usage(e.to_string())
}

fn inject_noise(a: &InjectArgs) -> Result<()> {
    let data = dataio::parse_multilabel_svm(&a.input)?;
    let q = data.num_labels();
    let spec = match (a.mode, &a.rho_file) {
        (InjectMode::Explicit, Some(path)) => noisefile::read_noise_file(path)?,
        (InjectMode::Explicit, None) => return Err(usage("--mode explicit needs --rho-file")),
        (_, Some(_)) => return Err(usage("--rho-file is only used with --mode explicit")),
        (InjectMode::Ccmn, None) => noise::sample_noise_rates(NoiseMode::Ccmn, q, a.seed),
        (InjectMode::Pml, None) => noise::sample_noise_rates(NoiseMode::Pml, q, a.seed),
    };
    let noisy = noise::inject_noise(&data, &spec, a.seed)?;
    dataio::write_multilabel_svm(&noisy, &a.output)?;
    noisefile::write_noise_file(&spec, &noisefile::sidecar_path(&a.output))?;
    Ok(())
}

/// Training settings after parsing and validating the string flags.
#[derive(Debug, Clone)]
struct Settings {
    objective: ObjectiveKind,
    loss: SurrogateLoss,
    arch: Architecture,
    dummy_threshold: bool,
    epochs: usize,
    lr_grid: Vec<f64>,
    l2: f64,
    batch_size: usize,
    selection: SelectionMode,
}

#[allow(clippy::too_many_arguments)]
fn resolve_settings(
    objective: &str,
    loss: &str,
    clamp_bound: f64,
    model: &str,
    hidden: usize,
    dummy_threshold: bool,
    epochs: usize,
    lr_grid: &str,
    l2: f64,
    batch: Option<usize>,
    preset: Option<&str>,
    selection: &str,
) -> Result<Settings> {
    let objective: ObjectiveKind = objective.parse().map_err(usage)?;
    let kind: LossKind = loss.parse().map_err(usage)?;
    let loss = SurrogateLoss::new(kind, clamp_bound).map_err(usage)?;
    let arch = match model {
        "linear" => Architecture::Linear,
        "mlp" if hidden > 0 => Architecture::Mlp { hidden },
        "mlp" => return Err(usage("--hidden must be positive")),
        other => return Err(usage(format!("unknown model '{other}', expected linear or mlp"))),
    };
    if dummy_threshold && !objective.is_ranking() {
        return Err(usage(format!("--dummy-threshold needs a ranking objective, not {objective}")));
    }
    let lr_grid = lr_grid
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite() && *v > 0.0))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| usage(format!("--lr-grid '{lr_grid}' is not a list of positive numbers")))?;
    let preset_batch = match preset {
        Some(name) => Some(
            presets::find(name)
                .ok_or_else(|| usage(format!("unknown preset '{name}'")))?
                .batch_size,
        ),
        None => None,
    };
    let batch_size = batch.or(preset_batch).unwrap_or(DEFAULT_BATCH_SIZE);
    let selection: SelectionMode = selection.parse().map_err(usage)?;
    let settings = Settings {
        objective,
        loss,
        arch,
        dummy_threshold,
        epochs,
        lr_grid,
        l2,
        batch_size,
        selection,
    };
    settings.config(0).validate().map_err(usage)?;
    Ok(settings)
}

impl Settings {
    fn config(&self, seed: u64) -> TrainConfig {
        let mut cfg = TrainConfig::new(self.objective, self.loss);
        cfg.epochs = self.epochs;
        cfg.learning_rate = self.lr_grid[0];
        cfg.l2 = self.l2;
        cfg.batch_size = self.batch_size;
        cfg.dummy_threshold = self.dummy_threshold;
        cfg.seed = seed;
        cfg.selection = self.selection;
        cfg
    }

    fn fit(
        &self,
        train: &MultiLabelDataset,
        val: &MultiLabelDataset,
        spec: &NoiseSpec,
        seed: u64,
    ) -> Result<(TrainConfig, GridOutcome)> {
        if train.num_labels() != val.num_labels() || train.dim() != val.dim() {
            return Err(Error::Core(ccmn_core::Error::Shape(format!(
                "training set is {}x{} (features x labels), validation set {}x{}",
                train.dim(),
                train.num_labels(),
                val.dim(),
                val.num_labels()
            ))));
        }
        if self.objective.is_ranking() && train.num_labels() < 2 {
            return Err(usage("ranking objectives need at least two labels"));
        }
        if matches!(self.objective, ObjectiveKind::UpmlHamming | ObjectiveKind::UpmlRanking) && !spec.is_partial() {
            return Err(usage(format!("{} needs noise rates with rho_pos = 0", self.objective)));
        }
        let cfg = self.config(seed);
        let init = DecisionModel::init(self.arch, train.dim(), cfg.output_dim(train.num_labels()), seed)?;
        let grid = trainer::grid_select(train, val, &init, &cfg, &self.lr_grid, spec)?;
        Ok((cfg, grid))
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn read_manifest(path: &Path) -> Result<TrainFlags> {
    let text = error::read_to_string(path)?;
    let json: Value = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.display().to_string(),
        source,
    })?;
    if json.get("command").and_then(Value::as_str) != Some("train") {
        return Err(usage(format!("{} is not a train manifest", path.display())));
    }
    serde_json::from_value(json["flags"].clone()).map_err(|source| Error::Json {
        path: path.display().to_string(),
        source,
    })
}

fn train(flags: TrainFlags) -> Result<()> {
    let flags = match &flags.replay {
        None => flags,
        Some(path) => {
            let mut recorded = read_manifest(path)?;
            if flags.out.is_some() {
                recorded.out = flags.out.clone();
                recorded.log = flags.log.clone();
                recorded.manifest = flags.manifest.clone();
            } else if flags.log.is_some() || flags.manifest.is_some() {
                return Err(usage("--log and --manifest with --replay also need --out"));
            }
            recorded
        }
    };
    let (Some(train_path), Some(val_path), Some(out)) = (&flags.train, &flags.val, &flags.out) else {
        return Err(usage("--train, --val and --out are required"));
    };
    let settings = resolve_settings(
        &flags.objective,
        &flags.loss,
        flags.clamp_bound,
        &flags.model,
        flags.hidden,
        flags.dummy_threshold,
        flags.epochs,
        &flags.lr_grid,
        flags.l2,
        flags.batch,
        flags.preset.as_deref(),
        &flags.selection,
    )?;
    let train_data = dataio::parse_multilabel_svm(train_path)?;
    let val_data = dataio::parse_multilabel_svm(val_path)?;
    let q = train_data.num_labels();
    let spec = match (&flags.noise, flags.rho_zero) {
        (Some(path), false) => noisefile::read_noise_file(path)?,
        (None, true) => NoiseSpec::zero(q),
        (Some(_), true) => return Err(usage("--noise and --rho-zero exclude each other")),
        (None, false) => return Err(usage("give the noise rates with --noise, or --rho-zero for clean labels")),
    };
    spec.check_labels(q)?;

    let (cfg, grid) = settings.fit(&train_data, &val_data, &spec, flags.seed)?;
    let best = &grid.best;
    let checkpoint = Checkpoint {
        model: best.model.clone(),
        num_labels: q,
        objective: settings.objective,
        loss: settings.loss,
        prediction: cfg.prediction_rule(),
        noise: spec.clone(),
        learning_rate: grid.best_config.learning_rate,
        best_epoch: best.best_epoch,
    };
    checkpoint.write(out)?;

    let log_path = flags.log.clone().unwrap_or_else(|| with_suffix(out, ".log"));
    error::write(&log_path, epoch_log(&grid))?;

    let manifest_path = flags.manifest.clone().unwrap_or_else(|| with_suffix(out, ".manifest.json"));
    let manifest = json!({
        "command": "train",
        "version": env!("CARGO_PKG_VERSION"),
        "flags": flags,
        "resolved": {
            "objective": settings.objective.name(),
            "loss": settings.loss.kind().name(),
            "clamp_bound": settings.loss.clamp_bound(),
            "model": settings.arch.name(),
            "hidden": match settings.arch { Architecture::Mlp { hidden } => json!(hidden), Architecture::Linear => Value::Null },
            "dummy_threshold": settings.dummy_threshold,
            "prediction": cfg.prediction_rule().name(),
            "epochs": settings.epochs,
            "lr_grid": settings.lr_grid,
            "l2": settings.l2,
            "batch_size": settings.batch_size,
            "selection": best.selection.name(),
            "seed": flags.seed,
            "rng": ccmn_core::rng::ALGORITHM,
            "adam": { "beta1": cfg.adam.beta1, "beta2": cfg.adam.beta2, "eps": cfg.adam.eps },
            "shape": { "train_instances": train_data.len(), "val_instances": val_data.len(), "features": train_data.dim(), "labels": q },
            "noise": { "rho_pos": spec.rho_pos_all(), "rho_neg": spec.rho_neg_all() },
        },
        "result": {
            "learning_rate": grid.best_config.learning_rate,
            "best_epoch": best.best_epoch,
            "best_val": best.best_val,
        },
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    error::write(&manifest_path, text)?;

    println!(
        "learning_rate {:e} best_epoch {} best_val {:.6} selection {}",
        grid.best_config.learning_rate,
        best.best_epoch,
        best.best_val,
        best.selection
    );
    Ok(())
}

/// Tab-separated `lr epoch train_loss val_metric`, one line per epoch of every
/// grid point.
fn epoch_log(grid: &GridOutcome) -> String {
    let mut out = String::from("lr\tepoch\ttrain_loss\tval_metric\n");
    for run in &grid.runs {
        match &run.history {
            Some(history) => {
                for r in history {
                    writeln!(out, "{:e}\t{}\t{:e}\t{:e}", run.learning_rate, r.epoch, r.train_loss, r.val_metric).unwrap();
                }
            }
            None => writeln!(out, "# lr {:e} diverged", run.learning_rate).unwrap(),
        }
    }
    out
}

fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let checkpoint = Checkpoint::read(&a.model)?;
    let data = dataio::parse_multilabel_svm(&a.test)?;
    let metrics = evaluate_checkpoint(&checkpoint, &data)?;
    if let Some(path) = &a.report {
        let mut text = serde_json::to_string_pretty(&report::evaluation_report(&checkpoint, &data, &metrics))
            .expect("report serializes");
        text.push('\n');
        error::write(path, text)?;
    }
    print!("{}", report::metric_lines(&metrics));
    Ok(())
}

pub fn evaluate_checkpoint(checkpoint: &Checkpoint, data: &MultiLabelDataset) -> Result<MetricsReport> {
    if data.dim() != checkpoint.model.input_dim() || data.num_labels() != checkpoint.num_labels {
        return Err(Error::Core(ccmn_core::Error::Shape(format!(
            "checkpoint expects {} features and {} labels, dataset has {} and {}",
            checkpoint.model.input_dim(),
            checkpoint.num_labels,
            data.dim(),
            data.num_labels()
        ))));
    }
    Ok(trainer::evaluate_model(&checkpoint.model, data, checkpoint.prediction)?)
}

fn verify_cmd(a: &VerifyArgs) -> Result<ExitCode> {
    let options = VerifyOptions {
        trials: a.trials,
        max_q: a.max_q,
        seed: a.seed,
        tolerance: a.tolerance,
        fault: a.inject_fault.map(|FaultArg::Sign| Fault::IndependentSign),
    };
    if options.max_q == 0 {
        return Err(usage("--max-q must be positive"));
    }
    let report = verify::run(&options)?;
    println!("{report}");
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

type SeedRun = (u64, NoiseSpec, TrainConfig, GridOutcome, MetricsReport);

fn experiment(a: &ExperimentArgs) -> Result<()> {
    let settings = resolve_settings(
        &a.objective,
        &a.loss,
        a.clamp_bound,
        &a.model,
        a.hidden,
        a.dummy_threshold,
        a.epochs,
        &a.lr_grid,
        a.l2,
        a.batch,
        a.preset.as_deref(),
        &a.selection,
    )?;
    if a.seeds == 0 {
        return Err(usage("--seeds must be positive"));
    }
    let data = dataio::parse_multilabel_svm(&a.data)?;
    let q = data.num_labels();

    let results: Vec<Result<SeedRun>> = thread::scope(|s| {
        let handles: Vec<_> = (0..a.seeds)
            .map(|seed| {
                let (settings, data) = (&settings, &data);
                s.spawn(move || {
                    let spec = match a.mode {
                        ExperimentNoise::Ccmn => noise::sample_noise_rates(NoiseMode::Ccmn, q, seed),
                        ExperimentNoise::Pml => noise::sample_noise_rates(NoiseMode::Pml, q, seed),
                        ExperimentNoise::None => NoiseSpec::zero(q),
                    };
                    let split = split_dataset(data, &SplitSpec::standard(seed))?;
                    let noisy = noise::inject_noise(data, &spec, seed)?;
                    let train = noisy.select(&split.indices.train);
                    let val = noisy.select(&split.indices.validation);
                    let (cfg, grid) = settings.fit(&train, &val, &spec, seed)?;
                    let metrics = trainer::evaluate_model(&grid.best.model, &split.test, cfg.prediction_rule())?;
                    Ok((seed, spec, cfg, grid, metrics))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("experiment worker panicked")).collect()
    });

    let mut runs = Vec::new();
    let mut columns: [Vec<f64>; 3] = Default::default();
    for r in results {
        let (seed, spec, _cfg, grid, metrics) = r?;
        for (c, v) in columns.iter_mut().zip(report::metric_values(&metrics)) {
            c.push(v);
        }
        runs.push(json!({
            "seed": seed,
            "noise": { "rho_pos": spec.rho_pos_all(), "rho_neg": spec.rho_neg_all() },
            "learning_rate": grid.best_config.learning_rate,
            "best_epoch": grid.best.best_epoch,
            "hamming_loss": report::fixed6(metrics.hamming_loss),
            "ranking_loss": report::fixed6(metrics.ranking_loss),
            "average_precision": report::fixed6(metrics.average_precision),
        }));
    }
    let mut summary = serde_json::Map::new();
    let mut lines = String::new();
    for (name, values) in report::METRIC_NAMES.iter().zip(&columns) {
        let (mean, std) = report::mean_std(values);
        summary.insert(name.to_string(), json!({ "mean": report::fixed6(mean), "std": report::fixed6(std) }));
        writeln!(lines, "{name} {mean:.6} ± {std:.6}").unwrap();
    }
    if let Some(path) = &a.report {
        let doc = json!({
            "dataset": { "instances": data.len(), "features": data.dim(), "labels": q },
            "objective": settings.objective.name(),
            "loss": settings.loss.kind().name(),
            "model": settings.arch.name(),
            "mode": format!("{:?}", a.mode).to_lowercase(),
            "runs": runs,
            "summary": summary,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        error::write(path, text)?;
    }
    print!("{lines}");
    Ok(())
}

fn synth(a: &SynthArgs) -> Result<()> {
    let s = dataio::generate_synthetic(a.n, a.d, a.q, a.margin, a.seed)?;
    let text = dataio::to_multilabel_svm_string(&s.data);
    let (header, body) = text.split_once('\n').expect("header line");
    let mut out = format!("{header}\n");
    writeln!(out, "# synthetic n={} d={} q={} margin={} seed={}", a.n, a.d, a.q, a.margin, a.seed).unwrap();
    for (j, w) in s.hyperplanes.iter().enumerate() {
        let w: Vec<String> = w.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "# hyperplane {} {}", j + 1, w.join(" ")).unwrap();
    }
    out.push_str(body);
    error::write(&a.output, out)
}
