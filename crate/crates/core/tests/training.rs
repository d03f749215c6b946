use ccmn_core::metrics::PredictionRule;
use ccmn_core::synth::generate_synthetic;
use ccmn_core::trainer::{self, grid_select, SelectionMode, TrainConfig, DEFAULT_LR_GRID};
use ccmn_core::{Architecture, DecisionModel, NoiseSpec, ObjectiveKind, SurrogateLoss};

#[test]
fn separable_data_is_fit_exactly() {
    let s = generate_synthetic(200, 2, 2, 0.05, 11).unwrap();
    let train = s.data.select(&(0..150).collect::<Vec<_>>());
    let val = s.data.select(&(150..200).collect::<Vec<_>>());
    let mut cfg = TrainConfig::new(ObjectiveKind::HammingCorrected, SurrogateLoss::square());
    cfg.learning_rate = 5e-2;
    cfg.batch_size = 10;
    cfg.l2 = 0.0;
    let init = DecisionModel::init(Architecture::Linear, 2, 2, 0).unwrap();
    let out = trainer::train(&train, &val, init, &cfg, &NoiseSpec::zero(2)).unwrap();
    assert_eq!(out.selection, SelectionMode::Metric);
    assert_eq!(out.best_val, 0.0, "{:?}", out.history.last());
    assert!(out.best_epoch <= 200);
    let report = trainer::evaluate_model(&out.model, &val, PredictionRule::Sign).unwrap();
    assert_eq!(report.hamming_loss, 0.0);
}

#[test]
fn bayes_hyperplanes_have_zero_hamming_loss() {
    let s = generate_synthetic(500, 6, 4, 0.02, 3).unwrap();
    let mut params = Vec::new();
    for w in &s.hyperplanes {
        params.extend_from_slice(w);
    }
    params.extend(std::iter::repeat(0.0).take(4));
    let model = DecisionModel::from_params(Architecture::Linear, 6, 4, params).unwrap();
    let report = trainer::evaluate_model(&model, &s.data, PredictionRule::Sign).unwrap();
    assert_eq!(format!("{:.6}", report.hamming_loss), "0.000000");
    assert_eq!(report.ranking_loss, 0.0);
    assert_eq!(report.average_precision, 1.0);
}

#[test]
fn grid_selection_is_deterministic_and_monotone() {
    let s = generate_synthetic(120, 3, 3, 0.0, 5).unwrap();
    let spec = NoiseSpec::uniform(3, 0.1, 0.2).unwrap();
    let noisy = ccmn_core::noise::inject_noise(&s.data, &spec, 9).unwrap();
    let train = noisy.select(&(0..80).collect::<Vec<_>>());
    let val = noisy.select(&(80..120).collect::<Vec<_>>());
    let mut cfg = TrainConfig::new(ObjectiveKind::RankingCorrected, SurrogateLoss::sigmoid());
    cfg.epochs = 20;
    cfg.batch_size = 16;
    cfg.dummy_threshold = true;
    cfg.seed = 4;
    let init = DecisionModel::init(Architecture::mlp(), 3, 4, 4).unwrap();
    let a = grid_select(&train, &val, &init, &cfg, &DEFAULT_LR_GRID, &spec).unwrap();
    let b = grid_select(&train, &val, &init, &cfg, &DEFAULT_LR_GRID, &spec).unwrap();
    assert_eq!(a.runs.len(), 3);
    assert_eq!(a.best.model, b.best.model);
    assert_eq!(a.best_config, b.best_config);
    for run in &a.runs {
        let h = run.history.as_ref().unwrap();
        let min = h.iter().map(|r| r.val_metric).fold(f64::INFINITY, f64::min);
        assert_eq!(run.best_val, Some(min));
    }
    let best = a.runs.iter().filter_map(|r| r.best_val).fold(f64::INFINITY, f64::min);
    assert_eq!(a.best.best_val, best);
}
