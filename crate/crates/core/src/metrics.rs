//! Multi-label evaluation: prediction rules, hamming loss, ranking loss and
//! average precision.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::labels::LabelVector;

/// `+1` where the score is `>= 0`.
pub fn predict_sign(f: &[f64]) -> LabelVector {
    LabelVector::from_bools(f.iter().map(|&v| v >= 0.0))
}

/// `+1` where the score is `>= f0`, the dummy label's score.
pub fn predict_dummy_threshold(f: &[f64], f0: f64) -> LabelVector {
    LabelVector::from_bools(f.iter().map(|&v| v >= f0))
}

/// How a model's outputs turn into label predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionRule {
    Sign,
    /// The last output is the dummy label's score and serves as threshold.
    DummyThreshold,
}

impl PredictionRule {
    pub fn name(self) -> &'static str {
        match self {
            PredictionRule::Sign => "sign",
            PredictionRule::DummyThreshold => "dummy-threshold",
        }
    }

    pub fn predict(self, scores: &[f64], q: usize) -> LabelVector {
        match self {
            PredictionRule::Sign => predict_sign(&scores[..q]),
            PredictionRule::DummyThreshold => predict_dummy_threshold(&scores[..q], scores[q]),
        }
    }
}

impl core::fmt::Display for PredictionRule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for PredictionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sign" => Ok(PredictionRule::Sign),
            "dummy-threshold" => Ok(PredictionRule::DummyThreshold),
            other => Err(Error::InvalidConfig(format!("unknown prediction rule '{other}'"))),
        }
    }
}

/// Mean over instances of the fraction of mismatched labels.
pub fn hamming_loss(pred: &[LabelVector], truth: &[LabelVector]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::shape(format!(
            "{} predictions for {} instances",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (i, (p, t)) in pred.iter().zip(truth).enumerate() {
        if p.len() != t.len() || t.is_empty() {
            return Err(Error::shape(format!(
                "instance {i}: {} predicted labels, {} true labels",
                p.len(),
                t.len()
            )));
        }
        let wrong = p.iter().zip(t.iter()).filter(|(a, b)| a != b).count();
        total += wrong as f64 / t.len() as f64;
    }
    Ok(total / pred.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankingNormalization {
    /// Divide each instance's count by `|relevant| * |irrelevant|`.
    #[default]
    PerPair,
    /// Raw count of reversed pairs (ties count one half).
    Raw,
}

/// Ranking loss by scanning all label pairs.
///
/// A pair of one relevant and one irrelevant label costs 1 when the
/// irrelevant label scores higher and 1/2 on a tie. Instances with no such
/// pair are skipped; the result is the mean over the remaining instances.
pub fn ranking_loss<S: AsRef<[f64]>>(
    scores: &[S],
    truth: &[LabelVector],
    norm: RankingNormalization,
) -> Result<f64> {
    ranking_loss_with(scores, truth, norm, reversed_half_pairs_scan)
}

/// Same value as [`ranking_loss`], computed by sorting the scores once per
/// instance.
pub fn ranking_loss_by_sort<S: AsRef<[f64]>>(
    scores: &[S],
    truth: &[LabelVector],
    norm: RankingNormalization,
) -> Result<f64> {
    ranking_loss_with(scores, truth, norm, reversed_half_pairs_sorted)
}

fn ranking_loss_with<S: AsRef<[f64]>>(
    scores: &[S],
    truth: &[LabelVector],
    norm: RankingNormalization,
    count: fn(&[f64], &LabelVector) -> u64,
) -> Result<f64> {
    check_scores(scores, truth)?;
    let mut total = 0.0;
    let mut counted = 0usize;
    for (f, y) in scores.iter().zip(truth) {
        let f = &f.as_ref()[..y.len()];
        let rel = y.num_relevant();
        let pairs = rel * (y.len() - rel);
        if pairs == 0 {
            continue;
        }
        let half_units = count(f, y);
        total += match norm {
            RankingNormalization::PerPair => half_units as f64 / (2 * pairs) as f64,
            RankingNormalization::Raw => half_units as f64 / 2.0,
        };
        counted += 1;
    }
    Ok(if counted == 0 { 0.0 } else { total / counted as f64 })
}

/// Twice the number of reversed pairs (ties count 1, reversals 2).
fn reversed_half_pairs_scan(f: &[f64], y: &LabelVector) -> u64 {
    let mut count = 0;
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            let (rel, irr) = match (y.is_relevant(j), y.is_relevant(k)) {
                (true, false) => (f[j], f[k]),
                (false, true) => (f[k], f[j]),
                _ => continue,
            };
            if irr > rel {
                count += 2;
            } else if irr == rel {
                count += 1;
            }
        }
    }
    count
}

fn reversed_half_pairs_sorted(f: &[f64], y: &LabelVector) -> u64 {
    let mut irrelevant: Vec<f64> = (0..f.len()).filter(|&j| !y.is_relevant(j)).map(|j| f[j]).collect();
    irrelevant.sort_by(f64::total_cmp);
    let n = irrelevant.len();
    let mut count = 0u64;
    for j in y.relevant() {
        let s = f[j];
        // Irrelevant scores strictly above s, and equal to s.
        let below_or_equal = irrelevant.partition_point(|&v| v <= s);
        let below = irrelevant.partition_point(|&v| v < s);
        count += 2 * (n - below_or_equal) as u64 + (below_or_equal - below) as u64;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragePrecision {
    pub value: f64,
    /// Instances without any relevant label, left out of the mean.
    pub skipped: usize,
}

/// Mean over instances of the average, over relevant labels, of the precision
/// at that label's rank. Labels are ranked by descending score with ties
/// broken by ascending label index.
pub fn average_precision<S: AsRef<[f64]>>(scores: &[S], truth: &[LabelVector]) -> Result<AveragePrecision> {
    check_scores(scores, truth)?;
    let mut total = 0.0;
    let mut counted = 0usize;
    let mut skipped = 0usize;
    let mut order: Vec<usize> = Vec::new();
    for (f, y) in scores.iter().zip(truth) {
        let f = &f.as_ref()[..y.len()];
        let rel = y.num_relevant();
        if rel == 0 {
            skipped += 1;
            continue;
        }
        order.clear();
        order.extend(0..f.len());
        order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
        let mut hits = 0usize;
        let mut sum = 0.0;
        for (pos, &j) in order.iter().enumerate() {
            if y.is_relevant(j) {
                hits += 1;
                sum += hits as f64 / (pos + 1) as f64;
            }
        }
        total += sum / rel as f64;
        counted += 1;
    }
    Ok(AveragePrecision {
        value: if counted == 0 { 0.0 } else { total / counted as f64 },
        skipped,
    })
}

fn check_scores<S: AsRef<[f64]>>(scores: &[S], truth: &[LabelVector]) -> Result<()> {
    if scores.len() != truth.len() {
        return Err(Error::shape(format!(
            "{} score rows for {} instances",
            scores.len(),
            truth.len()
        )));
    }
    for (i, (f, y)) in scores.iter().zip(truth).enumerate() {
        if f.as_ref().len() < y.len() {
            return Err(Error::shape(format!(
                "instance {i}: {} scores for {} labels",
                f.as_ref().len(),
                y.len()
            )));
        }
    }
    Ok(())
}

/// The three evaluation numbers for one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub hamming_loss: f64,
    pub ranking_loss: f64,
    pub average_precision: f64,
    pub ap_skipped: usize,
}

/// Evaluates scores (with an optional trailing dummy score) against labels.
pub fn evaluate<S: AsRef<[f64]>>(
    scores: &[S],
    truth: &[LabelVector],
    rule: PredictionRule,
) -> Result<MetricsReport> {
    check_scores(scores, truth)?;
    let mut preds = Vec::with_capacity(scores.len());
    for (f, y) in scores.iter().zip(truth) {
        let f = f.as_ref();
        if rule == PredictionRule::DummyThreshold && f.len() <= y.len() {
            return Err(Error::shape("dummy-threshold prediction needs q + 1 scores"));
        }
        preds.push(rule.predict(f, y.len()));
    }
    let ap = average_precision(scores, truth)?;
    Ok(MetricsReport {
        hamming_loss: hamming_loss(&preds, truth)?,
        ranking_loss: ranking_loss(scores, truth, RankingNormalization::PerPair)?,
        average_precision: ap.value,
        ap_skipped: ap.skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use alloc::vec;
    use rand::Rng;

    fn lv(v: &[i8]) -> LabelVector {
        LabelVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sign_prediction() {
        assert_eq!(predict_sign(&[0.3, -0.1]), lv(&[1, -1]));
        assert_eq!(predict_sign(&[0.0]), lv(&[1]));
        let f = [0.7, -0.2, 0.0, 3.0];
        let scaled: Vec<f64> = f.iter().map(|v| v * 2.5).collect();
        assert_eq!(predict_sign(&f), predict_sign(&scaled));
    }

    #[test]
    fn threshold_prediction() {
        assert_eq!(predict_dummy_threshold(&[1.0, 2.0, 3.0], 2.5), lv(&[-1, -1, 1]));
        let f = [0.4, -0.3, 0.0];
        assert_eq!(predict_dummy_threshold(&f, 0.0), predict_sign(&f));
        let shifted: Vec<f64> = f.iter().map(|v| v + 7.0).collect();
        assert_eq!(predict_dummy_threshold(&f, 0.1), predict_dummy_threshold(&shifted, 7.1));
    }

    #[test]
    fn hamming_examples() {
        let t = vec![lv(&[1, -1, 1, -1]), lv(&[-1, -1, 1, 1])];
        assert_eq!(hamming_loss(&t, &t).unwrap(), 0.0);
        let neg: Vec<_> = t.iter().map(LabelVector::negated).collect();
        assert_eq!(hamming_loss(&neg, &t).unwrap(), 1.0);
        let one = vec![lv(&[1, 1, 1, -1])];
        assert_eq!(hamming_loss(&one, &[lv(&[1, -1, 1, -1])]).unwrap(), 0.25);
        assert!(hamming_loss(&one, &t).is_err());
    }

    #[test]
    fn ranking_examples() {
        let y = [lv(&[1, -1])];
        let rl = |f: [f64; 2]| ranking_loss(&[f], &y, RankingNormalization::PerPair).unwrap();
        assert_eq!(rl([0.7, 0.2]), 0.0);
        assert_eq!(rl([0.2, 0.7]), 1.0);
        assert_eq!(rl([0.5, 0.5]), 0.5);
        // Instances without a relevant/irrelevant pair are skipped.
        let mixed = [lv(&[1, 1]), lv(&[1, -1])];
        assert_eq!(
            ranking_loss(&[[0.0, 1.0], [0.2, 0.7]], &mixed, RankingNormalization::PerPair).unwrap(),
            1.0
        );
        let y3 = [lv(&[1, -1, -1])];
        assert_eq!(ranking_loss(&[[0.0, 1.0, 2.0]], &y3, RankingNormalization::Raw).unwrap(), 2.0);
        assert_eq!(ranking_loss(&[[0.0, 1.0, 2.0]], &y3, RankingNormalization::PerPair).unwrap(), 1.0);
    }

    #[test]
    fn pair_scan_equals_sort() {
        let mut rng = rng::from_seed(77);
        for _ in 0..1000 {
            let q = rng.random_range(1..12);
            // Coarse scores so ties are common.
            let f: Vec<f64> = (0..q).map(|_| f64::from(rng.random_range(-3..4)) * 0.5).collect();
            let y = LabelVector::from_bools((0..q).map(|_| rng.random_bool(0.4)));
            for norm in [RankingNormalization::PerPair, RankingNormalization::Raw] {
                let a = ranking_loss(&[&f], std::slice::from_ref(&y), norm).unwrap();
                let b = ranking_loss_by_sort(&[&f], std::slice::from_ref(&y), norm).unwrap();
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn average_precision_examples() {
        let ap = average_precision(&[[0.9, 0.5, 0.1]], &[lv(&[1, -1, 1])]).unwrap();
        assert!((ap.value - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(format!("{:.6}", ap.value), "0.833333");
        let ap = average_precision(&[[0.9, 0.8, 0.1]], &[lv(&[1, 1, -1])]).unwrap();
        assert_eq!(ap.value, 1.0);
        let ap = average_precision(&[[-4.0]], &[lv(&[1])]).unwrap();
        assert_eq!(ap.value, 1.0);
        let ap = average_precision(&[[0.1, 0.2], [0.3, 0.1]], &[lv(&[-1, -1]), lv(&[1, -1])]).unwrap();
        assert_eq!((ap.value, ap.skipped), (1.0, 1));
        // Tie broken toward the lower label index.
        let ap = average_precision(&[[0.5, 0.5]], &[lv(&[-1, 1])]).unwrap();
        assert_eq!(ap.value, 0.5);
    }

    #[test]
    fn metrics_stay_in_range() {
        let mut rng = rng::from_seed(78);
        for _ in 0..200 {
            let q = rng.random_range(1..8);
            let n = rng.random_range(1..10);
            let scores: Vec<Vec<f64>> = (0..n).map(|_| (0..q).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let truth: Vec<LabelVector> = (0..n)
                .map(|_| {
                    let mut y = LabelVector::from_bools((0..q).map(|_| rng.random_bool(0.5)));
                    if y.num_relevant() == 0 {
                        y.flip(0);
                    }
                    y
                })
                .collect();
            let m = evaluate(&scores, &truth, PredictionRule::Sign).unwrap();
            assert!((0.0..=1.0).contains(&m.hamming_loss));
            assert!((0.0..=1.0).contains(&m.ranking_loss));
            assert!(m.average_precision > 0.0 && m.average_precision <= 1.0);
        }
    }
}
