use ccmn_core::correction::{corrected_loss_hamming, corrected_loss_ranking, plain_loss_hamming, plain_loss_ranking};
use ccmn_core::metrics::{self, RankingNormalization};
use ccmn_core::noise::enumerate_flip_distribution;
use ccmn_core::{LabelVector, LossKind, NoiseSpec, SurrogateLoss};
use proptest::prelude::*;

fn case() -> impl Strategy<Value = (NoiseSpec, Vec<f64>, LabelVector, LossKind)> {
    (1usize..=5).prop_flat_map(|q| {
        (
            prop::collection::vec((0.0..0.5f64, 0.0..0.5f64), q),
            prop::collection::vec(-3.0..3.0f64, q),
            prop::collection::vec(any::<bool>(), q),
            prop::sample::select(LossKind::ALL.to_vec()),
        )
            .prop_map(|(rates, f, y, kind)| {
                let (pos, neg): (Vec<f64>, Vec<f64>) = rates.into_iter().map(|(p, n)| (p, n * 0.8)).unzip();
                (NoiseSpec::new(pos, neg).unwrap(), f, LabelVector::from_bools(y), kind)
            })
    })
}

fn scored_instance() -> impl Strategy<Value = (Vec<f64>, LabelVector)> {
    (1usize..=8).prop_flat_map(|q| {
        (
            prop::collection::vec(prop_oneof![Just(0.0), Just(1.0), -5.0..5.0f64], q),
            prop::collection::vec(any::<bool>(), q),
        )
            .prop_map(|(f, y)| (f, LabelVector::from_bools(y)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn corrected_losses_are_unbiased((spec, f, y, kind) in case()) {
        let loss = SurrogateLoss::from(kind);
        let outcomes = enumerate_flip_distribution(&y, &spec).unwrap();
        let hamming: f64 = outcomes.iter().map(|(n, p)| p * corrected_loss_hamming(&loss, &f, n, &spec).unwrap()).sum();
        prop_assert!((hamming - plain_loss_hamming(&loss, &f, &y).unwrap()).abs() <= 1e-9);
        if f.len() >= 2 {
            let ranking: f64 = outcomes.iter().map(|(n, p)| p * corrected_loss_ranking(&loss, &f, n, &spec).unwrap()).sum();
            prop_assert!((ranking - plain_loss_ranking(&loss, &f, &y).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn metrics_stay_in_range((f, y) in scored_instance()) {
        let scores = [f.clone()];
        let truth = [y.clone()];
        let r = metrics::ranking_loss(&scores, &truth, RankingNormalization::PerPair).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
        let h = metrics::hamming_loss(&[metrics::predict_sign(&f)], &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
        let ap = metrics::average_precision(&scores, &truth).unwrap();
        if y.num_relevant() > 0 {
            prop_assert!(ap.value > 0.0 && ap.value <= 1.0);
            prop_assert_eq!(ap.skipped, 0);
        } else {
            prop_assert_eq!(ap.skipped, 1);
        }
    }

    #[test]
    fn predictions_are_scale_and_shift_invariant((f, _y) in scored_instance(), c in 0.01..100.0f64, t in -5.0..5.0f64, f0 in -3.0..3.0f64) {
        let scaled: Vec<f64> = f.iter().map(|v| v * c).collect();
        prop_assert_eq!(metrics::predict_sign(&f), metrics::predict_sign(&scaled));
        prop_assert_eq!(metrics::predict_dummy_threshold(&f, 0.0), metrics::predict_sign(&f));
        // shifts by integers keep the comparison exact in floating point
        let t = t.round();
        let shifted: Vec<f64> = f.iter().map(|v| v + t).collect();
        prop_assert_eq!(metrics::predict_dummy_threshold(&f, f0.round()), metrics::predict_dummy_threshold(&shifted, f0.round() + t));
    }

    #[test]
    fn ranking_scan_equals_sort((f, y) in scored_instance()) {
        for norm in [RankingNormalization::PerPair, RankingNormalization::Raw] {
            let a = metrics::ranking_loss(std::slice::from_ref(&f), std::slice::from_ref(&y), norm).unwrap();
            let b = metrics::ranking_loss_by_sort(std::slice::from_ref(&f), std::slice::from_ref(&y), norm).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
