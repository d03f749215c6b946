//! Linearly separable synthetic multi-label data with a known Bayes predictor.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dataset::{Features, MultiLabelDataset};
use crate::error::{Error, Result};
use crate::labels::LabelVector;
use crate::rng::{self, DetRng, Purpose};

/// Draws allowed per requested instance before giving up.
pub const RESAMPLE_BUDGET_PER_INSTANCE: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub data: MultiLabelDataset,
    /// `q` unit-norm rows of length `d`; label `j` is `sign(hyperplanes[j] · x)`.
    pub hyperplanes: Vec<Vec<f64>>,
    pub margin: f64,
}

impl SyntheticDataset {
    /// Labels the generating hyperplanes assign to every instance.
    pub fn bayes_labels(&self) -> Vec<LabelVector> {
        (0..self.data.len())
            .map(|i| label_of(&self.hyperplanes, self.data.row(i).to_dense(self.data.dim()).as_slice()))
            .collect()
    }
}

fn label_of(hyperplanes: &[Vec<f64>], x: &[f64]) -> LabelVector {
    LabelVector::from_bools(hyperplanes.iter().map(|w| dot(w, x) >= 0.0))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit_gaussian(rng: &mut DetRng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = libm::sqrt(dot(&v, &v));
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Generates `n` instances in the unit ball of `R^d` labeled by `q` random
/// hyperplanes through the origin.
///
/// Points closer than `margin` to any hyperplane, and points with no relevant
/// label, are redrawn.
pub fn generate_synthetic(n: usize, d: usize, q: usize, margin: f64, seed: u64) -> Result<SyntheticDataset> {
    if n == 0 || d == 0 || q == 0 {
        return Err(Error::InvalidConfig(format!("n, d and q must be positive, got ({n}, {d}, {q})")));
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidConfig(format!("margin must be non-negative, got {margin}")));
    }
    let mut rng = rng::for_purpose(seed, Purpose::Synthetic);
    let hyperplanes: Vec<Vec<f64>> = (0..q).map(|_| unit_gaussian(&mut rng, d)).collect();

    let budget = n.saturating_mul(RESAMPLE_BUDGET_PER_INSTANCE);
    let mut draws = 0usize;
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    while labels.len() < n {
        if draws == budget {
            return Err(Error::GenerationFailed(format!(
                "only {} of {n} instances accepted after {draws} draws with margin {margin}",
                labels.len()
            )));
        }
        draws += 1;
        let dir = unit_gaussian(&mut rng, d);
        let u: f64 = rng.random();
        let radius = libm::pow(u, 1.0 / d as f64);
        let x: Vec<f64> = dir.into_iter().map(|c| c * radius).collect();
        if hyperplanes.iter().any(|w| libm::fabs(dot(w, &x)) < margin) {
            continue;
        }
        let y = label_of(&hyperplanes, &x);
        if y.num_relevant() == 0 {
            continue;
        }
        values.extend_from_slice(&x);
        labels.push(y);
    }
    let data = MultiLabelDataset::new(Features::dense(d, values)?, labels, q)?;
    Ok(SyntheticDataset {
        data,
        hyperplanes,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplanes_reproduce_labels() {
        let s = generate_synthetic(300, 4, 3, 0.05, 1).unwrap();
        assert_eq!(s.bayes_labels().as_slice(), s.data.labels());
        for w in &s.hyperplanes {
            assert!((dot(w, w) - 1.0).abs() < 1e-12);
        }
        for i in 0..s.data.len() {
            let x = s.data.row(i).to_dense(4);
            assert!(dot(&x, &x) <= 1.0 + 1e-12);
            assert!(s.hyperplanes.iter().all(|w| dot(w, &x).abs() >= 0.05));
            assert!(s.data.label(i).num_relevant() >= 1);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic(50, 3, 2, 0.0, 7).unwrap();
        assert_eq!(a, generate_synthetic(50, 3, 2, 0.0, 7).unwrap());
        assert_ne!(a, generate_synthetic(50, 3, 2, 0.0, 8).unwrap());
    }

    #[test]
    fn impossible_margin_fails() {
        assert!(matches!(generate_synthetic(2, 2, 1, 2.0, 0), Err(Error::GenerationFailed(_))));
        assert!(generate_synthetic(0, 2, 1, 0.0, 0).is_err());
        assert!(generate_synthetic(1, 2, 1, -0.1, 0).is_err());
    }
}
