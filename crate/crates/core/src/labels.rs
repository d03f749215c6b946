//! Label vectors and the per-label flip rates of the noise process.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A multi-label target in `{-1, +1}^q`.
///
/// Labels are always stored in signed form so margins `y * f` need no
/// translation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelVector(Vec<i8>);

impl LabelVector {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidLabel(bad as i64));
        }
        Ok(LabelVector(values))
    }

    /// All labels irrelevant.
    pub fn negative(q: usize) -> Self {
        LabelVector(alloc::vec![-1; q])
    }

    /// Builds a vector with `+1` at each index in `relevant` and `-1` elsewhere.
    pub fn from_relevant(q: usize, relevant: &[usize]) -> Result<Self> {
        let mut values = alloc::vec![-1i8; q];
        for &j in relevant {
            if j >= q {
                return Err(Error::shape(format!("label index {j} out of range for q={q}")));
            }
            values[j] = 1;
        }
        Ok(LabelVector(values))
    }

    pub fn from_bools(relevant: impl IntoIterator<Item = bool>) -> Self {
        LabelVector(relevant.into_iter().map(|r| if r { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> i8 {
        self.0[j]
    }

    /// The label as `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(&self, j: usize) -> f64 {
        f64::from(self.0[j])
    }

    #[inline]
    pub fn is_relevant(&self, j: usize) -> bool {
        self.0[j] > 0
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        self.0.iter().copied()
    }

    /// Indices of the relevant labels, ascending.
    pub fn relevant(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &v)| v > 0).map(|(j, _)| j)
    }

    pub fn num_relevant(&self) -> usize {
        self.0.iter().filter(|&&v| v > 0).count()
    }

    /// Flips label `j` in place.
    pub fn flip(&mut self, j: usize) {
        self.0[j] = -self.0[j];
    }

    pub fn negated(&self) -> Self {
        LabelVector(self.0.iter().map(|&v| -v).collect())
    }
}

impl fmt::Debug for LabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(if *v > 0 { "+" } else { "-" })?;
        }
        f.write_str("]")
    }
}

/// Class-conditional flip probabilities, one pair per label.
///
/// `rho_pos[j]` is `Pr(noisy_j = -1 | clean_j = +1)` and `rho_neg[j]` is
/// `Pr(noisy_j = +1 | clean_j = -1)`. Both lie in `[0, 1)` and their sum is
/// strictly below one, which is what makes the corrections invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    rho_pos: Vec<f64>,
    rho_neg: Vec<f64>,
}

impl NoiseSpec {
    pub fn new(rho_pos: Vec<f64>, rho_neg: Vec<f64>) -> Result<Self> {
        if rho_pos.len() != rho_neg.len() {
            return Err(Error::InvalidNoiseSpec(format!(
                "{} rho_pos values but {} rho_neg values",
                rho_pos.len(),
                rho_neg.len()
            )));
        }
        for (j, (&p, &n)) in rho_pos.iter().zip(&rho_neg).enumerate() {
            validate_pair(j, p, n)?;
        }
        Ok(NoiseSpec { rho_pos, rho_neg })
    }

    /// No noise on any of the `q` labels.
    pub fn zero(q: usize) -> Self {
        NoiseSpec {
            rho_pos: alloc::vec![0.0; q],
            rho_neg: alloc::vec![0.0; q],
        }
    }

    /// Same pair of rates on every label.
    pub fn uniform(q: usize, rho_pos: f64, rho_neg: f64) -> Result<Self> {
        NoiseSpec::new(alloc::vec![rho_pos; q], alloc::vec![rho_neg; q])
    }

    /// Partial multi-label noise: relevant labels are never dropped and
    /// irrelevant label `j` enters the candidate set with probability `rho[j]`.
    pub fn partial(rho: Vec<f64>) -> Result<Self> {
        let q = rho.len();
        NoiseSpec::new(alloc::vec![0.0; q], rho)
    }

    pub fn num_labels(&self) -> usize {
        self.rho_pos.len()
    }

    #[inline]
    pub fn rho_pos(&self, j: usize) -> f64 {
        self.rho_pos[j]
    }

    #[inline]
    pub fn rho_neg(&self, j: usize) -> f64 {
        self.rho_neg[j]
    }

    pub fn rho_pos_all(&self) -> &[f64] {
        &self.rho_pos
    }

    pub fn rho_neg_all(&self) -> &[f64] {
        &self.rho_neg
    }

    /// Probability that label `j` flips given its clean value `y`.
    #[inline]
    pub fn flip_prob(&self, j: usize, y: i8) -> f64 {
        if y > 0 {
            self.rho_pos[j]
        } else {
            self.rho_neg[j]
        }
    }

    /// `1 / (1 - rho_pos[j] - rho_neg[j])`.
    #[inline]
    pub fn kappa(&self, j: usize) -> f64 {
        1.0 / (1.0 - self.rho_pos[j] - self.rho_neg[j])
    }

    pub fn is_zero(&self) -> bool {
        self.rho_pos.iter().chain(&self.rho_neg).all(|&r| r == 0.0)
    }

    /// True when no relevant label is ever dropped.
    pub fn is_partial(&self) -> bool {
        self.rho_pos.iter().all(|&r| r == 0.0)
    }

    pub fn check_labels(&self, q: usize) -> Result<()> {
        if self.num_labels() != q {
            return Err(Error::shape(format!(
                "noise spec covers {} labels, data has {q}",
                self.num_labels()
            )));
        }
        Ok(())
    }
}

pub(crate) fn validate_pair(j: usize, rho_pos: f64, rho_neg: f64) -> Result<()> {
    let in_range = |r: f64| r.is_finite() && (0.0..1.0).contains(&r);
    if !in_range(rho_pos) || !in_range(rho_neg) {
        return Err(Error::InvalidNoiseSpec(format!(
            "label {j}: rates ({rho_pos}, {rho_neg}) must lie in [0, 1)"
        )));
    }
    if rho_pos + rho_neg >= 1.0 {
        return Err(Error::InvalidNoiseSpec(format!(
            "label {j}: rho_pos + rho_neg = {} must be < 1",
            rho_pos + rho_neg
        )));
    }
    Ok(())
}
