//! Random train/test/validation partitions.

use alloc::format;
use alloc::vec::Vec;

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// Fractions of the data for each partition plus the permutation seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub test_fraction: f64,
    pub validation_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    /// 50% train, 30% test, 20% validation.
    pub fn standard(seed: u64) -> Self {
        SplitSpec {
            train_fraction: 0.5,
            test_fraction: 0.3,
            validation_fraction: 0.2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = [self.train_fraction, self.test_fraction, self.validation_fraction];
        if f.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidSplit(format!("fractions {f:?} must be positive")));
        }
        let sum: f64 = f.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSplit(format!("fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Partition sizes `(train, test, validation)` for `n` instances. Test and
    /// validation get `floor(fraction * n)`; the remainder goes to train.
    pub fn sizes(&self, n: usize) -> Result<(usize, usize, usize)> {
        self.validate()?;
        let part = |f: f64| libm::floor(f * n as f64 + 1e-9) as usize;
        let test = part(self.test_fraction);
        let val = part(self.validation_fraction);
        let train = n
            .checked_sub(test + val)
            .ok_or_else(|| Error::InvalidSplit(format!("partitions exceed n={n}")))?;
        if n > 0 && (train == 0 || test == 0 || val == 0) {
            return Err(Error::InvalidSplit(format!(
                "n={n} gives an empty partition: sizes ({train}, {test}, {val})"
            )));
        }
        Ok((train, test, val))
    }
}

/// Instance indices of each partition, each in permutation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub validation: Vec<usize>,
}

impl SplitIndices {
    pub fn new(n: usize, spec: &SplitSpec) -> Result<Self> {
        let (train, test, _) = spec.sizes(n)?;
        let perm = rng::permutation(&mut rng::for_purpose(spec.seed, Purpose::Split), n);
        Ok(SplitIndices {
            train: perm[..train].to_vec(),
            test: perm[train..train + test].to_vec(),
            validation: perm[train + test..].to_vec(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Split {
    pub train: MultiLabelDataset,
    pub test: MultiLabelDataset,
    pub validation: MultiLabelDataset,
    pub indices: SplitIndices,
}

pub fn split_dataset(data: &MultiLabelDataset, spec: &SplitSpec) -> Result<Split> {
    if data.len() < 3 {
        return Err(Error::InvalidSplit(format!("need at least 3 instances, got {}", data.len())));
    }
    let indices = SplitIndices::new(data.len(), spec)?;
    Ok(Split {
        train: data.select(&indices.train),
        test: data.select(&indices.test),
        validation: data.select(&indices.validation),
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes_without_remainder() {
        assert_eq!(SplitSpec::standard(1).sizes(10).unwrap(), (5, 3, 2));
    }

    #[test]
    fn remainder_goes_to_train() {
        // floor(3.5) = 3, floor(2.1) = 2, floor(1.4) = 1, leftover 1 -> train.
        assert_eq!(SplitSpec::standard(1).sizes(7).unwrap(), (4, 2, 1));
    }

    #[test]
    fn empty_partition_is_rejected() {
        assert!(matches!(SplitSpec::standard(0).sizes(3), Err(Error::InvalidSplit(_))));
        let bad = SplitSpec {
            train_fraction: 0.5,
            test_fraction: 0.5,
            validation_fraction: 0.1,
            seed: 0,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = SplitIndices::new(50, &SplitSpec::standard(7)).unwrap();
        let b = SplitIndices::new(50, &SplitSpec::standard(7)).unwrap();
        let c = SplitIndices::new(50, &SplitSpec::standard(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    proptest! {
        #[test]
        fn partition_covers_everything_once(n in 5usize..400, seed in any::<u64>()) {
            let s = SplitIndices::new(n, &SplitSpec::standard(seed)).unwrap();
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).chain(&s.validation).copied().collect();
            prop_assert_eq!(all.len(), n);
            all.sort_unstable();
            all.dedup();
            prop_assert_eq!(all.len(), n);
            prop_assert!(all.iter().enumerate().all(|(i, &v)| i == v));
        }
    }
}
