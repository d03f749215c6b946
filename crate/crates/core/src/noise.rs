//! Class-conditional multi-label corruption.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::labels::{LabelVector, NoiseSpec};
use crate::rng::{self, Purpose};

/// Largest label count for which [`enumerate_flip_distribution`] will list
/// all `2^q` outcomes.
pub const MAX_ENUMERATION_LABELS: usize = 20;

/// Rates drawn for each label in `ccmn` mode.
pub const CCMN_RATES: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
/// Rates drawn for each irrelevant label in `pml` mode.
pub const PML_RATES: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];

/// Flips every label of every instance independently with its
/// class-conditional probability. Instance `i` draws from its own substream of
/// `seed`, so the result does not depend on iteration order.
pub fn inject_noise(data: &MultiLabelDataset, spec: &NoiseSpec, seed: u64) -> Result<MultiLabelDataset> {
    spec.check_labels(data.num_labels())?;
    let labels = data
        .labels()
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let mut rng = rng::substream(seed, Purpose::NoiseInjection, i as u64);
            corrupt(y, spec, &mut rng)
        })
        .collect();
    data.with_labels(labels)
}

/// One draw of the noisy labels for clean labels `y`.
pub fn corrupt<R: Rng + ?Sized>(y: &LabelVector, spec: &NoiseSpec, rng: &mut R) -> LabelVector {
    let mut out = y.clone();
    for j in 0..y.len() {
        let u: f64 = rng.random();
        if u < spec.flip_prob(j, y.get(j)) {
            out.flip(j);
        }
    }
    out
}

/// All `2^q` noisy label vectors with their probabilities `Pr(noisy | clean)`.
///
/// Outcome `m` has label `j` flipped when bit `j` of `m` is set.
pub fn enumerate_flip_distribution(
    y_clean: &LabelVector,
    spec: &NoiseSpec,
) -> Result<Vec<(LabelVector, f64)>> {
    let q = y_clean.len();
    spec.check_labels(q)?;
    if q > MAX_ENUMERATION_LABELS {
        return Err(Error::EnumerationTooLarge(q));
    }
    let mut out = Vec::with_capacity(1 << q);
    for mask in 0u32..(1u32 << q) {
        let mut y = y_clean.clone();
        let mut p = 1.0;
        for j in 0..q {
            let r = spec.flip_prob(j, y_clean.get(j));
            if mask & (1 << j) != 0 {
                y.flip(j);
                p *= r;
            } else {
                p *= 1.0 - r;
            }
        }
        out.push((y, p));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseMode {
    /// Both rates of every label drawn from [`CCMN_RATES`].
    Ccmn,
    /// `rho_pos = 0`, `rho_neg` drawn from [`PML_RATES`].
    Pml,
}

impl NoiseMode {
    pub fn name(self) -> &'static str {
        match self {
            NoiseMode::Ccmn => "ccmn",
            NoiseMode::Pml => "pml",
        }
    }
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ccmn" => Ok(NoiseMode::Ccmn),
            "pml" => Ok(NoiseMode::Pml),
            other => Err(Error::InvalidConfig(format!("unknown noise mode '{other}'"))),
        }
    }
}

/// Draws per-label noise rates for an experiment run.
///
/// In `ccmn` mode a pair whose sum reaches 1 (only `0.5 + 0.5` from the rate
/// set) is redrawn.
pub fn sample_noise_rates(mode: NoiseMode, q: usize, seed: u64) -> NoiseSpec {
    let mut rng = rng::for_purpose(seed, Purpose::NoiseRates);
    let mut pick = |set: &[f64]| set[rng::index_below(&mut rng, set.len())];
    let mut pos = Vec::with_capacity(q);
    let mut neg = Vec::with_capacity(q);
    for _ in 0..q {
        match mode {
            NoiseMode::Ccmn => loop {
                let (p, n) = (pick(&CCMN_RATES), pick(&CCMN_RATES));
                if p + n < 1.0 {
                    pos.push(p);
                    neg.push(n);
                    break;
                }
            },
            NoiseMode::Pml => {
                pos.push(0.0);
                neg.push(pick(&PML_RATES));
            }
        }
    }
    NoiseSpec::new(pos, neg).expect("sampled rates are valid by construction")
}
