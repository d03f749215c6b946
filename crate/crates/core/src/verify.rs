//! Self-checks of the corrected losses against exact oracles.
//!
//! Unbiasedness is checked by enumerating all `2^q` noisy label vectors with
//! their probabilities, so the expectation is exact up to rounding.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::correction::{self, JointLabel};
use crate::error::Result;
use crate::labels::{LabelVector, NoiseSpec};
use crate::noise::enumerate_flip_distribution;
use crate::rng::{self, DetRng, Purpose};
use crate::surrogate::{LossKind, SurrogateLoss};

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_MAX_Q: usize = 6;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Tolerance of the checks where both sides are the same formula up to
/// rounding.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Largest `rho_pos + rho_neg` drawn by [`random_spec`].
pub const MAX_RATE_SUM: f64 = 0.9;
/// Scores are drawn uniformly from `[-SCORE_RANGE, SCORE_RANGE]`.
pub const SCORE_RANGE: f64 = 3.0;

/// Deliberate defects for exercising the checks themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds instead of subtracts the flipped term of the independent correction.
    IndependentSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub max_q: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: DEFAULT_TRIALS,
            max_q: DEFAULT_MAX_Q,
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// Number of compared values.
    pub comparisons: usize,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &str, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            comparisons: 0,
            max_abs_deviation: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, a: f64, b: f64) {
        self.comparisons += 1;
        let d = libm::fabs(a - b);
        // NaN must fail the check rather than vanish in a max
        if d.is_nan() || d > self.max_abs_deviation {
            self.max_abs_deviation = if d.is_nan() { f64::INFINITY } else { d };
        }
    }

    pub fn passed(&self) -> bool {
        self.max_abs_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Valid noise rates with each rate below `0.5` and each pair summing to at
/// most [`MAX_RATE_SUM`].
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, q: usize) -> NoiseSpec {
    let mut pos = Vec::with_capacity(q);
    let mut neg = Vec::with_capacity(q);
    for _ in 0..q {
        loop {
            let p: f64 = rng.random_range(0.0..0.5);
            let n: f64 = rng.random_range(0.0..0.5);
            if p + n <= MAX_RATE_SUM {
                pos.push(p);
                neg.push(n);
                break;
            }
        }
    }
    NoiseSpec::new(pos, neg).expect("rates below 0.5 with bounded sum are valid")
}

pub fn random_scores<R: Rng + ?Sized>(rng: &mut R, q: usize) -> Vec<f64> {
    (0..q).map(|_| rng.random_range(-SCORE_RANGE..=SCORE_RANGE)).collect()
}

pub fn random_labels<R: Rng + ?Sized>(rng: &mut R, q: usize) -> LabelVector {
    LabelVector::from_bools((0..q).map(|_| rng.random_bool(0.5)))
}

fn check_rng(seed: u64, check: u64) -> DetRng {
    rng::substream(seed, Purpose::Verify, check)
}

fn losses() -> [SurrogateLoss; 3] {
    LossKind::ALL.map(SurrogateLoss::from)
}

fn hamming_with_fault(
    loss: &SurrogateLoss,
    f: &[f64],
    y: &LabelVector,
    spec: &NoiseSpec,
    fault: Option<Fault>,
) -> Result<f64> {
    match fault {
        None => correction::corrected_loss_hamming(loss, f, y, spec),
        Some(Fault::IndependentSign) => Ok(f
            .iter()
            .enumerate()
            .map(|(j, &fj)| {
                let c = correction::IndependentCoefficients::new(y.get(j), spec.rho_pos(j), spec.rho_neg(j));
                let m = y.sign(j) * fj;
                c.on_margin * loss.value(m).unwrap_or(f64::NAN) - c.on_flipped * loss.value(-m).unwrap_or(f64::NAN)
            })
            .sum()),
    }
}

/// Expected corrected label-wise loss over the noise equals the clean loss.
pub fn check_independent_unbiased(
    trials: usize,
    max_q: usize,
    seed: u64,
    tolerance: f64,
    fault: Option<Fault>,
) -> Result<CheckResult> {
    let mut out = CheckResult::new("independent_unbiased", tolerance);
    let mut rng = check_rng(seed, 1);
    for _ in 0..trials {
        let q = rng.random_range(1..=max_q.max(1));
        let spec = random_spec(&mut rng, q);
        let f = random_scores(&mut rng, q);
        let y = random_labels(&mut rng, q);
        let outcomes = enumerate_flip_distribution(&y, &spec)?;
        for loss in losses() {
            let mut expected = 0.0;
            for (noisy, p) in &outcomes {
                expected += p * hamming_with_fault(&loss, &f, noisy, &spec, fault)?;
            }
            out.record(expected, correction::plain_loss_hamming(&loss, &f, &y)?);
        }
    }
    Ok(out)
}

/// Expected corrected pairwise loss over the noise equals the clean pairwise
/// loss, where pairs with equal clean labels cost nothing.
pub fn check_dependent_unbiased(trials: usize, max_q: usize, seed: u64, tolerance: f64) -> Result<CheckResult> {
    let mut out = CheckResult::new("dependent_unbiased", tolerance);
    let mut rng = check_rng(seed, 2);
    for _ in 0..trials {
        let q = rng.random_range(2..=max_q.max(2));
        let spec = random_spec(&mut rng, q);
        let f = random_scores(&mut rng, q);
        let y = random_labels(&mut rng, q);
        let outcomes = enumerate_flip_distribution(&y, &spec)?;
        for loss in losses() {
            let mut expected = 0.0;
            for (noisy, p) in &outcomes {
                expected += p * correction::corrected_loss_ranking(&loss, &f, noisy, &spec)?;
            }
            out.record(expected, correction::plain_loss_ranking(&loss, &f, &y)?);
        }
    }
    Ok(out)
}

/// Closed-form pairwise table against a direct solve of the unbiasedness
/// conditions.
pub fn check_table_vs_linsolve(draws: usize, seed: u64, tolerance: f64) -> Result<CheckResult> {
    let mut out = CheckResult::new("pairwise_table_vs_linsolve", tolerance);
    let mut rng = check_rng(seed, 3);
    let all = losses();
    for i in 0..draws {
        let spec = random_spec(&mut rng, 2);
        let f_jk = rng.random_range(-2.0 * SCORE_RANGE..=2.0 * SCORE_RANGE);
        let loss = &all[i % all.len()];
        let table = correction::pairwise_correction_table(&spec, 0, 1)?;
        let solved = correction::derive_pairwise_by_linsolve(&spec, 0, 1, f_jk, loss)?;
        for label in JointLabel::ALL {
            out.record(table.apply(loss, label, f_jk), solved[label as usize]);
        }
    }
    Ok(out)
}

/// With all rates zero every corrected loss is its plain counterpart.
pub fn check_zero_noise_identity(trials: usize, max_q: usize, seed: u64) -> Result<CheckResult> {
    let mut out = CheckResult::new("zero_noise_identity", IDENTITY_TOLERANCE);
    let mut rng = check_rng(seed, 4);
    for _ in 0..trials {
        let q = rng.random_range(2..=max_q.max(2));
        let spec = NoiseSpec::zero(q);
        let f = random_scores(&mut rng, q);
        let y = random_labels(&mut rng, q);
        let zeros = alloc::vec![0.0; q];
        for loss in losses() {
            let plain_h = correction::plain_loss_hamming(&loss, &f, &y)?;
            let plain_r = correction::plain_loss_ranking(&loss, &f, &y)?;
            out.record(correction::corrected_loss_hamming(&loss, &f, &y, &spec)?, plain_h);
            out.record(correction::corrected_loss_ranking(&loss, &f, &y, &spec)?, plain_r);
            out.record(correction::upml_loss_hamming(&loss, &f, &y, &zeros)?, plain_h);
            out.record(correction::upml_loss_ranking(&loss, &f, &y, &zeros)?, plain_r);
        }
    }
    Ok(out)
}

/// The partial multi-label losses are the general ones with `rho_pos = 0`.
pub fn check_upml_specialization(trials: usize, max_q: usize, seed: u64) -> Result<CheckResult> {
    let mut out = CheckResult::new("upml_specialization", IDENTITY_TOLERANCE);
    let mut rng = check_rng(seed, 5);
    for _ in 0..trials {
        let q = rng.random_range(2..=max_q.max(2));
        let rho: Vec<f64> = (0..q).map(|_| rng.random_range(0.0..MAX_RATE_SUM)).collect();
        let spec = NoiseSpec::partial(rho.clone())?;
        let f = random_scores(&mut rng, q);
        let y = random_labels(&mut rng, q);
        for loss in losses() {
            out.record(
                correction::upml_loss_hamming(&loss, &f, &y, &rho)?,
                correction::corrected_loss_hamming(&loss, &f, &y, &spec)?,
            );
            out.record(
                correction::upml_loss_ranking(&loss, &f, &y, &rho)?,
                correction::corrected_loss_ranking(&loss, &f, &y, &spec)?,
            );
        }
    }
    Ok(out)
}

pub fn run(options: &VerifyOptions) -> Result<VerifyReport> {
    let VerifyOptions {
        trials,
        max_q,
        seed,
        tolerance,
        fault,
    } = *options;
    if max_q > crate::noise::MAX_ENUMERATION_LABELS {
        return Err(crate::Error::EnumerationTooLarge(max_q));
    }
    Ok(VerifyReport {
        checks: alloc::vec![
            check_independent_unbiased(trials, max_q, seed, tolerance, fault)?,
            check_dependent_unbiased(trials, max_q, seed, tolerance)?,
            check_table_vs_linsolve(trials, seed, tolerance)?,
            check_zero_noise_identity(trials, max_q, seed)?,
            check_upml_specialization(trials, max_q, seed)?,
        ],
    })
}

impl core::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<28} {:<4} max_abs_deviation={:.3e} tolerance={:.0e} comparisons={}",
                c.name,
                if c.passed() { "ok" } else { "FAIL" },
                c.max_abs_deviation,
                c.tolerance,
                c.comparisons
            )?;
        }
        f.write_str(if self.passed() { "all checks passed" } else { "violations found" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = run(&VerifyOptions {
            trials: 40,
            max_q: 4,
            ..VerifyOptions::default()
        })
        .unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn sign_fault_is_caught() {
        let r = check_independent_unbiased(20, 3, 1, DEFAULT_TOLERANCE, Some(Fault::IndependentSign)).unwrap();
        assert!(!r.passed());
        assert!(r.max_abs_deviation > 1e-3);
    }

    #[test]
    fn nan_fails() {
        let mut c = CheckResult::new("x", 1.0);
        c.record(f64::NAN, 0.0);
        assert!(!c.passed());
    }

    #[test]
    fn random_spec_respects_bounds() {
        let mut rng = rng::from_seed(0);
        for _ in 0..200 {
            let s = random_spec(&mut rng, 3);
            for j in 0..3 {
                assert!(s.rho_pos(j) < 0.5 && s.rho_neg(j) < 0.5);
                assert!(s.rho_pos(j) + s.rho_neg(j) <= MAX_RATE_SUM);
            }
        }
    }
}
