//! Noise-corrected surrogate losses.
//!
//! Each corrected loss is a signed combination of `phi` evaluated at a margin
//! and at its negation, with coefficients chosen so that its expectation over
//! the label noise equals the uncorrected loss on the clean labels. The values
//! can be negative; they must not be clipped, or the expectation is lost.
//!
//! * Independent (per label): `kappa_j [(1 - rho_{-y}) phi(y f) - rho_y phi(-y f)]`
//!   with `kappa_j = 1 / (1 - rho_pos[j] - rho_neg[j])`.
//! * Pairwise (per label pair `j < k`): one row of a [`PairwiseCorrectionTable`],
//!   selected by the observed pair of labels, applied to `f_j - f_k`.
//!
//! The partial multi-label variants (`upml_*`) are the same losses with
//! `rho_pos = 0`, written out directly.

use alloc::format;

use crate::error::{Error, Result};
use crate::labels::{validate_pair, LabelVector, NoiseSpec};
use crate::linsolve;
use crate::surrogate::SurrogateLoss;

/// Weights of `phi(y f)` and `phi(-y f)` in the independent correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependentCoefficients {
    pub on_margin: f64,
    pub on_flipped: f64,
}

impl IndependentCoefficients {
    #[inline]
    pub fn new(y: i8, rho_pos: f64, rho_neg: f64) -> Self {
        let kappa = 1.0 / (1.0 - rho_pos - rho_neg);
        let (rho_same, rho_other) = if y > 0 { (rho_pos, rho_neg) } else { (rho_neg, rho_pos) };
        IndependentCoefficients {
            on_margin: kappa * (1.0 - rho_other),
            on_flipped: -(kappa * rho_same),
        }
    }

    /// Loss at margin `m = y f`.
    #[inline]
    pub fn apply(&self, loss: &SurrogateLoss, m: f64) -> f64 {
        self.on_margin * loss.eval(m) + self.on_flipped * loss.eval(-m)
    }

    /// Derivative of [`apply`](Self::apply) with respect to the margin.
    #[inline]
    pub fn margin_derivative(&self, loss: &SurrogateLoss, m: f64) -> f64 {
        self.on_margin * loss.eval_derivative(m) - self.on_flipped * loss.eval_derivative(-m)
    }
}

/// Corrected loss of one label with score `f` and observed label `y`.
pub fn corrected_phi_independent(
    loss: &SurrogateLoss,
    f: f64,
    y: i8,
    rho_pos: f64,
    rho_neg: f64,
) -> Result<f64> {
    validate_pair(0, rho_pos, rho_neg)?;
    check_label(y)?;
    check_finite(f)?;
    let s = f64::from(y);
    Ok(IndependentCoefficients::new(y, rho_pos, rho_neg).apply(loss, s * f))
}

/// Sum of [`corrected_phi_independent`] over all labels.
pub fn corrected_loss_hamming(
    loss: &SurrogateLoss,
    f: &[f64],
    y_noisy: &LabelVector,
    spec: &NoiseSpec,
) -> Result<f64> {
    check_shapes(f, y_noisy, spec.num_labels())?;
    Ok(f.iter()
        .enumerate()
        .map(|(j, &fj)| {
            let y = y_noisy.get(j);
            IndependentCoefficients::new(y, spec.rho_pos(j), spec.rho_neg(j))
                .apply(loss, f64::from(y) * fj)
        })
        .sum())
}

/// `sum_j phi(y_j f_j)`, the uncorrected label-wise surrogate.
pub fn plain_loss_hamming(loss: &SurrogateLoss, f: &[f64], y: &LabelVector) -> Result<f64> {
    check_shapes(f, y, y.len())?;
    Ok(f.iter()
        .enumerate()
        .map(|(j, &fj)| loss.eval(y.sign(j) * fj))
        .sum())
}

/// `sum_{j<k, y_j != y_k} phi(y_jk (f_j - f_k))` with `y_jk = (y_j - y_k) / 2`.
/// Pairs with equal labels contribute nothing.
pub fn plain_loss_ranking(loss: &SurrogateLoss, f: &[f64], y: &LabelVector) -> Result<f64> {
    check_shapes(f, y, y.len())?;
    if f.len() < 2 {
        return Err(Error::shape("ranking loss needs at least two labels"));
    }
    let mut total = 0.0;
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            if y.get(j) != y.get(k) {
                total += loss.eval(y.sign(j) * (f[j] - f[k]));
            }
        }
    }
    Ok(total)
}

/// The four possible values of a label pair `(y_j, y_k)`, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointLabel {
    PosNeg = 0,
    NegPos = 1,
    PosPos = 2,
    NegNeg = 3,
}

impl JointLabel {
    pub const ALL: [JointLabel; 4] = [
        JointLabel::PosNeg,
        JointLabel::NegPos,
        JointLabel::PosPos,
        JointLabel::NegNeg,
    ];

    #[inline]
    pub fn of(y_j: i8, y_k: i8) -> Self {
        match (y_j > 0, y_k > 0) {
            (true, false) => JointLabel::PosNeg,
            (false, true) => JointLabel::NegPos,
            (true, true) => JointLabel::PosPos,
            (false, false) => JointLabel::NegNeg,
        }
    }

    pub fn signs(self) -> (i8, i8) {
        match self {
            JointLabel::PosNeg => (1, -1),
            JointLabel::NegPos => (-1, 1),
            JointLabel::PosPos => (1, 1),
            JointLabel::NegNeg => (-1, -1),
        }
    }
}

/// Correction coefficients for one label pair `(j, k)`.
///
/// Row `r` gives `(c1, c2)` so that the corrected pair loss for observed joint
/// label `r` is `kappa_jk * (c1 phi(f_j - f_k) + c2 phi(f_k - f_j))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseCorrectionTable {
    rows: [[f64; 2]; 4],
    kappa: f64,
}

impl PairwiseCorrectionTable {
    fn from_rates(pj: f64, nj: f64, pk: f64, nk: f64) -> Self {
        let kappa = 1.0 / ((1.0 - pj - nj) * (1.0 - pk - nk));
        PairwiseCorrectionTable {
            rows: [
                [(1.0 - nj) * (1.0 - pk), pj * nk],
                [nj * pk, (1.0 - pj) * (1.0 - nk)],
                [-(pk * (1.0 - nj)), -(pj * (1.0 - nk))],
                [-(nj * (1.0 - pk)), -(nk * (1.0 - pj))],
            ],
            kappa,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Row coefficients before multiplication by `kappa`.
    pub fn unscaled(&self, label: JointLabel) -> (f64, f64) {
        let [a, b] = self.rows[label as usize];
        (a, b)
    }

    /// Row coefficients including `kappa`.
    #[inline]
    pub fn coefficients(&self, label: JointLabel) -> (f64, f64) {
        let [a, b] = self.rows[label as usize];
        (self.kappa * a, self.kappa * b)
    }

    /// Corrected loss of the pair for observed `label` and difference `f_jk`.
    #[inline]
    pub fn apply(&self, loss: &SurrogateLoss, label: JointLabel, f_jk: f64) -> f64 {
        let (a, b) = self.coefficients(label);
        a * loss.eval(f_jk) + b * loss.eval(-f_jk)
    }

    /// Derivative of [`apply`](Self::apply) with respect to `f_jk`.
    #[inline]
    pub fn derivative(&self, loss: &SurrogateLoss, label: JointLabel, f_jk: f64) -> f64 {
        let (a, b) = self.coefficients(label);
        a * loss.eval_derivative(f_jk) - b * loss.eval_derivative(-f_jk)
    }
}

pub fn pairwise_correction_table(
    spec: &NoiseSpec,
    j: usize,
    k: usize,
) -> Result<PairwiseCorrectionTable> {
    check_pair(spec, j, k)?;
    Ok(PairwiseCorrectionTable::from_rates(
        spec.rho_pos(j),
        spec.rho_neg(j),
        spec.rho_pos(k),
        spec.rho_neg(k),
    ))
}

/// Joint probabilities `Pr(noisy pair = column | clean pair = row)` under
/// independent flips, rows and columns in [`JointLabel::ALL`] order.
pub fn joint_flip_matrix(spec: &NoiseSpec, j: usize, k: usize) -> Result<[[f64; 4]; 4]> {
    check_pair(spec, j, k)?;
    let keep_or_flip = |label: usize, clean: i8, noisy: i8| {
        let r = spec.flip_prob(label, clean);
        if clean == noisy {
            1.0 - r
        } else {
            r
        }
    };
    Ok(JointLabel::ALL.map(|clean| {
        let (cj, ck) = clean.signs();
        JointLabel::ALL.map(|noisy| {
            let (nj, nk) = noisy.signs();
            keep_or_flip(j, cj, nj) * keep_or_flip(k, ck, nk)
        })
    }))
}

/// Corrected pair losses obtained by solving the unbiasedness conditions
/// directly: for each clean pair the expected corrected loss must equal the
/// clean pair loss (`phi(f_jk)`, `phi(-f_jk)`, or 0 for equal labels).
///
/// Returns the corrected values for observed pairs in [`JointLabel::ALL`] order.
/// Independent of [`pairwise_correction_table`]; used to check it.
pub fn derive_pairwise_by_linsolve(
    spec: &NoiseSpec,
    j: usize,
    k: usize,
    f_jk: f64,
    loss: &SurrogateLoss,
) -> Result<[f64; 4]> {
    check_finite(f_jk)?;
    let matrix = joint_flip_matrix(spec, j, k)?;
    let rhs = [loss.eval(f_jk), loss.eval(-f_jk), 0.0, 0.0];
    linsolve::solve(matrix, rhs)
}

/// Sum over pairs `j < k` of the corrected pair loss for the observed labels.
pub fn corrected_loss_ranking(
    loss: &SurrogateLoss,
    f: &[f64],
    y_noisy: &LabelVector,
    spec: &NoiseSpec,
) -> Result<f64> {
    check_shapes(f, y_noisy, spec.num_labels())?;
    if f.len() < 2 {
        return Err(Error::shape("ranking loss needs at least two labels"));
    }
    let mut total = 0.0;
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            let table = PairwiseCorrectionTable::from_rates(
                spec.rho_pos(j),
                spec.rho_neg(j),
                spec.rho_pos(k),
                spec.rho_neg(k),
            );
            let label = JointLabel::of(y_noisy.get(j), y_noisy.get(k));
            total += table.apply(loss, label, f[j] - f[k]);
        }
    }
    Ok(total)
}

/// Threshold term for a dummy label scored `f0`: the independent correction
/// applied to `f_j - f0` for every label.
pub fn dummy_label_loss(
    loss: &SurrogateLoss,
    f: &[f64],
    f0: f64,
    y_noisy: &LabelVector,
    spec: &NoiseSpec,
) -> Result<f64> {
    check_shapes(f, y_noisy, spec.num_labels())?;
    check_finite(f0)?;
    Ok(f.iter()
        .enumerate()
        .map(|(j, &fj)| {
            let y = y_noisy.get(j);
            IndependentCoefficients::new(y, spec.rho_pos(j), spec.rho_neg(j))
                .apply(loss, f64::from(y) * (fj - f0))
        })
        .sum())
}

/// Label-wise loss for partial multi-label data, where irrelevant label `j`
/// shows up as a candidate with probability `rho[j]` and relevant labels are
/// never lost.
pub fn upml_loss_hamming(
    loss: &SurrogateLoss,
    f: &[f64],
    y_noisy: &LabelVector,
    rho: &[f64],
) -> Result<f64> {
    check_partial_rates(rho)?;
    check_shapes(f, y_noisy, rho.len())?;
    Ok(f.iter()
        .enumerate()
        .map(|(j, &fj)| {
            if y_noisy.is_relevant(j) {
                loss.eval(fj)
            } else {
                (loss.eval(-fj) - rho[j] * loss.eval(fj)) / (1.0 - rho[j])
            }
        })
        .sum())
}

/// Pairwise loss for partial multi-label data (see [`upml_loss_hamming`]).
pub fn upml_loss_ranking(
    loss: &SurrogateLoss,
    f: &[f64],
    y_noisy: &LabelVector,
    rho: &[f64],
) -> Result<f64> {
    check_partial_rates(rho)?;
    check_shapes(f, y_noisy, rho.len())?;
    if f.len() < 2 {
        return Err(Error::shape("ranking loss needs at least two labels"));
    }
    let mut total = 0.0;
    for j in 0..f.len() {
        for k in j + 1..f.len() {
            let d = f[j] - f[k];
            total += match JointLabel::of(y_noisy.get(j), y_noisy.get(k)) {
                JointLabel::PosNeg => loss.eval(d) / (1.0 - rho[k]),
                JointLabel::NegPos => loss.eval(-d) / (1.0 - rho[j]),
                JointLabel::NegNeg => {
                    (-rho[j] * loss.eval(d) - rho[k] * loss.eval(-d))
                        / ((1.0 - rho[j]) * (1.0 - rho[k]))
                }
                JointLabel::PosPos => 0.0,
            };
        }
    }
    Ok(total)
}

/// Noise-dependent constants of the estimation error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `max_j 1 / (1 - rho_pos[j] - rho_neg[j])`
    pub mu_independent: f64,
    /// `max_j (1 + |rho_neg[j] - rho_pos[j]|) / (1 - rho_pos[j] - rho_neg[j])^2`
    pub mu_dependent: f64,
    /// Largest pair constant `kappa_jk` over `j < k` (the largest `kappa_j`
    /// when there is a single label).
    pub kappa_max: f64,
}

pub fn compute_bound_constants(spec: &NoiseSpec) -> BoundConstants {
    let q = spec.num_labels();
    let mut mu_independent = 1.0f64;
    let mut mu_dependent = 1.0f64;
    for j in 0..q {
        let (p, n) = (spec.rho_pos(j), spec.rho_neg(j));
        let gap = 1.0 - p - n;
        mu_independent = mu_independent.max(1.0 / gap);
        mu_dependent = mu_dependent.max((1.0 + (n - p).abs()) / (gap * gap));
    }
    let kappa_max = if q < 2 {
        mu_independent
    } else {
        let mut kappas: alloc::vec::Vec<f64> = (0..q).map(|j| spec.kappa(j)).collect();
        kappas.sort_by(|a, b| b.total_cmp(a));
        kappas[0] * kappas[1]
    };
    BoundConstants {
        mu_independent,
        mu_dependent,
        kappa_max,
    }
}

fn check_shapes(f: &[f64], y: &LabelVector, q: usize) -> Result<()> {
    if f.len() != q || y.len() != q {
        return Err(Error::shape(format!(
            "{} scores, {} labels, {q} noise rates",
            f.len(),
            y.len()
        )));
    }
    if let Some(&bad) = f.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput(bad));
    }
    Ok(())
}

fn check_pair(spec: &NoiseSpec, j: usize, k: usize) -> Result<()> {
    if j == k || j >= spec.num_labels() || k >= spec.num_labels() {
        return Err(Error::InvalidPair(j, k));
    }
    Ok(())
}

fn check_partial_rates(rho: &[f64]) -> Result<()> {
    for (j, &r) in rho.iter().enumerate() {
        validate_pair(j, 0.0, r)?;
    }
    Ok(())
}

fn check_label(y: i8) -> Result<()> {
    if y == 1 || y == -1 {
        Ok(())
    } else {
        Err(Error::InvalidLabel(y as i64))
    }
}

fn check_finite(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(t))
    }
}
