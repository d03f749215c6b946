//! Per-instance training objectives with their gradients with respect to the
//! model scores.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::correction::{IndependentCoefficients, JointLabel, PairwiseCorrectionTable};
use crate::correction;
use crate::error::{Error, Result};
use crate::labels::{LabelVector, NoiseSpec};
use crate::surrogate::SurrogateLoss;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    HammingCorrected,
    RankingCorrected,
    HammingPlain,
    RankingPlain,
    UpmlHamming,
    UpmlRanking,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 6] = [
        ObjectiveKind::HammingCorrected,
        ObjectiveKind::RankingCorrected,
        ObjectiveKind::HammingPlain,
        ObjectiveKind::RankingPlain,
        ObjectiveKind::UpmlHamming,
        ObjectiveKind::UpmlRanking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::HammingCorrected => "hamming-corrected",
            ObjectiveKind::RankingCorrected => "ranking-corrected",
            ObjectiveKind::HammingPlain => "hamming-plain",
            ObjectiveKind::RankingPlain => "ranking-plain",
            ObjectiveKind::UpmlHamming => "upml-hamming",
            ObjectiveKind::UpmlRanking => "upml-ranking",
        }
    }

    /// Pairwise objectives; these are the ones that may carry a dummy label.
    pub fn is_ranking(self) -> bool {
        matches!(
            self,
            ObjectiveKind::RankingCorrected | ObjectiveKind::RankingPlain | ObjectiveKind::UpmlRanking
        )
    }

    /// Objectives that ignore the noise rates.
    pub fn is_plain(self) -> bool {
        matches!(self, ObjectiveKind::HammingPlain | ObjectiveKind::RankingPlain)
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ObjectiveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown objective '{s}'")))
    }
}

/// An objective bound to a surrogate loss and a noise specification, with the
/// correction coefficients precomputed.
///
/// With a dummy label the model has `q + 1` outputs and the last one is the
/// per-instance threshold score `f0`.
#[derive(Debug, Clone)]
pub struct Objective {
    kind: ObjectiveKind,
    loss: SurrogateLoss,
    num_labels: usize,
    dummy: bool,
    /// Indexed `[j][0]` for an observed `-1`, `[j][1]` for `+1`.
    independent: Vec<[IndependentCoefficients; 2]>,
    /// Pair tables in `(0,1), (0,2), ..., (1,2), ...` order.
    pairs: Vec<PairwiseCorrectionTable>,
    partial_rates: Vec<f64>,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, loss: SurrogateLoss, spec: &NoiseSpec, dummy: bool) -> Result<Self> {
        let q = spec.num_labels();
        if dummy && !kind.is_ranking() {
            return Err(Error::InvalidConfig(format!(
                "the dummy threshold label only applies to ranking objectives, not {kind}"
            )));
        }
        if kind.is_ranking() && q < 2 {
            return Err(Error::shape("ranking objectives need at least two labels"));
        }
        if matches!(kind, ObjectiveKind::UpmlHamming | ObjectiveKind::UpmlRanking) && !spec.is_partial() {
            return Err(Error::InvalidNoiseSpec(format!(
                "{kind} needs rho_pos = 0 on every label"
            )));
        }
        let mut objective = Objective {
            kind,
            loss,
            num_labels: q,
            dummy,
            independent: Vec::new(),
            pairs: Vec::new(),
            partial_rates: Vec::new(),
        };
        match kind {
            ObjectiveKind::HammingCorrected | ObjectiveKind::RankingCorrected => {
                objective.independent = (0..q)
                    .map(|j| {
                        let (p, n) = (spec.rho_pos(j), spec.rho_neg(j));
                        [IndependentCoefficients::new(-1, p, n), IndependentCoefficients::new(1, p, n)]
                    })
                    .collect();
                if kind == ObjectiveKind::RankingCorrected {
                    for j in 0..q {
                        for k in j + 1..q {
                            objective.pairs.push(correction::pairwise_correction_table(spec, j, k)?);
                        }
                    }
                }
            }
            ObjectiveKind::UpmlHamming | ObjectiveKind::UpmlRanking => {
                objective.partial_rates = spec.rho_neg_all().to_vec();
            }
            ObjectiveKind::HammingPlain | ObjectiveKind::RankingPlain => {}
        }
        Ok(objective)
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn loss(&self) -> &SurrogateLoss {
        &self.loss
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn has_dummy(&self) -> bool {
        self.dummy
    }

    /// Number of model outputs this objective consumes.
    pub fn output_dim(&self) -> usize {
        self.num_labels + usize::from(self.dummy)
    }

    /// Objective value for one instance.
    pub fn loss_value(&self, scores: &[f64], y: &LabelVector) -> f64 {
        self.evaluate(scores, y, None)
    }

    /// Objective value for one instance; `grad` receives `d loss / d scores`.
    pub fn loss_and_grad(&self, scores: &[f64], y: &LabelVector, grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        self.evaluate(scores, y, Some(grad))
    }

    fn evaluate(&self, scores: &[f64], y: &LabelVector, mut grad: Option<&mut [f64]>) -> f64 {
        debug_assert_eq!(scores.len(), self.output_dim());
        debug_assert_eq!(y.len(), self.num_labels);
        let q = self.num_labels;
        let phi = &self.loss;
        let mut total = 0.0;
        match self.kind {
            ObjectiveKind::HammingCorrected => {
                for j in 0..q {
                    let s = y.sign(j);
                    let c = self.independent_coefficients(j, y.get(j));
                    let m = s * scores[j];
                    total += c.apply(phi, m);
                    if let Some(g) = grad.as_deref_mut() {
                        g[j] += c.margin_derivative(phi, m) * s;
                    }
                }
            }
            ObjectiveKind::HammingPlain => {
                for j in 0..q {
                    let s = y.sign(j);
                    let m = s * scores[j];
                    total += phi.eval(m);
                    if let Some(g) = grad.as_deref_mut() {
                        g[j] += phi.eval_derivative(m) * s;
                    }
                }
            }
            ObjectiveKind::UpmlHamming => {
                for j in 0..q {
                    let (v, d) = self.partial_label_term(j, y.get(j), scores[j]);
                    total += v;
                    if let Some(g) = grad.as_deref_mut() {
                        g[j] += d;
                    }
                }
            }
            ObjectiveKind::RankingCorrected => {
                let mut pair = 0;
                for j in 0..q {
                    for k in j + 1..q {
                        let table = &self.pairs[pair];
                        pair += 1;
                        let label = JointLabel::of(y.get(j), y.get(k));
                        let d = scores[j] - scores[k];
                        total += table.apply(phi, label, d);
                        if let Some(g) = grad.as_deref_mut() {
                            let dd = table.derivative(phi, label, d);
                            g[j] += dd;
                            g[k] -= dd;
                        }
                    }
                }
                if self.dummy {
                    let f0 = scores[q];
                    for j in 0..q {
                        let s = y.sign(j);
                        let c = self.independent_coefficients(j, y.get(j));
                        let m = s * (scores[j] - f0);
                        total += c.apply(phi, m);
                        if let Some(g) = grad.as_deref_mut() {
                            let dm = c.margin_derivative(phi, m) * s;
                            g[j] += dm;
                            g[q] -= dm;
                        }
                    }
                }
            }
            ObjectiveKind::RankingPlain => {
                for j in 0..q {
                    for k in j + 1..q {
                        if y.get(j) == y.get(k) {
                            continue;
                        }
                        let s = y.sign(j);
                        let m = s * (scores[j] - scores[k]);
                        total += phi.eval(m);
                        if let Some(g) = grad.as_deref_mut() {
                            let dd = phi.eval_derivative(m) * s;
                            g[j] += dd;
                            g[k] -= dd;
                        }
                    }
                }
                if self.dummy {
                    let f0 = scores[q];
                    for j in 0..q {
                        let s = y.sign(j);
                        let m = s * (scores[j] - f0);
                        total += phi.eval(m);
                        if let Some(g) = grad.as_deref_mut() {
                            let dm = phi.eval_derivative(m) * s;
                            g[j] += dm;
                            g[q] -= dm;
                        }
                    }
                }
            }
            ObjectiveKind::UpmlRanking => {
                let rho = &self.partial_rates;
                for j in 0..q {
                    for k in j + 1..q {
                        let d = scores[j] - scores[k];
                        let (v, dd) = match JointLabel::of(y.get(j), y.get(k)) {
                            JointLabel::PosNeg => {
                                let w = 1.0 / (1.0 - rho[k]);
                                (w * phi.eval(d), w * phi.eval_derivative(d))
                            }
                            JointLabel::NegPos => {
                                let w = 1.0 / (1.0 - rho[j]);
                                (w * phi.eval(-d), -w * phi.eval_derivative(-d))
                            }
                            JointLabel::NegNeg => {
                                let w = 1.0 / ((1.0 - rho[j]) * (1.0 - rho[k]));
                                (
                                    w * (-rho[j] * phi.eval(d) - rho[k] * phi.eval(-d)),
                                    w * (-rho[j] * phi.eval_derivative(d) + rho[k] * phi.eval_derivative(-d)),
                                )
                            }
                            JointLabel::PosPos => (0.0, 0.0),
                        };
                        total += v;
                        if let Some(g) = grad.as_deref_mut() {
                            g[j] += dd;
                            g[k] -= dd;
                        }
                    }
                }
                if self.dummy {
                    let f0 = scores[q];
                    for j in 0..q {
                        let (v, d) = self.partial_label_term(j, y.get(j), scores[j] - f0);
                        total += v;
                        if let Some(g) = grad.as_deref_mut() {
                            g[j] += d;
                            g[q] -= d;
                        }
                    }
                }
            }
        }
        total
    }

    #[inline]
    fn independent_coefficients(&self, j: usize, y: i8) -> &IndependentCoefficients {
        &self.independent[j][usize::from(y > 0)]
    }

    /// Partial-label term for score `f` and its derivative in `f`.
    #[inline]
    fn partial_label_term(&self, j: usize, y: i8, f: f64) -> (f64, f64) {
        let phi = &self.loss;
        if y > 0 {
            (phi.eval(f), phi.eval_derivative(f))
        } else {
            let r = self.partial_rates[j];
            (
                (phi.eval(-f) - r * phi.eval(f)) / (1.0 - r),
                (-phi.eval_derivative(-f) - r * phi.eval_derivative(f)) / (1.0 - r),
            )
        }
    }
}
