//! Convex margin losses `phi(t)` used inside every surrogate objective.
//!
//! Square and hinge losses are evaluated on the margin clipped to
//! `[-clamp_bound, clamp_bound]`, which bounds them by a finite `Theta`. The
//! sigmoid loss is bounded by 1 without clipping.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub const DEFAULT_CLAMP_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    /// `(1 - t)^2`
    Square,
    /// `max(0, 1 - t)`
    Hinge,
    /// `1 / (1 + e^t)`
    Sigmoid,
}

impl LossKind {
    pub const ALL: [LossKind; 3] = [LossKind::Square, LossKind::Hinge, LossKind::Sigmoid];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Square => "square",
            LossKind::Hinge => "hinge",
            LossKind::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(LossKind::Square),
            "hinge" => Ok(LossKind::Hinge),
            "sigmoid" => Ok(LossKind::Sigmoid),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown loss '{other}' (expected square, hinge or sigmoid)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateLoss {
    kind: LossKind,
    clamp_bound: f64,
}

impl SurrogateLoss {
    pub fn new(kind: LossKind, clamp_bound: f64) -> Result<Self> {
        if !(clamp_bound.is_finite() && clamp_bound > 0.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "clamp bound must be positive and finite, got {clamp_bound}"
            )));
        }
        Ok(SurrogateLoss { kind, clamp_bound })
    }

    pub fn square() -> Self {
        SurrogateLoss::from(LossKind::Square)
    }

    pub fn hinge() -> Self {
        SurrogateLoss::from(LossKind::Hinge)
    }

    pub fn sigmoid() -> Self {
        SurrogateLoss::from(LossKind::Sigmoid)
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    pub fn clamp_bound(&self) -> f64 {
        self.clamp_bound
    }

    /// `phi(t)`, rejecting non-finite margins.
    pub fn value(&self, t: f64) -> Result<f64> {
        check_finite(t)?;
        Ok(self.eval(t))
    }

    /// `phi'(t)`, rejecting non-finite margins. The hinge subgradient at `t = 1`
    /// is 0; square and hinge have derivative 0 where the margin is clipped.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        check_finite(t)?;
        Ok(self.eval_derivative(t))
    }

    /// Supremum of `phi` over the clipped domain.
    pub fn bound(&self) -> f64 {
        let b = self.clamp_bound;
        match self.kind {
            LossKind::Square => (1.0 + b) * (1.0 + b),
            LossKind::Hinge => 1.0 + b,
            LossKind::Sigmoid => 1.0,
        }
    }

    /// Lipschitz constant of `phi` on the clipped domain.
    pub fn lipschitz(&self) -> f64 {
        match self.kind {
            LossKind::Square => 2.0 * (1.0 + self.clamp_bound),
            LossKind::Hinge => 1.0,
            LossKind::Sigmoid => 0.25,
        }
    }

    #[inline]
    pub(crate) fn eval(&self, t: f64) -> f64 {
        match self.kind {
            LossKind::Square => {
                let r = 1.0 - self.clip(t);
                r * r
            }
            LossKind::Hinge => {
                let r = 1.0 - self.clip(t);
                if r > 0.0 {
                    r
                } else {
                    0.0
                }
            }
            LossKind::Sigmoid => logistic_of_neg(t),
        }
    }

    #[inline]
    pub(crate) fn eval_derivative(&self, t: f64) -> f64 {
        let inside = t >= -self.clamp_bound && t <= self.clamp_bound;
        match self.kind {
            LossKind::Square => {
                if inside {
                    -2.0 * (1.0 - t)
                } else {
                    0.0
                }
            }
            LossKind::Hinge => {
                if inside && t < 1.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            LossKind::Sigmoid => {
                let s = logistic_of_neg(t);
                -s * (1.0 - s)
            }
        }
    }

    #[inline]
    fn clip(&self, t: f64) -> f64 {
        t.clamp(-self.clamp_bound, self.clamp_bound)
    }
}

impl From<LossKind> for SurrogateLoss {
    fn from(kind: LossKind) -> Self {
        SurrogateLoss {
            kind,
            clamp_bound: DEFAULT_CLAMP_BOUND,
        }
    }
}

/// `1 / (1 + e^t)` without overflow for large `|t|`.
#[inline]
fn logistic_of_neg(t: f64) -> f64 {
    if t >= 0.0 {
        let e = libm::exp(-t);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + libm::exp(t))
    }
}

#[inline]
fn check_finite(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(t))
    }
}
