//! Unbiased risk estimators for multi-label learning under class-conditional
//! multi-label noise (CCMN).
//!
//! Every label `j` of an instance is flipped independently: a relevant label
//! (`+1`) is dropped with probability `rho_pos[j]` and an irrelevant label
//! (`-1`) is switched on with probability `rho_neg[j]`. Given those rates, the
//! corrected losses in [`correction`] have the same expectation over the noise
//! as the ordinary surrogate losses on the clean labels, so minimizing them on
//! noisy data targets the clean risk.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, checkpoints and the
//! command line live in the `ccmn` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adam;
pub mod correction;
pub mod dataset;
mod error;
pub mod labels;
pub mod linsolve;
pub mod metrics;
pub mod model;
pub mod noise;
pub mod objective;
pub mod presets;
pub mod rng;
pub mod split;
pub mod surrogate;
pub mod synth;
pub mod trainer;
pub mod verify;

pub use crate::dataset::{Features, MultiLabelDataset, Row};
pub use crate::error::{Error, Result};
pub use crate::labels::{LabelVector, NoiseSpec};
pub use crate::model::{Architecture, DecisionModel};
pub use crate::objective::{Objective, ObjectiveKind};
pub use crate::surrogate::{LossKind, SurrogateLoss};
