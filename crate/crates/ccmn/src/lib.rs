//! File formats, checkpoints and the `ccmn` command line for learning from
//! multi-label data with class-conditional label noise. The numerical work is
//! done by [`ccmn_core`].

pub mod checkpoint;
pub mod cli;
pub mod dataio;
mod error;
pub mod noisefile;
pub mod report;

pub use ccmn_core;
pub use crate::error::{Error, Result};
