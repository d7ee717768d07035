//! Latent ordinal model (LOMo) for weakly supervised classification of
//! vector sequences.
//!
//! A model holds `M` linear sub-event templates and a table of `M!` ordering
//! costs. A sequence is scored by greedily detecting one frame per template
//! (with a temporal exclusion window around each detection), averaging the
//! template responses and adding the cost of the temporal order in which the
//! detections occurred. Training is stochastic subgradient descent on an
//! L2-regularized hinge loss.
//!
//! The crate is `no_std` and only needs an allocator. File formats and the
//! command-line front end live in the `lomo` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cv;
pub mod error;
pub mod folds;
pub mod inference;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod pca;
pub mod perm;
pub mod preprocess;
pub mod rng;
pub mod sequence;
pub mod synth;
pub mod training;

pub use error::{Error, Result};
pub use inference::{latent_assign, score, InferenceConfig, LatentAssignment};
pub use model::LomoModel;
pub use rng::Rng;
pub use sequence::FrameSequence;
pub use training::{train, CostUpdate, LabeledSequence, TrainConfig, Variant};
