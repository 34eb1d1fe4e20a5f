//! Achievable empirical-coordination regions for a point-to-point
//! source-channel system.
//!
//! The toolkit evaluates and maximizes the single-letter information
//! constraints that characterize which joint distributions of source,
//! channel input, channel output and decoder output can be realized as
//! empirical frequencies by codes with a non-causal encoder and a
//! strictly causal or causal decoder. It also locates optimal utilities
//! over the achievable set, maps distortion-cost trade-off regions, and
//! simulates the block-Markov random coding scheme that attains the
//! region, measuring convergence of empirical distributions in total
//! variation.

pub mod closed_form;
pub mod constraint;
pub mod error;
pub mod prob;
pub mod region;
mod rngutil;
pub mod sim;

pub use error::{Error, Result};
