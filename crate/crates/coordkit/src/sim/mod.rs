//! Monte-Carlo simulation of the achievability schemes: the block-Markov
//! code for strictly causal decoding, its causal variant, and the
//! common-randomness scheme for zero-capacity channels.

pub mod codebook;
pub mod config;
pub mod monte;
pub mod trial;

pub use codebook::{build_codebooks, Codebooks};
pub use config::{plan_rates, plan_rates_causal, CodeConfig, RatePlan};
pub use monte::{monte_carlo, monte_carlo_trials, EventRates, MonteCarloSummary};
pub use trial::{
    concatenation_check, run_trial, BlockEvents, SimMode, SimProblem, SimRunner, TrialResult,
};
