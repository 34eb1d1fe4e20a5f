//! Monte-Carlo aggregation over independent trials.

use crate::error::Result;
use crate::sim::config::CodeConfig;
use crate::sim::trial::{SimProblem, SimRunner, TrialResult};

/// Fraction of blocks flagged per event type, over eligible blocks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EventRates {
    pub covering_v: f64,
    pub covering_w: f64,
    pub packing: f64,
    pub init_decode: f64,
}

/// Aggregate statistics of a trial batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    /// Fraction of trials with `tv_full > eps_typ`.
    pub pe_estimate: f64,
    pub mean_tv_full: f64,
    pub mean_tv_truncated: f64,
    pub event_rates: EventRates,
    /// Normal-approximation 95% half width on `pe_estimate`.
    pub ci_halfwidth: f64,
}

/// Runs `trials` independent realizations with per-trial derived seeds
/// and returns the summary together with every trial outcome.
pub fn monte_carlo_trials(
    problem: &SimProblem,
    config: &CodeConfig,
    trials: usize,
) -> Result<(MonteCarloSummary, Vec<TrialResult>)> {
    let runner = SimRunner::new(problem.clone(), config.clone())?;
    let mut results = Vec::with_capacity(trials);
    for t in 0..trials {
        results.push(runner.run_trial(t as u64)?);
    }
    let tn = trials as f64;
    let failures = results.iter().filter(|r| !r.success).count() as f64;
    let pe = failures / tn;
    let mean_tv_full = results.iter().map(|r| r.tv_full).sum::<f64>() / tn;
    let mean_tv_truncated = results.iter().map(|r| r.tv_truncated).sum::<f64>() / tn;
    let b = config.blocks;
    let mut rates = EventRates::default();
    // Eligible blocks per trial: covering spans blocks 2..B, binning and
    // packing the middle blocks, init decoding happens once.
    let cover_opps = (b - 1) as f64 * tn;
    let mid_opps = (b - 2) as f64 * tn;
    for r in &results {
        for e in &r.events {
            rates.covering_v += u8::from(e.covering_v) as f64;
            rates.covering_w += u8::from(e.covering_w) as f64;
            rates.packing += u8::from(e.packing) as f64;
            rates.init_decode += u8::from(e.init_decode) as f64;
        }
    }
    rates.covering_v /= cover_opps;
    rates.covering_w /= mid_opps.max(1.0);
    rates.packing /= mid_opps.max(1.0);
    rates.init_decode /= tn;
    let ci_halfwidth = 1.96 * (pe * (1.0 - pe) / tn).sqrt();
    Ok((
        MonteCarloSummary {
            trials,
            pe_estimate: pe,
            mean_tv_full,
            mean_tv_truncated,
            event_rates: rates,
            ci_halfwidth,
        },
        results,
    ))
}

/// Summary-only variant of [`monte_carlo_trials`].
pub fn monte_carlo(
    problem: &SimProblem,
    config: &CodeConfig,
    trials: usize,
) -> Result<MonteCarloSummary> {
    Ok(monte_carlo_trials(problem, config, trials)?.0)
}
