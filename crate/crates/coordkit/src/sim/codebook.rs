//! Random codebook construction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rngutil::{derived_rng, sample_row, StreamKind};
use crate::sim::config::{CodeConfig, RatePlan};

/// The three codebooks of one block-Markov code realization: covering
/// sequences (decoder-output letters, or the second auxiliary in causal
/// mode), binned auxiliary sequences, and the init-block channel
/// codewords drawn from the capacity-achieving input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebooks {
    pub n: usize,
    pub m_size: usize,
    pub l_size: usize,
    /// `m -> v^n(m)`, i.i.d. from the covering marginal.
    pub v_book: Vec<Vec<u8>>,
    /// `m * l_size + l -> w^n(m, l)`, i.i.d. from the auxiliary marginal.
    pub w_book: Vec<Vec<u8>>,
    /// `m -> x^n(m)`, i.i.d. from the capacity-achieving input.
    pub init_book: Vec<Vec<u8>>,
}

/// Codebook sizes implied by a rate plan at block length `n`:
/// `|M| = ceil(2^{nR})` and `|M_L| = ceil(2^{n R_L})`.
pub fn book_sizes(plan: &RatePlan, config: &CodeConfig) -> Result<(usize, usize)> {
    plan.require_feasible()?;
    let n = config.n as f64;
    // The guard uses the rounded-exponent form so it can be stated
    // without overflow whatever the rates are.
    let e1 = (n * plan.r).ceil();
    let e2 = (n * (plan.r + plan.r_l)).ceil();
    if e1 >= 62.0 || e2 >= 62.0 {
        return Err(Error::Configuration(format!(
            "codebook guard exceeded: needs 2^{e1:.0} + 2^{e2:.0} codewords, cap is {}",
            config.codeword_cap
        )));
    }
    let guard = (1u64 << e1 as u32) + (1u64 << e2 as u32);
    if guard > config.codeword_cap {
        return Err(Error::Configuration(format!(
            "codebook guard exceeded: needs {guard} codewords, cap is {}",
            config.codeword_cap
        )));
    }
    let m_size = (2f64.powf(n * plan.r)).ceil() as usize;
    let l_size = (2f64.powf(n * plan.r_l)).ceil() as usize;
    Ok((m_size.max(1), l_size.max(1)))
}

fn draw_book(
    seed: u64,
    kind: StreamKind,
    count: usize,
    n: usize,
    marginal: &[f64],
) -> Vec<Vec<u8>> {
    let mut book = Vec::with_capacity(count);
    for index in 0..count {
        let mut rng = derived_rng(seed, kind, index as u64);
        let mut seq = Vec::with_capacity(n);
        for _ in 0..n {
            seq.push(sample_row(marginal, rng.gen::<f64>()) as u8);
        }
        book.push(seq);
    }
    book
}

/// Draws the three codebooks as a pure function of the seed: each entry
/// comes from its own `(seed, book, index)` stream, so single sequences
/// are reproducible without generating the rest.
pub fn build_codebooks(
    seed: u64,
    plan: &RatePlan,
    config: &CodeConfig,
    covering_marginal: &[f64],
    aux_marginal: &[f64],
    init_input: &[f64],
) -> Result<Codebooks> {
    let (m_size, l_size) = book_sizes(plan, config)?;
    Ok(Codebooks {
        n: config.n,
        m_size,
        l_size,
        v_book: draw_book(seed, StreamKind::BookV, m_size, config.n, covering_marginal),
        w_book: draw_book(
            seed,
            StreamKind::BookW,
            m_size * l_size,
            config.n,
            aux_marginal,
        ),
        init_book: draw_book(seed, StreamKind::BookInit, m_size, config.n, init_input),
    })
}
