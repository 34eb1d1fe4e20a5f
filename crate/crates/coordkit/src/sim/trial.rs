//! Single-realization simulation of the block-Markov coding schemes.
//!
//! One trial runs `B` blocks of length `n`. The first block carries the
//! initial covering index through a dedicated channel code; every middle
//! block covers the next block's decoder sequence and bins the auxiliary
//! sequence that describes the current one; the decoder recovers the
//! indices by joint-typicality search over `(Y, V)` and replays the
//! covered sequence one block later. Search failures are data, not
//! errors: the scheme continues with a fallback index and the event is
//! flagged.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::constraint::{AuxKernel, CausalStructure, StrictInstance};
use crate::error::{Error, Result};
use crate::prob::{Axis, FiniteDist, Kernel, SymbolBlock, TypicalityWindow};
use crate::region::capacity::channel_capacity;
use crate::rngutil::{derived_rng, sample_row, split_seed, StreamKind};
use crate::sim::codebook::{build_codebooks, Codebooks};
use crate::sim::config::{plan_rates, plan_rates_causal, CodeConfig, RatePlan};

/// Which achievability scheme a trial simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Block-Markov code with strictly causal decoding.
    Strict,
    /// Block-Markov code with causal decoding: the covering sequences
    /// are auxiliary, and the decoder samples its output from the
    /// current channel symbol and the decoded auxiliary letter.
    Causal,
    /// Common-randomness scheme for zero-capacity channels: the decoder
    /// sequence is shared in advance and the encoder correlates its
    /// input with it.
    ZeroCapacity,
}

/// A simulation problem: the scheme plus everything it codes against.
#[derive(Debug, Clone)]
pub enum SimProblem {
    Strict {
        instance: StrictInstance,
        aux: AuxKernel,
    },
    Causal {
        structure: CausalStructure,
    },
    ZeroCapacity {
        instance: StrictInstance,
    },
}

impl SimProblem {
    pub fn mode(&self) -> SimMode {
        match self {
            SimProblem::Strict { .. } => SimMode::Strict,
            SimProblem::Causal { .. } => SimMode::Causal,
            SimProblem::ZeroCapacity { .. } => SimMode::ZeroCapacity,
        }
    }
}

/// Per-block error-event flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockEvents {
    /// No covering codeword was jointly typical with the source block.
    pub covering_v: bool,
    /// No binned auxiliary codeword completed the covered pair.
    pub covering_w: bool,
    /// The decoder's pair search failed or returned the wrong indices.
    pub packing: bool,
    /// The init-block index decode failed or was wrong.
    pub init_decode: bool,
}

/// Outcome of one simulated realization of length `n * B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub mode: SimMode,
    pub n: usize,
    pub blocks: usize,
    pub eps_typ: f64,
    pub events: Vec<BlockEvents>,
    /// Joint `(u, x, y, v)` occurrence counts per block.
    pub block_counts: Vec<Vec<u64>>,
    /// Counts over the full realization.
    pub counts_full: Vec<u64>,
    /// Counts over the middle blocks `2..B-1`.
    pub counts_truncated: Vec<u64>,
    pub empirical_full: FiniteDist,
    pub empirical_truncated: FiniteDist,
    pub tv_full: f64,
    pub tv_truncated: f64,
    /// Robust typicality of each block against the target.
    pub block_typical: Vec<bool>,
    /// Robust typicality of the full realization against the target.
    pub full_typical: bool,
    /// `tv_full <= eps_typ`.
    pub success: bool,
}

/// Prepared simulation state: validated rates, typicality windows and
/// sampling kernels, reusable across trials.
pub struct SimRunner {
    problem: SimProblem,
    config: CodeConfig,
    plan: Option<RatePlan>,
    target: FiniteDist,
    dims: [usize; 4],
    win_cover: Option<TypicalityWindow>,
    win_bin: Option<TypicalityWindow>,
    win_pack: Option<TypicalityWindow>,
    win_init: Option<TypicalityWindow>,
    win_block: TypicalityWindow,
    win_full: TypicalityWindow,
    cover_marginal: Vec<f64>,
    aux_marginal: Vec<f64>,
    init_input: Vec<f64>,
    /// Encoder kernel for middle blocks: `X | (U, cover, aux)`.
    x_mid: Option<Kernel>,
    /// Encoder kernel for the last block: `X | (U, cover)`.
    x_last: Option<Kernel>,
    /// Decoder kernel `V | (Y, W2)` in causal mode.
    back: Option<Kernel>,
    source_row: Vec<f64>,
    channel: Kernel,
    n_cover: usize,
    n_aux: usize,
}

impl SimRunner {
    pub fn new(problem: SimProblem, config: CodeConfig) -> Result<Self> {
        let n = config.n;
        let eps = config.eps_typ;
        match &problem {
            SimProblem::Strict { instance, aux } => {
                let plan = plan_rates(instance, aux, config.delta)?;
                plan.require_feasible()?;
                crate::sim::codebook::book_sizes(&plan, &config)?;
                let joint5 = instance.joint_with_aux(aux)?;
                let target = instance.joint();
                let p = instance.profile();
                let q_uv = joint5.marginal(&[Axis::U, Axis::V])?;
                let q_uvw = joint5.marginal(&[Axis::U, Axis::V, Axis::W])?;
                let q_yvw = joint5.marginal(&[Axis::Y, Axis::V, Axis::W])?;
                let cap = channel_capacity(instance.channel(), 1e-10)?;
                // (x, y) law of the init block: P*(x) T(y|x).
                let mut init_xy = vec![0.0; p.x_size * p.y_size];
                for x in 0..p.x_size {
                    for y in 0..p.y_size {
                        init_xy[x * p.y_size + y] =
                            cap.argmax_input.table()[x] * instance.channel().row(x)[y];
                    }
                }
                let init_xy = FiniteDist::new(
                    vec![(Axis::X, p.x_size), (Axis::Y, p.y_size)],
                    init_xy,
                )?;
                Ok(Self {
                    dims: [p.u_size, p.x_size, p.y_size, p.v_size],
                    win_cover: Some(TypicalityWindow::new(&q_uv, n, eps)),
                    win_bin: Some(TypicalityWindow::new(&q_uvw, n, eps)),
                    win_pack: Some(TypicalityWindow::new(&q_yvw, n, eps)),
                    win_init: Some(TypicalityWindow::new(&init_xy, n, eps)),
                    win_block: TypicalityWindow::new(&target, n, eps),
                    win_full: TypicalityWindow::new(&target, n * config.blocks, eps),
                    cover_marginal: joint5.marginal(&[Axis::V])?.table().to_vec(),
                    aux_marginal: joint5.marginal(&[Axis::W])?.table().to_vec(),
                    init_input: cap.argmax_input.table().to_vec(),
                    x_mid: Some(joint5.conditional(&[Axis::X], &[Axis::U, Axis::V, Axis::W])?),
                    x_last: Some(joint5.conditional(&[Axis::X], &[Axis::U, Axis::V])?),
                    back: None,
                    source_row: instance.source().table().to_vec(),
                    channel: instance.channel().clone(),
                    n_cover: p.v_size,
                    n_aux: aux.w_size(),
                    plan: Some(plan),
                    target,
                    problem,
                    config,
                })
            }
            SimProblem::Causal { structure } => {
                let plan = plan_rates_causal(structure, config.delta)?;
                plan.require_feasible()?;
                crate::sim::codebook::book_sizes(&plan, &config)?;
                let joint6 = structure.joint();
                let target = joint6.marginal(&[Axis::U, Axis::X, Axis::Y, Axis::V])?;
                let nu = structure.source().sizes()[0];
                let nx = structure.front().target_sizes()[0];
                let ny = structure.channel().target_sizes()[0];
                let nv = structure.back().target_sizes()[0];
                let q_uw2 = joint6.marginal(&[Axis::U, Axis::W2])?;
                let q_uw2w1 = joint6.marginal(&[Axis::U, Axis::W2, Axis::W1])?;
                let q_yw2w1 = joint6.marginal(&[Axis::Y, Axis::W2, Axis::W1])?;
                let cap = channel_capacity(structure.channel(), 1e-10)?;
                let mut init_xy = vec![0.0; nx * ny];
                for x in 0..nx {
                    for y in 0..ny {
                        init_xy[x * ny + y] =
                            cap.argmax_input.table()[x] * structure.channel().row(x)[y];
                    }
                }
                let init_xy =
                    FiniteDist::new(vec![(Axis::X, nx), (Axis::Y, ny)], init_xy)?;
                Ok(Self {
                    dims: [nu, nx, ny, nv],
                    win_cover: Some(TypicalityWindow::new(&q_uw2, n, eps)),
                    win_bin: Some(TypicalityWindow::new(&q_uw2w1, n, eps)),
                    win_pack: Some(TypicalityWindow::new(&q_yw2w1, n, eps)),
                    win_init: Some(TypicalityWindow::new(&init_xy, n, eps)),
                    win_block: TypicalityWindow::new(&target, n, eps),
                    win_full: TypicalityWindow::new(&target, n * config.blocks, eps),
                    cover_marginal: joint6.marginal(&[Axis::W2])?.table().to_vec(),
                    aux_marginal: joint6.marginal(&[Axis::W1])?.table().to_vec(),
                    init_input: cap.argmax_input.table().to_vec(),
                    x_mid: Some(
                        joint6.conditional(&[Axis::X], &[Axis::U, Axis::W2, Axis::W1])?,
                    ),
                    x_last: Some(joint6.conditional(&[Axis::X], &[Axis::U, Axis::W2])?),
                    back: Some(structure.back().clone()),
                    source_row: structure.source().table().to_vec(),
                    channel: structure.channel().clone(),
                    n_cover: structure.w2_size(),
                    n_aux: structure.w1_size(),
                    plan: Some(plan),
                    target,
                    problem,
                    config,
                })
            }
            SimProblem::ZeroCapacity { instance } => {
                let target = instance.joint();
                let p = instance.profile();
                let joint = instance.joint();
                Ok(Self {
                    dims: [p.u_size, p.x_size, p.y_size, p.v_size],
                    win_cover: None,
                    win_bin: None,
                    win_pack: None,
                    win_init: None,
                    win_block: TypicalityWindow::new(&target, n, eps),
                    win_full: TypicalityWindow::new(&target, n * config.blocks, eps),
                    cover_marginal: joint.marginal(&[Axis::V])?.table().to_vec(),
                    aux_marginal: Vec::new(),
                    init_input: Vec::new(),
                    x_mid: None,
                    x_last: Some(joint.conditional(&[Axis::X], &[Axis::U, Axis::V])?),
                    back: None,
                    source_row: instance.source().table().to_vec(),
                    channel: instance.channel().clone(),
                    n_cover: p.v_size,
                    n_aux: 1,
                    plan: None,
                    target,
                    problem,
                    config,
                })
            }
        }
    }

    pub fn plan(&self) -> Option<&RatePlan> {
        self.plan.as_ref()
    }

    pub fn target(&self) -> &FiniteDist {
        &self.target
    }

    pub fn config(&self) -> &CodeConfig {
        &self.config
    }

    /// Builds the codebooks for one trial seed.
    pub fn codebooks(&self, trial_seed: u64) -> Result<Codebooks> {
        let plan = self
            .plan
            .as_ref()
            .ok_or_else(|| Error::Configuration("scheme uses no codebooks".into()))?;
        build_codebooks(
            trial_seed,
            plan,
            &self.config,
            &self.cover_marginal,
            &self.aux_marginal,
            &self.init_input,
        )
    }

    /// Runs one realization; a pure function of `(problem, config,
    /// trial_index)`.
    pub fn run_trial(&self, trial_index: u64) -> Result<TrialResult> {
        let trial_seed = split_seed(self.config.seed, trial_index);
        match self.problem.mode() {
            SimMode::ZeroCapacity => self.run_zero_capacity(trial_seed),
            SimMode::Strict | SimMode::Causal => self.run_block_markov(trial_seed),
        }
    }

    fn draw_source(&self, rng: &mut ChaCha12Rng, len: usize) -> Vec<u8> {
        (0..len)
            .map(|_| sample_row(&self.source_row, rng.gen::<f64>()) as u8)
            .collect()
    }

    fn transmit(&self, x: &[u8], rng: &mut ChaCha12Rng) -> Vec<u8> {
        x.iter()
            .map(|&xi| sample_row(self.channel.row(xi as usize), rng.gen::<f64>()) as u8)
            .collect()
    }

    fn run_zero_capacity(&self, trial_seed: u64) -> Result<TrialResult> {
        let total = self.config.total_len();
        let mut src = derived_rng(trial_seed, StreamKind::TrialSource, 0);
        let mut chan = derived_rng(trial_seed, StreamKind::TrialChannel, 0);
        let mut enc = derived_rng(trial_seed, StreamKind::TrialEncoder, 0);
        let mut dec = derived_rng(trial_seed, StreamKind::TrialDecoder, 0);
        let u_all = self.draw_source(&mut src, total);
        // Common randomness: the decoder sequence, shared in advance.
        let v_all: Vec<u8> = (0..total)
            .map(|_| sample_row(&self.cover_marginal, dec.gen::<f64>()) as u8)
            .collect();
        let x_kernel = self.x_last.as_ref().expect("prepared");
        let nv = self.dims[3];
        let x_all: Vec<u8> = (0..total)
            .map(|i| {
                let row = x_kernel.row(u_all[i] as usize * nv + v_all[i] as usize);
                sample_row(row, enc.gen::<f64>()) as u8
            })
            .collect();
        let y_all = self.transmit(&x_all, &mut chan);
        let events = vec![BlockEvents::default(); self.config.blocks];
        self.assemble(SimMode::ZeroCapacity, u_all, x_all, y_all, v_all, events)
    }

    fn run_block_markov(&self, trial_seed: u64) -> Result<TrialResult> {
        let n = self.config.n;
        let b_total = self.config.blocks;
        let total = n * b_total;
        let books = self.codebooks(trial_seed)?;
        let mut src = derived_rng(trial_seed, StreamKind::TrialSource, 0);
        let mut chan = derived_rng(trial_seed, StreamKind::TrialChannel, 0);
        let mut enc = derived_rng(trial_seed, StreamKind::TrialEncoder, 0);
        let mut dec = derived_rng(trial_seed, StreamKind::TrialDecoder, 0);

        let u_all = self.draw_source(&mut src, total);
        let block = |b: usize| &u_all[(b - 1) * n..b * n];

        let causal = matches!(self.problem.mode(), SimMode::Causal);
        let (nc, na) = (self.n_cover, self.n_aux);
        let win_cover = self.win_cover.as_ref().unwrap();
        let win_bin = self.win_bin.as_ref().unwrap();
        let win_pack = self.win_pack.as_ref().unwrap();
        let win_init = self.win_init.as_ref().unwrap();

        let mut events = vec![BlockEvents::default(); b_total];
        let mut x_all = vec![0u8; total];
        let mut y_all = vec![0u8; total];
        let mut v_all = vec![0u8; total];

        // Encoder-side covered sequences per block (indices into the
        // covering book) and decoder-side beliefs.
        let mut cover_enc: Vec<usize> = vec![0; b_total + 2];
        let mut cover_dec: Vec<usize> = vec![0; b_total + 2];

        // Initial covering: choose the sequence for block 2 from the
        // source of block 2.
        let mut buf2 =
            vec![0u64; (self.dims[0] * nc).max(self.dims[1] * self.dims[2])];
        let mut buf3 = vec![0u64; self.dims[0].max(self.dims[2]) * nc * na];
        let (m2, found) = lowest_pair_match(&books.v_book, |seq| {
            count2(block(2), seq, nc, &mut buf2);
            win_cover.admits(&buf2[..self.dims[0] * nc])
        });
        if !found {
            events[1].covering_v = true;
        }
        cover_enc[2] = m2;

        // Block 1: transmit the init index with the dedicated code.
        let x1 = &books.init_book[m2];
        x_all[..n].copy_from_slice(x1);
        let y1 = self.transmit(x1, &mut chan);
        y_all[..n].copy_from_slice(&y1);
        // Strictly causal first block output: the all-zeros sequence.
        // (v_all is zero-initialized.)
        let nx = self.dims[1];
        let (m2_hat, init_found) = lowest_pair_match(&books.init_book, |seq| {
            count2(seq, &y1, self.dims[2], &mut buf2);
            win_init.admits(&buf2[..nx * self.dims[2]])
        });
        if !init_found || m2_hat != m2 {
            events[0].init_decode = true;
        }
        cover_dec[2] = if init_found { m2_hat } else { 0 };
        let mut m_prev_dec = cover_dec[2];

        let nu = self.dims[0];
        let ny = self.dims[2];
        let x_mid = self.x_mid.as_ref().unwrap();
        let x_last = self.x_last.as_ref().unwrap();

        for b in 2..b_total {
            // Covering for the next block.
            let (m_next, found) = lowest_pair_match(&books.v_book, |seq| {
                count2(block(b + 1), seq, nc, &mut buf2);
                win_cover.admits(&buf2[..nu * nc])
            });
            if !found {
                events[b].covering_v = true;
            }
            cover_enc[b + 1] = m_next;

            // Binning: complete (U_b, cover_b) with an auxiliary word
            // carrying (m_next, l).
            let cov_b = &books.v_book[cover_enc[b]];
            let (l_b, found) = lowest_index_match(books.l_size, |l| {
                let seq = &books.w_book[m_next * books.l_size + l];
                count3(block(b), cov_b, seq, nc, na, &mut buf3);
                win_bin.admits(&buf3[..nu * nc * na])
            });
            if !found {
                events[b - 1].covering_w = true;
            }
            let aux_b = &books.w_book[m_next * books.l_size + l_b];

            // Channel input of the middle block.
            for i in 0..n {
                let row = x_mid.row(
                    (block(b)[i] as usize * nc + cov_b[i] as usize) * na + aux_b[i] as usize,
                );
                x_all[(b - 1) * n + i] = sample_row(row, enc.gen::<f64>()) as u8;
            }
            let y_b = self.transmit(&x_all[(b - 1) * n..b * n], &mut chan);
            y_all[(b - 1) * n..b * n].copy_from_slice(&y_b);

            // Decoder output during block b.
            let dec_cov = &books.v_book[cover_dec[b]];
            self.emit_decoder_block(
                causal,
                dec_cov,
                &y_b,
                &mut v_all[(b - 1) * n..b * n],
                &mut dec,
            );

            // Packing: recover (m, l) from (Y_b, decoded cover_b).
            let (pair, found) = lowest_pair_match(&books.w_book, |seq| {
                count3(&y_b, dec_cov, seq, nc, na, &mut buf3);
                win_pack.admits(&buf3[..ny * nc * na])
            });
            let (m_hat, l_hat) = if found {
                (pair / books.l_size, pair % books.l_size)
            } else {
                events[b - 1].packing = true;
                (m_prev_dec, 0)
            };
            if found && (m_hat != m_next || l_hat != l_b) {
                events[b - 1].packing = true;
            }
            cover_dec[b + 1] = m_hat;
            m_prev_dec = m_hat;
        }

        // Last block: the encoder correlates with its own covered
        // sequence only; nothing further is transmitted.
        let cov_last = &books.v_book[cover_enc[b_total]];
        for i in 0..n {
            let row = x_last.row(block(b_total)[i] as usize * nc + cov_last[i] as usize);
            x_all[(b_total - 1) * n + i] = sample_row(row, enc.gen::<f64>()) as u8;
        }
        let y_last = self.transmit(&x_all[(b_total - 1) * n..], &mut chan);
        y_all[(b_total - 1) * n..].copy_from_slice(&y_last);
        let dec_cov = books.v_book[cover_dec[b_total]].clone();
        let mut v_block = vec![0u8; n];
        self.emit_decoder_block(causal, &dec_cov, &y_last, &mut v_block, &mut dec);
        v_all[(b_total - 1) * n..].copy_from_slice(&v_block);

        let mode = self.problem.mode();
        self.assemble(mode, u_all, x_all, y_all, v_all, events)
    }

    /// Emits the decoder sequence of one block. Strictly causal mode
    /// replays the covered sequence; causal mode samples from the back
    /// kernel fed by the current channel output and the decoded
    /// auxiliary letter.
    fn emit_decoder_block(
        &self,
        causal: bool,
        cover: &[u8],
        y: &[u8],
        out: &mut [u8],
        dec: &mut ChaCha12Rng,
    ) {
        if causal {
            let back = self.back.as_ref().expect("causal back kernel");
            let nw2 = self.n_cover;
            for i in 0..out.len() {
                let row = back.row(y[i] as usize * nw2 + cover[i] as usize);
                out[i] = sample_row(row, dec.gen::<f64>()) as u8;
            }
        } else {
            out.copy_from_slice(cover);
        }
    }

    fn assemble(
        &self,
        mode: SimMode,
        u_all: Vec<u8>,
        x_all: Vec<u8>,
        y_all: Vec<u8>,
        v_all: Vec<u8>,
        events: Vec<BlockEvents>,
    ) -> Result<TrialResult> {
        let n = self.config.n;
        let b_total = self.config.blocks;
        let [nu, nx, ny, nv] = self.dims;
        let cells = nu * nx * ny * nv;
        let mut block_counts = Vec::with_capacity(b_total);
        let mut counts_full = vec![0u64; cells];
        let mut counts_truncated = vec![0u64; cells];
        let mut block_typical = Vec::with_capacity(b_total);
        for b in 1..=b_total {
            let mut counts = vec![0u64; cells];
            for i in (b - 1) * n..b * n {
                let idx = ((u_all[i] as usize * nx + x_all[i] as usize) * ny
                    + y_all[i] as usize)
                    * nv
                    + v_all[i] as usize;
                counts[idx] += 1;
            }
            for (full, &c) in counts_full.iter_mut().zip(counts.iter()) {
                *full += c;
            }
            if b >= 2 && b < b_total {
                for (t, &c) in counts_truncated.iter_mut().zip(counts.iter()) {
                    *t += c;
                }
            }
            block_typical.push(self.win_block.admits(&counts));
            block_counts.push(counts);
        }
        let full_typical = self.win_full.admits(&counts_full);
        let axes = [(Axis::U, nu),
            (Axis::X, nx),
            (Axis::Y, ny),
            (Axis::V, nv)];
        let total = (n * b_total) as f64;
        let empirical_full = FiniteDist::from_parts(
            axes.iter().map(|&(a, _)| a).collect(),
            axes.iter().map(|&(_, s)| s).collect(),
            counts_full.iter().map(|&c| c as f64 / total).collect(),
        );
        let trunc_total = (n * (b_total - 2)) as f64;
        let empirical_truncated = FiniteDist::from_parts(
            axes.iter().map(|&(a, _)| a).collect(),
            axes.iter().map(|&(_, s)| s).collect(),
            counts_truncated
                .iter()
                .map(|&c| c as f64 / trunc_total)
                .collect(),
        );
        let tv_full = empirical_full.tv_distance(&self.target)?;
        let tv_truncated = empirical_truncated.tv_distance(&self.target)?;
        Ok(TrialResult {
            mode,
            n,
            blocks: b_total,
            eps_typ: self.config.eps_typ,
            events,
            block_counts,
            counts_full,
            counts_truncated,
            empirical_full,
            empirical_truncated,
            tv_full,
            tv_truncated,
            block_typical,
            full_typical,
            success: tv_full <= self.config.eps_typ,
        })
    }
}

/// Convenience wrapper preparing a runner for a single trial.
pub fn run_trial(
    problem: &SimProblem,
    config: &CodeConfig,
    trial_index: u64,
) -> Result<TrialResult> {
    SimRunner::new(problem.clone(), config.clone())?.run_trial(trial_index)
}

/// Concatenates the blocks and tests the concatenation's typicality.
/// Serves as the oracle for the mixing property: whenever every block is
/// typical, the concatenation must be as well.
pub fn concatenation_check(
    blocks: &[SymbolBlock],
    target: &FiniteDist,
    eps: f64,
) -> Result<bool> {
    let cat = SymbolBlock::concat(blocks)?;
    crate::prob::is_typical(&cat, target, eps)
}

fn count2(a: &[u8], b: &[u8], nb: usize, buf: &mut [u64]) {
    buf.iter_mut().for_each(|c| *c = 0);
    for i in 0..a.len() {
        buf[a[i] as usize * nb + b[i] as usize] += 1;
    }
}

fn count3(a: &[u8], b: &[u8], c: &[u8], nb: usize, nc: usize, buf: &mut [u64]) {
    buf.iter_mut().for_each(|x| *x = 0);
    for i in 0..a.len() {
        buf[(a[i] as usize * nb + b[i] as usize) * nc + c[i] as usize] += 1;
    }
}

/// Lowest index whose codeword satisfies the predicate, with a flag; the
/// fallback index is zero.
fn lowest_pair_match(book: &[Vec<u8>], mut check: impl FnMut(&[u8]) -> bool) -> (usize, bool) {
    for (i, seq) in book.iter().enumerate() {
        if check(seq) {
            return (i, true);
        }
    }
    (0, false)
}

fn lowest_index_match(count: usize, mut check: impl FnMut(usize) -> bool) -> (usize, bool) {
    for i in 0..count {
        if check(i) {
            return (i, true);
        }
    }
    (0, false)
}
