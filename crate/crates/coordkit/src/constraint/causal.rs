//! Evaluation and maximization of the causal-decoder information
//! constraint `I(W1;Y|W2) - I(W1,W2;U)`.
//!
//! A causal structure factors as `P(u) Q(x,w1,w2|u) T(y|x) Q(v|y,w2)`.
//! The objective depends only on the front kernel; the back kernel only
//! controls which target conditional `Q(v|u,x,y)` the structure induces.
//! Maximization therefore parameterizes the front as
//! `target_x(x|u) * theta1(w1,w2|u,x)` (so the requested input marginal
//! is exact by construction) and treats the remaining consistency
//! requirement, matching the requested `Q(v|u,x,y)`, as a quadratic
//! penalty with doubling weight. Certification requires the residual to
//! vanish: a value is reported achievable only when the best iterate
//! matches the requested marginals within `1e-6` and its objective is
//! nonnegative.

use rand::Rng;

use crate::constraint::instance::{AuxKernel, CausalStructure, StrictInstance};
use crate::constraint::report::{Certificate, ConstraintReport, Verdict};
use crate::constraint::strict::{maximize_strict, MaximizeOpts};
use crate::error::{Error, Result};
use crate::prob::info::LN_2;
use crate::prob::{mutual_information, Axis, FiniteDist, Kernel};
use crate::region::capacity::channel_capacity;
use crate::rngutil::{derived_rng, StreamKind};

/// Residual below which the induced marginals count as matching.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// A causal evaluation problem: fixed source and channel plus the
/// requested input marginal `X | U` and decoder conditional
/// `V | (U, X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalInstance {
    source: FiniteDist,
    channel: Kernel,
    target_x: Kernel,
    target_v: Kernel,
}

impl CausalInstance {
    pub fn new(
        source: FiniteDist,
        channel: Kernel,
        target_x: Kernel,
        target_v: Kernel,
    ) -> Result<Self> {
        if source.axes() != [Axis::U] {
            return Err(Error::InstanceFormat("source must be a distribution over u".into()));
        }
        if channel.given_axes() != [Axis::X] || channel.target_axes() != [Axis::Y] {
            return Err(Error::InstanceFormat("channel must be a kernel y | x".into()));
        }
        if target_x.given_axes() != [Axis::U] || target_x.target_axes() != [Axis::X] {
            return Err(Error::InstanceFormat("target_x must be a kernel x | u".into()));
        }
        if target_v.given_axes() != [Axis::U, Axis::X, Axis::Y]
            || target_v.target_axes() != [Axis::V]
        {
            return Err(Error::InstanceFormat(
                "target_v must be a kernel v | (u, x, y)".into(),
            ));
        }
        let nu = source.sizes()[0];
        let nx = target_x.target_sizes()[0];
        let ny = channel.target_sizes()[0];
        if target_x.given_sizes()[0] != nu
            || channel.given_sizes()[0] != nx
            || target_v.given_sizes() != [nu, nx, ny]
        {
            return Err(Error::InstanceFormat("alphabet sizes disagree".into()));
        }
        Ok(Self {
            source,
            channel,
            target_x,
            target_v,
        })
    }

    pub fn source(&self) -> &FiniteDist {
        &self.source
    }

    pub fn channel(&self) -> &Kernel {
        &self.channel
    }

    pub fn target_x(&self) -> &Kernel {
        &self.target_x
    }

    pub fn target_v(&self) -> &Kernel {
        &self.target_v
    }

    fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.source.sizes()[0],
            self.target_x.target_sizes()[0],
            self.channel.target_sizes()[0],
            self.target_v.target_sizes()[0],
        )
    }

    /// True when the requested decoder conditional ignores the current
    /// channel output, i.e. the target has strictly-causal shape.
    pub fn target_v_ignores_y(&self) -> bool {
        let (nu, nx, ny, nv) = self.dims();
        for u in 0..nu {
            for x in 0..nx {
                let first = self.target_v.row((u * nx + x) * ny);
                for y in 1..ny {
                    let row = self.target_v.row((u * nx + x) * ny + y);
                    if row
                        .iter()
                        .zip(first.iter())
                        .any(|(a, b)| (a - b).abs() > 1e-9)
                    {
                        return false;
                    }
                }
                let _ = nv;
            }
        }
        true
    }
}

/// Objective value of one causal structure together with the target
/// marginals it induces.
#[derive(Debug, Clone)]
pub struct CausalObjective {
    pub value: f64,
    pub induced_target: Kernel,
    pub induced_x: Kernel,
}

/// Evaluates `I(W1;Y|W2) - I(W1,W2;U)` and reports which decoder
/// conditional and input marginal the structure realizes.
pub fn objective_causal(structure: &CausalStructure) -> Result<CausalObjective> {
    let joint = structure.joint();
    let value = mutual_information(&joint, &[Axis::W1], &[Axis::Y], Some(&[Axis::W2]))?
        - mutual_information(&joint, &[Axis::W1, Axis::W2], &[Axis::U], None)?;
    let induced_target = joint.conditional(&[Axis::V], &[Axis::U, Axis::X, Axis::Y])?;
    let induced_x = joint.conditional(&[Axis::X], &[Axis::U])?;
    Ok(CausalObjective {
        value,
        induced_target,
        induced_x,
    })
}

/// Options for [`maximize_causal`].
#[derive(Debug, Clone)]
pub struct CausalOpts {
    /// Auxiliary sizes; default to the ceiling `|U||X||Y||V| + 2`.
    pub w1_size: Option<usize>,
    pub w2_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CausalOpts {
    fn default() -> Self {
        Self {
            w1_size: None,
            w2_size: None,
            restarts: 8,
            max_iters: 200,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// A search point: `theta1` holds the per-(u, x) rows over
/// `(w1, w2)`, `theta2` the back-kernel rows over `v`.
#[derive(Clone)]
pub struct CausalPoint {
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
}

/// Internal ascent state over `theta1(w1,w2 | u,x)` and
/// `theta2(v | y,w2)` with the requested `X | U` marginal built in.
struct CausalSearch<'a> {
    inst: &'a CausalInstance,
    nu: usize,
    nx: usize,
    ny: usize,
    nv: usize,
    nw1: usize,
    nw2: usize,
    /// `P(u) target_x(x|u)` per (u, x).
    a: Vec<f64>,
    /// `P(u) target_x(x|u) T(y|x)` per (u, x, y).
    mass: Vec<f64>,
    h_u: f64,
}


impl<'a> CausalSearch<'a> {
    fn new(inst: &'a CausalInstance, nw1: usize, nw2: usize) -> Self {
        let (nu, nx, ny, nv) = inst.dims();
        let mut a = vec![0.0; nu * nx];
        let mut mass = vec![0.0; nu * nx * ny];
        for u in 0..nu {
            for x in 0..nx {
                let w = inst.source.table()[u] * inst.target_x.row(u)[x];
                a[u * nx + x] = w;
                for y in 0..ny {
                    mass[(u * nx + x) * ny + y] = w * inst.channel.row(x)[y];
                }
            }
        }
        let h_u = crate::prob::info::entropy_of_table(inst.source.table());
        Self {
            inst,
            nu,
            nx,
            ny,
            nv,
            nw1,
            nw2,
            a,
            mass,
            h_u,
        }
    }

    /// Objective `I(W1;Y|W2) - I(W1,W2;U)` written through entropies of
    /// marginals that are linear in `theta1`:
    /// `H(Y,W2) - H(W2) - H(Y,W1,W2) + H(U,W1,W2) - H(U)`.
    fn objective(&self, theta1: &[f64]) -> f64 {
        let (nu, nx, ny, nw1, nw2) = (self.nu, self.nx, self.ny, self.nw1, self.nw2);
        let mut m_yw2 = vec![0.0; ny * nw2];
        let mut m_w2 = vec![0.0; nw2];
        let mut m_yw12 = vec![0.0; ny * nw1 * nw2];
        let mut m_uw12 = vec![0.0; nu * nw1 * nw2];
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                if self.a[cell] == 0.0 {
                    continue;
                }
                for w1 in 0..nw1 {
                    for w2 in 0..nw2 {
                        let p = self.a[cell] * theta1[(cell * nw1 + w1) * nw2 + w2];
                        if p == 0.0 {
                            continue;
                        }
                        m_w2[w2] += p;
                        m_uw12[(u * nw1 + w1) * nw2 + w2] += p;
                        for y in 0..ny {
                            let q = p * self.inst.channel.row(x)[y];
                            m_yw2[y * nw2 + w2] += q;
                            m_yw12[(y * nw1 + w1) * nw2 + w2] += q;
                        }
                    }
                }
            }
        }
        use crate::prob::info::entropy_of_table as h;
        h(&m_yw2) - h(&m_w2) - h(&m_yw12) + h(&m_uw12) - self.h_u
    }

    /// Weighted squared mismatch between the induced and requested
    /// decoder conditionals, plus the worst row total variation.
    fn residual(&self, theta1: &[f64], theta2: &[f64]) -> (f64, f64) {
        let (nu, nx, ny, nv, nw2) = (self.nu, self.nx, self.ny, self.nv, self.nw2);
        let q2 = self.w2_given_ux(theta1);
        let mut sq = 0.0;
        let mut worst = 0.0f64;
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                for y in 0..ny {
                    let m = self.mass[cell * ny + y];
                    if m == 0.0 {
                        continue;
                    }
                    let mut row_tv = 0.0;
                    let mut row_sq = 0.0;
                    for v in 0..nv {
                        let mut ind = 0.0;
                        for w2 in 0..nw2 {
                            ind += q2[cell * nw2 + w2] * theta2[(y * nw2 + w2) * nv + v];
                        }
                        let d = ind - self.inst.target_v.row((u * nx + x) * ny + y)[v];
                        row_tv += d.abs();
                        row_sq += d * d;
                    }
                    sq += m * row_sq;
                    worst = worst.max(row_tv / 2.0);
                }
            }
        }
        (sq, worst)
    }

    fn w2_given_ux(&self, theta1: &[f64]) -> Vec<f64> {
        let (nu, nx, nw1, nw2) = (self.nu, self.nx, self.nw1, self.nw2);
        let mut q2 = vec![0.0; nu * nx * nw2];
        for cell in 0..nu * nx {
            for w1 in 0..nw1 {
                for w2 in 0..nw2 {
                    q2[cell * nw2 + w2] += theta1[(cell * nw1 + w1) * nw2 + w2];
                }
            }
        }
        q2
    }

    fn penalized(&self, p: &CausalPoint, mu: f64) -> f64 {
        self.objective(&p.theta1) - mu * self.residual(&p.theta1, &p.theta2).0
    }

    /// Analytic gradient of the penalized objective, normalized per row.
    fn gradients(&self, p: &CausalPoint, mu: f64) -> (Vec<f64>, Vec<f64>) {
        let (nu, nx, ny, nv, nw1, nw2) = (self.nu, self.nx, self.ny, self.nv, self.nw1, self.nw2);
        // Rebuild the objective marginals.
        let mut m_yw2 = vec![0.0; ny * nw2];
        let mut m_w2 = vec![0.0; nw2];
        let mut m_yw12 = vec![0.0; ny * nw1 * nw2];
        let mut m_uw12 = vec![0.0; nu * nw1 * nw2];
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                for w1 in 0..nw1 {
                    for w2 in 0..nw2 {
                        let pr = self.a[cell] * p.theta1[(cell * nw1 + w1) * nw2 + w2];
                        if pr == 0.0 {
                            continue;
                        }
                        m_w2[w2] += pr;
                        m_uw12[(u * nw1 + w1) * nw2 + w2] += pr;
                        for y in 0..ny {
                            let q = pr * self.inst.channel.row(x)[y];
                            m_yw2[y * nw2 + w2] += q;
                            m_yw12[(y * nw1 + w1) * nw2 + w2] += q;
                        }
                    }
                }
            }
        }
        let q2 = self.w2_given_ux(&p.theta1);
        // Induced rows and their deviations, reused by both gradients.
        let mut dev = vec![0.0; nu * nx * ny * nv];
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                for y in 0..ny {
                    for v in 0..nv {
                        let mut ind = 0.0;
                        for w2 in 0..nw2 {
                            ind += q2[cell * nw2 + w2] * p.theta2[(y * nw2 + w2) * nv + v];
                        }
                        dev[(cell * ny + y) * nv + v] =
                            ind - self.inst.target_v.row((u * nx + x) * ny + y)[v];
                    }
                }
            }
        }
        let ln = |m: f64| m.max(1e-300).ln();
        let mut g1 = vec![0.0; nu * nx * nw1 * nw2];
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                if self.a[cell] == 0.0 {
                    continue;
                }
                for w1 in 0..nw1 {
                    for w2 in 0..nw2 {
                        let mut g = ln(m_w2[w2]) - ln(m_uw12[(u * nw1 + w1) * nw2 + w2]);
                        for y in 0..ny {
                            let t = self.inst.channel.row(x)[y];
                            if t > 0.0 {
                                g += t
                                    * (ln(m_yw12[(y * nw1 + w1) * nw2 + w2])
                                        - ln(m_yw2[y * nw2 + w2]));
                            }
                        }
                        g /= LN_2;
                        // Penalty part: d residual / d theta1 does not
                        // depend on w1.
                        let mut pen = 0.0;
                        for y in 0..ny {
                            let m = self.mass[cell * ny + y];
                            if m == 0.0 {
                                continue;
                            }
                            for v in 0..nv {
                                pen += m
                                    * 2.0
                                    * dev[(cell * ny + y) * nv + v]
                                    * p.theta2[(y * nw2 + w2) * nv + v];
                            }
                        }
                        g1[(cell * nw1 + w1) * nw2 + w2] = g - mu * pen / self.a[cell].max(1e-300);
                    }
                }
            }
        }
        let mut g2 = vec![0.0; ny * nw2 * nv];
        for y in 0..ny {
            for w2 in 0..nw2 {
                for v in 0..nv {
                    let mut pen = 0.0;
                    for u in 0..nu {
                        for x in 0..nx {
                            let cell = u * nx + x;
                            let m = self.mass[cell * ny + y];
                            if m == 0.0 {
                                continue;
                            }
                            pen += m * 2.0 * dev[(cell * ny + y) * nv + v] * q2[cell * nw2 + w2];
                        }
                    }
                    g2[(y * nw2 + w2) * nv + v] = -mu * pen;
                }
            }
        }
        (g1, g2)
    }

    fn mirror_step(&self, p: &CausalPoint, g1: &[f64], g2: &[f64], eta: f64) -> CausalPoint {
        let row_step = |rows: &[f64], grads: &[f64], width: usize, out: &mut Vec<f64>| {
            for r in 0..rows.len() / width {
                let row = &rows[r * width..(r + 1) * width];
                let g = &grads[r * width..(r + 1) * width];
                let gmax = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut z = 0.0;
                for i in 0..width {
                    let val = row[i].max(1e-300) * (eta * (g[i] - gmax)).exp();
                    out[r * width + i] = val;
                    z += val;
                }
                for i in 0..width {
                    out[r * width + i] /= z;
                }
            }
        };
        let mut theta1 = vec![0.0; p.theta1.len()];
        let mut theta2 = vec![0.0; p.theta2.len()];
        row_step(&p.theta1, g1, self.nw1 * self.nw2, &mut theta1);
        row_step(&p.theta2, g2, self.nv, &mut theta2);
        CausalPoint { theta1, theta2 }
    }

    /// Penalized mirror ascent with backtracking and doubling weight.
    fn ascend(&self, p: &mut CausalPoint, opts: &CausalOpts) -> usize {
        let mut iters = 0;
        let mut mu = 1.0;
        while mu <= (1u64 << 20) as f64 {
            let mut l_cur = self.penalized(p, mu);
            let mut eta = 0.5;
            let mut stalled = 0;
            for _ in 0..opts.max_iters {
                iters += 1;
                let (g1, g2) = self.gradients(p, mu);
                let mut accepted = false;
                while eta > 1e-10 {
                    let trial = self.mirror_step(p, &g1, &g2, eta);
                    let l_try = self.penalized(&trial, mu);
                    if l_try >= l_cur {
                        let gain = l_try - l_cur;
                        *p = trial;
                        l_cur = l_try;
                        accepted = true;
                        if gain < opts.tol {
                            stalled += 1;
                        } else {
                            stalled = 0;
                            eta *= 1.3;
                        }
                        break;
                    }
                    eta *= 0.5;
                }
                if !accepted || stalled >= 3 {
                    break;
                }
            }
            let (_, worst) = self.residual(&p.theta1, &p.theta2);
            if worst <= RESIDUAL_TOL {
                break;
            }
            mu *= 2.0;
        }
        iters
    }

    fn structure(&self, p: &CausalPoint) -> Result<CausalStructure> {
        let (nu, nx, ny, nv, nw1, nw2) = (self.nu, self.nx, self.ny, self.nv, self.nw1, self.nw2);
        let mut front = vec![0.0; nu * nx * nw1 * nw2];
        for u in 0..nu {
            for x in 0..nx {
                let cell = u * nx + x;
                let tx = self.inst.target_x.row(u)[x];
                for w1 in 0..nw1 {
                    for w2 in 0..nw2 {
                        front[((u * nx + x) * nw1 + w1) * nw2 + w2] =
                            tx * p.theta1[(cell * nw1 + w1) * nw2 + w2];
                    }
                }
            }
        }
        let front = Kernel::new(
            vec![(Axis::U, nu)],
            vec![(Axis::X, nx), (Axis::W1, nw1), (Axis::W2, nw2)],
            front,
        )?;
        let back = Kernel::new(
            vec![(Axis::Y, ny), (Axis::W2, nw2)],
            vec![(Axis::V, nv)],
            p.theta2.clone(),
        )?;
        CausalStructure::new(
            self.inst.source.clone(),
            self.inst.channel.clone(),
            front,
            back,
        )
    }
}

/// Builds the causal structure that replays a strictly-causal
/// certificate: `W1` carries the strict auxiliary variable, `W2` carries
/// the decoder output, and the back kernel copies `W2` regardless of the
/// channel output. Its objective equals the strict objective of the
/// certificate.
pub fn embed_strict_certificate(
    inst: &CausalInstance,
    strict_target: &Kernel,
    cert: &AuxKernel,
    nw1: usize,
    nw2: usize,
) -> Result<CausalPoint> {
    let (nu, nx, ny, nv) = inst.dims();
    let nw = cert.w_size();
    if nw1 < nw || nw2 < nv {
        return Err(Error::Configuration(format!(
            "embedding needs w1 >= {nw} and w2 >= {nv}"
        )));
    }
    // theta1(w1, w2 | u, x) = q(v = w2 | u, x) * r(w = w1 | u, x, v = w2)
    let mut theta1 = vec![0.0; nu * nx * nw1 * nw2];
    for u in 0..nu {
        for x in 0..nx {
            let cell = u * nx + x;
            let tx = inst.target_x.row(u)[x];
            for v in 0..nv {
                // strict_target rows hold Q(x, v | u).
                let q_xv = strict_target.row(u)[x * nv + v];
                let q_v_given_x = if tx > 0.0 { q_xv / tx } else { 1.0 / nv as f64 };
                let r = cert.kernel().row((u * nx + x) * nv + v);
                for w in 0..nw {
                    theta1[(cell * nw1 + w) * nw2 + v] = q_v_given_x * r[w];
                }
            }
        }
    }
    // Unreachable rows of theta1 stay valid distributions.
    for cell in 0..nu * nx {
        let row = &mut theta1[cell * nw1 * nw2..(cell + 1) * nw1 * nw2];
        let z: f64 = row.iter().sum();
        if z <= 0.0 {
            row.iter_mut().for_each(|p| *p = 1.0 / (nw1 * nw2) as f64);
        } else {
            row.iter_mut().for_each(|p| *p /= z);
        }
    }
    // Back kernel: copy w2 into v; letters beyond |V| are unreachable.
    let mut theta2 = vec![0.0; ny * nw2 * nv];
    for y in 0..ny {
        for w2 in 0..nw2 {
            let v = w2.min(nv - 1);
            theta2[(y * nw2 + w2) * nv + v] = 1.0;
        }
    }
    Ok(CausalPoint { theta1, theta2 })
}


/// Maximizes the causal information constraint over structures matching
/// the requested `(target_x, target_v)` marginals.
pub fn maximize_causal(inst: &CausalInstance, opts: &CausalOpts) -> Result<ConstraintReport> {
    let (nu, nx, ny, nv) = inst.dims();
    let ceiling = nu * nx * ny * nv + 2;
    let nw1 = opts.w1_size.unwrap_or(ceiling);
    let nw2 = opts.w2_size.unwrap_or(ceiling);
    if nw1 < nx.max(1) || nw2 < 1 {
        return Err(Error::Configuration(
            "w1_size must fit the channel input alphabet and w2_size must be positive".into(),
        ));
    }
    let search = CausalSearch::new(inst, nw1, nw2);

    // Averaged back kernel: the best single V | (Y, W2=const) fit.
    let avg_back = |w2_rows: usize| -> Vec<f64> {
        let mut theta2 = vec![0.0; ny * w2_rows * nv];
        for y in 0..ny {
            let mut num = vec![0.0; nv];
            let mut den = 0.0;
            for u in 0..nu {
                for x in 0..nx {
                    let m = search.mass[(u * nx + x) * ny + y];
                    den += m;
                    for v in 0..nv {
                        num[v] += m * inst.target_v.row((u * nx + x) * ny + y)[v];
                    }
                }
            }
            for w2 in 0..w2_rows {
                for v in 0..nv {
                    theta2[(y * w2_rows + w2) * nv + v] = if den > 0.0 {
                        num[v] / den
                    } else {
                        1.0 / nv as f64
                    };
                }
            }
        }
        theta2
    };

    let mut starts: Vec<CausalPoint> = Vec::new();
    // Seed: W1 = X, W2 constant.
    {
        let mut theta1 = vec![0.0; nu * nx * nw1 * nw2];
        for u in 0..nu {
            for x in 0..nx {
                theta1[((u * nx + x) * nw1 + x) * nw2] = 1.0;
            }
        }
        starts.push(CausalPoint {
            theta1,
            theta2: avg_back(nw2),
        });
    }
    // Seed: both auxiliaries constant.
    {
        let mut theta1 = vec![0.0; nu * nx * nw1 * nw2];
        for cell in 0..nu * nx {
            theta1[cell * nw1 * nw2] = 1.0;
        }
        starts.push(CausalPoint {
            theta1,
            theta2: avg_back(nw2),
        });
    }
    // Seed: embedded strictly-causal certificate, available whenever the
    // requested decoder conditional ignores the channel output.
    if inst.target_v_ignores_y() && nw2 >= nv {
        let mut rows = Vec::with_capacity(nu * nx * nv);
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    rows.push(inst.target_x.row(u)[x] * inst.target_v.row((u * nx + x) * ny)[v]);
                }
            }
        }
        let strict_target = Kernel::new(
            vec![(Axis::U, nu)],
            vec![(Axis::X, nx), (Axis::V, nv)],
            rows,
        )?;
        let strict_inst = StrictInstance::new(
            inst.source.clone(),
            inst.channel.clone(),
            strict_target.clone(),
        )?;
        let strict_report = maximize_strict(
            &strict_inst,
            &MaximizeOpts {
                restarts: opts.restarts.min(8),
                seed: opts.seed,
                ..MaximizeOpts::default()
            },
        )?;
        if let Certificate::Strict(cert) = &strict_report.certificate {
            if nw1 >= cert.w_size() {
                let p = embed_strict_certificate(inst, &strict_target, cert, nw1, nw2)?;
                starts.push(CausalPoint {
                    theta1: p.theta1,
                    theta2: p.theta2,
                });
            }
        }
    }
    // Random restarts.
    for restart in 0..opts.restarts {
        let mut rng = derived_rng(opts.seed, StreamKind::Restart, 7000 + restart as u64);
        let dirichlet_rows = |rng: &mut rand_chacha::ChaCha12Rng, rows: usize, width: usize| {
            let mut out = vec![0.0; rows * width];
            for r in 0..rows {
                let mut z = 0.0;
                for i in 0..width {
                    let e = -(1.0 - rng.gen::<f64>()).ln();
                    out[r * width + i] = e;
                    z += e;
                }
                for i in 0..width {
                    out[r * width + i] /= z;
                }
            }
            out
        };
        starts.push(CausalPoint {
            theta1: dirichlet_rows(&mut rng, nu * nx, nw1 * nw2),
            theta2: dirichlet_rows(&mut rng, ny * nw2, nv),
        });
    }

    let mut best_feasible: Option<(f64, CausalPoint, f64)> = None;
    let mut best_any: Option<(f64, CausalPoint, f64)> = None;
    let mut feasible_seed_value = f64::NEG_INFINITY;
    let mut total_iters = 0;
    let starts_used = starts.len();
    for mut p in starts {
        // Record seed feasibility before ascending.
        let seed_value = search.objective(&p.theta1);
        let (_, seed_res) = search.residual(&p.theta1, &p.theta2);
        if seed_res <= RESIDUAL_TOL {
            feasible_seed_value = feasible_seed_value.max(seed_value);
            if best_feasible.as_ref().is_none_or(|(v, _, _)| seed_value > *v) {
                best_feasible = Some((seed_value, p.clone(), seed_res));
            }
        }
        total_iters += search.ascend(&mut p, opts);
        let value = search.objective(&p.theta1);
        let (_, res) = search.residual(&p.theta1, &p.theta2);
        if res <= RESIDUAL_TOL
            && best_feasible.as_ref().is_none_or(|(v, _, _)| value > *v)
        {
            best_feasible = Some((value, p.clone(), res));
        }
        if best_any.as_ref().is_none_or(|(v, _, _)| value > *v) {
            best_any = Some((value, p, res));
        }
    }

    let (mut value, point, residual) = best_feasible
        .clone()
        .or(best_any)
        .ok_or_else(|| Error::Numeric("no causal iterate produced".into()))?;
    if value < 0.0 && value > -1e-12 {
        value = 0.0;
    }
    let structure = search.structure(&point)?;
    let capacity = channel_capacity(inst.channel(), 1e-10)?.capacity;
    let verdict = if residual <= RESIDUAL_TOL && value >= 0.0 {
        Verdict::Achievable
    } else {
        Verdict::Undetermined
    };
    let lower = if best_feasible.is_some() && feasible_seed_value > f64::NEG_INFINITY {
        feasible_seed_value
    } else {
        value
    };
    Ok(ConstraintReport {
        value,
        certificate: Certificate::Causal {
            front: structure.front().clone(),
            back: structure.back().clone(),
        },
        lower_bound: lower,
        upper_bound: capacity,
        closed_form: None,
        verdict,
        restarts_used: starts_used,
        iterations: total_iters,
        marginal_residual: Some(residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::hb;
    use crate::prob::Axis::{U, V, X, Y};

    fn product_causal_instance(eps: f64) -> CausalInstance {
        // X uniform independent of U; V drawn uniformly regardless.
        CausalInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(eps).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2)], vec![0.5; 4]).unwrap(),
            Kernel::new(
                vec![(U, 2), (X, 2), (Y, 2)],
                vec![(V, 2)],
                vec![0.5; 16],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn w1_equals_x_seed_reaches_channel_information() {
        let inst = product_causal_instance(0.25);
        let report = maximize_causal(&inst, &CausalOpts::default()).unwrap();
        let expect = 1.0 - hb(0.25).unwrap();
        assert!(
            report.value >= expect - 1e-6,
            "value {} below {expect}",
            report.value
        );
        assert_eq!(report.verdict, Verdict::Achievable);
        assert!(report.marginal_residual.unwrap() <= RESIDUAL_TOL);
    }

    #[test]
    fn constant_auxiliaries_score_zero() {
        // With both auxiliaries constant the objective vanishes whatever
        // the front kernel does.
        let inst = product_causal_instance(0.1);
        let search = CausalSearch::new(&inst, 2, 2);
        let mut theta1 = vec![0.0; 2 * 2 * 2 * 2];
        for cell in 0..4 {
            theta1[cell * 4] = 1.0;
        }
        assert!(search.objective(&theta1).abs() < 1e-12);
    }

    #[test]
    fn objective_causal_reports_induced_marginals() {
        // W1 = X, W2 constant, V sampled from Y alone.
        let front = Kernel::new(
            vec![(U, 2)],
            vec![(X, 2), (Axis::W1, 2), (Axis::W2, 1)],
            vec![0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        let back = Kernel::new(
            vec![(Y, 2), (Axis::W2, 1)],
            vec![(V, 2)],
            vec![1.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        let s = CausalStructure::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.25).unwrap(),
            front,
            back,
        )
        .unwrap();
        let obj = objective_causal(&s).unwrap();
        assert!((obj.value - (1.0 - hb(0.25).unwrap())).abs() < 1e-9);
        // Induced X | U is uniform.
        for u in 0..2 {
            assert!((obj.induced_x.row(u)[0] - 0.5).abs() < 1e-12);
        }
        // Induced decoder conditional copies y.
        for u in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let row = obj.induced_target.row((u * 2 + x) * 2 + y);
                    assert!((row[y] - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        use crate::rngutil::{derived_rng, StreamKind};
        use rand::Rng;

        let inst = CausalInstance::new(
            FiniteDist::new(vec![(U, 2)], vec![0.35, 0.65]).unwrap(),
            Kernel::bsc(0.2).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2)], vec![0.7, 0.3, 0.4, 0.6]).unwrap(),
            Kernel::new(
                vec![(U, 2), (X, 2), (Y, 2)],
                vec![(V, 2)],
                vec![
                    0.8, 0.2, 0.3, 0.7, 0.6, 0.4, 0.5, 0.5, 0.2, 0.8, 0.9, 0.1, 0.3, 0.7,
                    0.4, 0.6,
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let search = CausalSearch::new(&inst, 2, 2);
        let mut rng = derived_rng(5, StreamKind::Restart, 0);
        let mut rand_rows = |rows: usize, width: usize| {
            let mut out = vec![0.0; rows * width];
            for r in 0..rows {
                let mut z = 0.0;
                for i in 0..width {
                    let e = 0.1 + rng.gen::<f64>();
                    out[r * width + i] = e;
                    z += e;
                }
                for i in 0..width {
                    out[r * width + i] /= z;
                }
            }
            out
        };
        let point = CausalPoint {
            theta1: rand_rows(4, 4),
            theta2: rand_rows(4, 2),
        };
        let mu = 3.0;
        let (g1, g2) = search.gradients(&point, mu);
        let h = 1e-6;
        for i in 0..point.theta1.len() {
            let mut plus = point.clone();
            plus.theta1[i] += h;
            let mut minus = point.clone();
            minus.theta1[i] -= h;
            let num = (search.penalized(&plus, mu) - search.penalized(&minus, mu)) / (2.0 * h);
            // The stored gradient is per-row preconditioned by the cell
            // mass; undo it for the comparison.
            let cell = i / 4;
            let analytic = g1[i] * search.a[cell];
            assert!(
                (num - analytic).abs() < 1e-5,
                "theta1[{i}]: numeric {num} vs analytic {analytic}"
            );
        }
        for i in 0..point.theta2.len() {
            let mut plus = point.clone();
            plus.theta2[i] += h;
            let mut minus = point.clone();
            minus.theta2[i] -= h;
            let num = (search.penalized(&plus, mu) - search.penalized(&minus, mu)) / (2.0 * h);
            assert!(
                (num - g2[i]).abs() < 1e-5,
                "theta2[{i}]: numeric {num} vs analytic {}",
                g2[i]
            );
        }
    }

    #[test]
    fn zero_capacity_with_correlation_requirement_stays_uncertified() {
        // Over pure noise, a decoder conditional that demands correlation
        // with the source cannot be certified.
        let target_v = Kernel::new(
            vec![(U, 2), (X, 2), (Y, 2)],
            vec![(V, 2)],
            vec![
                1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, // u = 0 -> v = 0
                0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, // u = 1 -> v = 1
            ],
        )
        .unwrap();
        let inst = CausalInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.5).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2)], vec![0.5; 4]).unwrap(),
            target_v,
        )
        .unwrap();
        let report = maximize_causal(
            &inst,
            &CausalOpts {
                restarts: 4,
                max_iters: 80,
                ..CausalOpts::default()
            },
        )
        .unwrap();
        assert_ne!(report.verdict, Verdict::Achievable);
        assert!(report.upper_bound.abs() < 1e-9);
    }
}
