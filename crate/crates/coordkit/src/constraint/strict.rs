//! Evaluation and maximization of the strictly-causal information
//! constraint `I(W;Y|V) - I(U;V,W)` over the auxiliary kernel
//! `Q(w|u,x,v)`.
//!
//! Writing the joint as `P(u) Q(x,v|u) Q(w|u,x,v) T(y|x)`, the objective
//! decomposes as `H(Y|V) - H(U) - H(Y,V,W) + H(U,V,W)`. The first two
//! terms do not depend on the auxiliary kernel; of the remaining two,
//! `-H(Y,V,W)` is convex and `H(U,V,W)` is concave in the kernel (each
//! entropy is concave in its marginal, which is linear in the kernel).
//! Maximization therefore proceeds by difference-of-convex ascent: the
//! convex part is replaced by its tangent at the current iterate and the
//! concave surrogate is maximized over the product of simplices by
//! mirror ascent with backtracking. Each outer step can only increase
//! the true objective, so the best value found is a certified lower
//! bound on the maximum.

use rand::Rng;

use crate::constraint::bounds::analytic_bounds;
use crate::constraint::instance::{AuxKernel, StrictInstance};
use crate::constraint::report::{Certificate, ConstraintReport, Verdict};
use crate::error::{Error, Result};
use crate::prob::info::{entropy_of_table, LN_2};
use crate::prob::{mutual_information, Axis, Kernel};
use crate::rngutil::{derived_rng, StreamKind};

/// Options for [`maximize_strict`].
#[derive(Debug, Clone)]
pub struct MaximizeOpts {
    /// Auxiliary alphabet size; defaults to the support ceiling
    /// `|U||X||V| + 1`.
    pub w_size: Option<usize>,
    /// Number of random restarts beyond the deterministic seeds.
    pub restarts: usize,
    /// Maximum outer ascent iterations per start.
    pub max_iters: usize,
    /// Stop when an outer iteration improves the objective by less.
    pub tol: f64,
    pub seed: u64,
    /// Additional warm starts, e.g. blended certificates of nearby
    /// instances. Smaller auxiliary alphabets are zero-padded.
    pub extra_seeds: Vec<AuxKernel>,
}

impl Default for MaximizeOpts {
    fn default() -> Self {
        Self {
            w_size: None,
            restarts: 16,
            max_iters: 500,
            tol: 1e-9,
            seed: 0,
            extra_seeds: Vec::new(),
        }
    }
}

impl MaximizeOpts {
    /// A cheaper profile for use inside outer optimization loops.
    pub fn light(seed: u64) -> Self {
        Self {
            restarts: 4,
            max_iters: 120,
            seed,
            ..Self::default()
        }
    }
}

/// Objective `I(W;Y|V) - I(U;V,W)` for one auxiliary kernel, in bits.
pub fn objective_strict(instance: &StrictInstance, aux: &AuxKernel) -> Result<f64> {
    let joint = instance.joint_with_aux(aux)?;
    Ok(
        mutual_information(&joint, &[Axis::W], &[Axis::Y], Some(&[Axis::V]))?
            - mutual_information(&joint, &[Axis::U], &[Axis::V, Axis::W], None)?,
    )
}

/// Flattened evaluator for the ascent inner loops.
struct DcProblem {
    nu: usize,
    nx: usize,
    ny: usize,
    nv: usize,
    nw: usize,
    /// `P(u) Q(x,v|u)` indexed by (u, x, v).
    base: Vec<f64>,
    /// Channel rows indexed by (x, y).
    chan: Vec<f64>,
    /// `H(Y|V) - H(U)`, independent of the auxiliary kernel.
    c0: f64,
}

impl DcProblem {
    fn new(instance: &StrictInstance, nw: usize) -> Self {
        let p = instance.profile();
        let (nu, nx, ny, nv) = (p.u_size, p.x_size, p.y_size, p.v_size);
        let mut base = vec![0.0; nu * nx * nv];
        for u in 0..nu {
            let pu = instance.source().table()[u];
            let row = instance.target().row(u);
            for x in 0..nx {
                for v in 0..nv {
                    base[(u * nx + x) * nv + v] = pu * row[x * nv + v];
                }
            }
        }
        let mut chan = vec![0.0; nx * ny];
        for x in 0..nx {
            chan[x * ny..(x + 1) * ny].copy_from_slice(instance.channel().row(x));
        }
        // Constant part: H(Y|V) - H(U).
        let mut m_yv = vec![0.0; ny * nv];
        let mut m_v = vec![0.0; nv];
        let mut m_u = vec![0.0; nu];
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    let b = base[(u * nx + x) * nv + v];
                    m_u[u] += b;
                    m_v[v] += b;
                    for y in 0..ny {
                        m_yv[y * nv + v] += b * chan[x * ny + y];
                    }
                }
            }
        }
        let c0 = entropy_of_table(&m_yv) - entropy_of_table(&m_v) - entropy_of_table(&m_u);
        Self {
            nu,
            nx,
            ny,
            nv,
            nw,
            base,
            chan,
            c0,
        }
    }

    fn rows(&self) -> usize {
        self.nu * self.nx * self.nv
    }

    fn marginals(&self, r: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (nu, nx, ny, nv, nw) = (self.nu, self.nx, self.ny, self.nv, self.nw);
        let mut m_yvw = vec![0.0; ny * nv * nw];
        let mut m_uvw = vec![0.0; nu * nv * nw];
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    let cell = (u * nx + x) * nv + v;
                    let b = self.base[cell];
                    if b == 0.0 {
                        continue;
                    }
                    for w in 0..nw {
                        let mass = b * r[cell * nw + w];
                        m_uvw[(u * nv + v) * nw + w] += mass;
                        for y in 0..ny {
                            m_yvw[(y * nv + v) * nw + w] += mass * self.chan[x * ny + y];
                        }
                    }
                }
            }
        }
        (m_yvw, m_uvw)
    }

    fn objective(&self, r: &[f64]) -> f64 {
        let (m_yvw, m_uvw) = self.marginals(r);
        self.c0 - entropy_of_table(&m_yvw) + entropy_of_table(&m_uvw)
    }

    /// Tangent coefficients of the convex part `-H(Y,V,W)` at `r`,
    /// already divided by the row mass `base(u,x,v)`.
    fn tangent(&self, m_yvw: &[f64]) -> Vec<f64> {
        let (nu, nx, ny, nv, nw) = (self.nu, self.nx, self.ny, self.nv, self.nw);
        let mut g = vec![0.0; self.rows() * nw];
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    let cell = (u * nx + x) * nv + v;
                    if self.base[cell] == 0.0 {
                        continue;
                    }
                    for w in 0..nw {
                        let mut acc = 0.0;
                        for y in 0..ny {
                            let t = self.chan[x * ny + y];
                            if t > 0.0 {
                                let m = m_yvw[(y * nv + v) * nw + w].max(1e-300);
                                acc += t * (m.ln() + 1.0);
                            }
                        }
                        g[cell * nw + w] = acc / LN_2;
                    }
                }
            }
        }
        g
    }

    /// Surrogate value `<tangent, base * r> + H(U,V,W)(r)` up to an
    /// additive constant.
    fn surrogate(&self, r: &[f64], tangent: &[f64]) -> f64 {
        let (nu, nx, nv, nw) = (self.nu, self.nx, self.nv, self.nw);
        let mut lin = 0.0;
        let mut m_uvw = vec![0.0; nu * nv * nw];
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    let cell = (u * nx + x) * nv + v;
                    let b = self.base[cell];
                    if b == 0.0 {
                        continue;
                    }
                    for w in 0..nw {
                        let mass = b * r[cell * nw + w];
                        lin += mass * tangent[cell * nw + w];
                        m_uvw[(u * nv + v) * nw + w] += mass;
                    }
                }
            }
        }
        lin + entropy_of_table(&m_uvw)
    }

    /// One difference-of-convex ascent run from `r`. Returns the final
    /// objective and the number of outer iterations used.
    fn ascend(&self, r: &mut [f64], max_iters: usize, tol: f64) -> (f64, usize) {
        let (nu, nx, nv, nw) = (self.nu, self.nx, self.nv, self.nw);
        let mut f_prev = self.objective(r);
        let mut iters = 0;
        let mut grad = vec![0.0; self.rows() * nw];
        for _ in 0..max_iters {
            iters += 1;
            let (m_yvw, _) = self.marginals(r);
            let tangent = self.tangent(&m_yvw);
            // Inner mirror ascent on the concave surrogate.
            let mut s_cur = self.surrogate(r, &tangent);
            let mut eta = 1.0;
            for _ in 0..60 {
                let (_, m_uvw) = self.marginals(r);
                for u in 0..nu {
                    for x in 0..nx {
                        for v in 0..nv {
                            let cell = (u * nx + x) * nv + v;
                            if self.base[cell] == 0.0 {
                                continue;
                            }
                            for w in 0..nw {
                                let m = m_uvw[(u * nv + v) * nw + w].max(1e-300);
                                grad[cell * nw + w] =
                                    tangent[cell * nw + w] - (m.ln() + 1.0) / LN_2;
                            }
                        }
                    }
                }
                let mut accepted = false;
                while eta > 1e-12 {
                    let trial = self.mirror_step(r, &grad, eta);
                    let s_try = self.surrogate(&trial, &tangent);
                    if s_try >= s_cur {
                        let gain = s_try - s_cur;
                        r.copy_from_slice(&trial);
                        s_cur = s_try;
                        accepted = true;
                        if gain < tol * 0.1 {
                            // Converged for this tangent.
                            eta = 0.0;
                        } else {
                            eta *= 1.5;
                        }
                        break;
                    }
                    eta *= 0.5;
                }
                if !accepted || eta == 0.0 {
                    break;
                }
            }
            let f = self.objective(r);
            debug_assert!(f >= f_prev - 1e-9, "ascent regressed: {f} < {f_prev}");
            if f - f_prev < tol {
                f_prev = f_prev.max(f);
                break;
            }
            f_prev = f;
        }
        (f_prev, iters)
    }

    fn mirror_step(&self, r: &[f64], grad: &[f64], eta: f64) -> Vec<f64> {
        let nw = self.nw;
        let mut out = vec![0.0; r.len()];
        for cell in 0..self.rows() {
            if self.base[cell] == 0.0 {
                out[cell * nw..(cell + 1) * nw]
                    .copy_from_slice(&r[cell * nw..(cell + 1) * nw]);
                continue;
            }
            let row = &r[cell * nw..(cell + 1) * nw];
            let g = &grad[cell * nw..(cell + 1) * nw];
            let gmax = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut z = 0.0;
            for w in 0..nw {
                let val = row[w].max(1e-300) * (eta * (g[w] - gmax)).exp();
                out[cell * nw + w] = val;
                z += val;
            }
            for w in 0..nw {
                out[cell * nw + w] /= z;
            }
        }
        out
    }
}

fn aux_to_rows(aux: &AuxKernel, nw: usize) -> Result<Vec<f64>> {
    let have = aux.w_size();
    if have > nw {
        return Err(Error::Configuration(format!(
            "warm-start auxiliary alphabet {have} exceeds the requested w_size {nw}"
        )));
    }
    let rows = aux.kernel().rows();
    let mut out = vec![0.0; rows * nw];
    for r in 0..rows {
        out[r * nw..r * nw + have].copy_from_slice(aux.kernel().row(r));
    }
    Ok(out)
}

fn rows_to_aux(instance: &StrictInstance, nw: usize, rows: Vec<f64>) -> Result<AuxKernel> {
    let p = instance.profile();
    AuxKernel::from_rows(p.u_size, p.x_size, p.v_size, nw, rows)
}

/// Maximizes the strictly-causal information constraint by
/// difference-of-convex ascent from deterministic and random starts.
///
/// The deterministic seeds `W = X`, `W = (X, V)` and constant `W` are
/// always attempted, so the certified value dominates the analytic lower
/// bound, and is exact for identity-permutation channels and product
/// targets.
pub fn maximize_strict(
    instance: &StrictInstance,
    opts: &MaximizeOpts,
) -> Result<ConstraintReport> {
    let profile = instance.profile();
    let nw = opts.w_size.unwrap_or_else(|| profile.w_ceiling());
    if nw < 1 {
        return Err(Error::Configuration("w_size must be at least 1".into()));
    }
    if nw < profile.x_size {
        return Err(Error::Configuration(format!(
            "w_size {nw} is below |X| = {}; the mandatory W = X seed cannot fit",
            profile.x_size
        )));
    }
    let bounds = analytic_bounds(instance)?;
    let problem = DcProblem::new(instance, nw);

    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(aux_to_rows(&AuxKernel::w_equals_x(&profile, nw)?, nw)?);
    if nw >= profile.x_size * profile.v_size {
        starts.push(aux_to_rows(&AuxKernel::w_equals_xv(&profile, nw)?, nw)?);
    }
    starts.push(aux_to_rows(&AuxKernel::degenerate(&profile, nw)?, nw)?);
    for extra in &opts.extra_seeds {
        starts.push(aux_to_rows(extra, nw)?);
    }
    let rows = problem.rows();
    for restart in 0..opts.restarts {
        let mut rng = derived_rng(opts.seed, StreamKind::Restart, restart as u64);
        let mut r = vec![0.0; rows * nw];
        for cell in 0..rows {
            let mut z = 0.0;
            for w in 0..nw {
                // Symmetric Dirichlet(1) row via exponential spacings.
                let e = -(1.0 - rng.gen::<f64>()).ln();
                r[cell * nw + w] = e;
                z += e;
            }
            for w in 0..nw {
                r[cell * nw + w] /= z;
            }
        }
        starts.push(r);
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_rows: Vec<f64> = Vec::new();
    let mut total_iters = 0;
    let starts_used = starts.len();
    for mut r in starts {
        let (value, iters) = problem.ascend(&mut r, opts.max_iters, opts.tol);
        total_iters += iters;
        if value > best_value {
            best_value = value;
            best_rows = r;
        }
    }
    // Entropy cancellation can leave a mathematically-zero optimum a few
    // ulps below zero; snap it so verdicts stay stable.
    if best_value < 0.0 && best_value > -1e-12 {
        best_value = 0.0;
    }

    let certificate = rows_to_aux(instance, nw, best_rows)?;
    let verdict = if best_value >= 0.0 {
        Verdict::Achievable
    } else if bounds.upper < 0.0 {
        Verdict::NotAchievable
    } else {
        Verdict::Undetermined
    };
    Ok(ConstraintReport {
        value: best_value,
        certificate: Certificate::Strict(certificate),
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
        closed_form: bounds.closed_form(),
        verdict,
        restarts_used: starts_used,
        iterations: total_iters,
        marginal_residual: None,
    })
}

/// Largest message rate reliably transmissible alongside coordination:
/// the positive part of the certified constraint value.
pub fn rate_margin(instance: &StrictInstance, opts: &MaximizeOpts) -> Result<f64> {
    Ok(maximize_strict(instance, opts)?.value.max(0.0))
}

/// Blends two targets and their certificate kernels into a certificate
/// for the convex combination `lambda Q1 + (1-lambda) Q2`.
///
/// The blended auxiliary variable lives on the disjoint union of the two
/// alphabets (a component indicator is folded into the letter), and its
/// objective value is at least the blend of the two certified values, so
/// it is the natural warm start when evaluating mixed targets.
pub fn mixture_certificate(
    target1: &Kernel,
    cert1: &AuxKernel,
    target2: &Kernel,
    cert2: &AuxKernel,
    lambda: f64,
) -> Result<(Kernel, AuxKernel)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda {lambda} outside [0,1]")));
    }
    if target1.given_sizes() != target2.given_sizes()
        || target1.target_sizes() != target2.target_sizes()
    {
        return Err(Error::InstanceFormat("targets have mismatched alphabets".into()));
    }
    let nu = target1.given_sizes()[0];
    let (nx, nv) = (target1.target_sizes()[0], target1.target_sizes()[1]);
    let (n1, n2) = (cert1.w_size(), cert2.w_size());
    let nw = n1 + n2;

    let mut blended_target = Vec::with_capacity(nu * nx * nv);
    for u in 0..nu {
        for c in 0..nx * nv {
            blended_target.push(lambda * target1.row(u)[c] + (1.0 - lambda) * target2.row(u)[c]);
        }
    }
    let mut aux_rows = vec![0.0; nu * nx * nv * nw];
    for u in 0..nu {
        for x in 0..nx {
            for v in 0..nv {
                let q1 = target1.row(u)[x * nv + v];
                let q2 = target2.row(u)[x * nv + v];
                let mix = lambda * q1 + (1.0 - lambda) * q2;
                let cell = (u * nx + x) * nv + v;
                let out = &mut aux_rows[cell * nw..(cell + 1) * nw];
                if mix <= 0.0 {
                    out.iter_mut().for_each(|p| *p = 1.0 / nw as f64);
                    continue;
                }
                let r1 = cert1.kernel().row(cell);
                let r2 = cert2.kernel().row(cell);
                for w in 0..n1 {
                    out[w] = lambda * q1 * r1[w] / mix;
                }
                for w in 0..n2 {
                    out[n1 + w] = (1.0 - lambda) * q2 * r2[w] / mix;
                }
            }
        }
    }
    let target = Kernel::new(
        vec![(Axis::U, nu)],
        vec![(Axis::X, nx), (Axis::V, nv)],
        blended_target,
    )?;
    let aux = AuxKernel::from_rows(nu, nx, nv, nw, aux_rows)?;
    Ok((target, aux))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Axis::{U, V, X, Y};
    use crate::prob::{hb, FiniteDist};

    fn fig2_instance() -> StrictInstance {
        let rows = vec![
            3.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            3.0 / 6.0,
        ];
        StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::identity(X, Y, 2),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap(),
        )
        .unwrap()
    }

    fn product_instance(eps: f64) -> StrictInstance {
        StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(eps).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], vec![0.25; 8]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn objective_matches_generic_information_path() {
        let inst = fig2_instance();
        let profile = inst.profile();
        for aux in [
            AuxKernel::w_equals_x(&profile, 9).unwrap(),
            AuxKernel::w_equals_xv(&profile, 9).unwrap(),
            AuxKernel::degenerate(&profile, 9).unwrap(),
        ] {
            let generic = objective_strict(&inst, &aux).unwrap();
            let problem = DcProblem::new(&inst, 9);
            let rows = aux_to_rows(&aux, 9).unwrap();
            let fast = problem.objective(&rows);
            assert!(
                (generic - fast).abs() < 1e-10,
                "objective paths disagree: {generic} vs {fast}"
            );
        }
    }

    #[test]
    fn degenerate_aux_on_independent_target_scores_zero() {
        let inst = product_instance(0.25);
        let aux = AuxKernel::degenerate(&inst.profile(), 9).unwrap();
        let val = objective_strict(&inst, &aux).unwrap();
        assert!(val.abs() < 1e-12);
    }

    #[test]
    fn w_equals_x_on_product_target_gives_channel_information() {
        let inst = product_instance(0.25);
        let aux = AuxKernel::w_equals_x(&inst.profile(), 9).unwrap();
        let val = objective_strict(&inst, &aux).unwrap();
        assert!((val - (1.0 - hb(0.25).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn w_equals_x_on_perfect_channel_fig2_target() {
        let inst = fig2_instance();
        let aux = AuxKernel::w_equals_x(&inst.profile(), 9).unwrap();
        let val = objective_strict(&inst, &aux).unwrap();
        assert!((val - 0.5 * 3.0f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn maximizer_hits_the_perfect_channel_closed_form() {
        let inst = fig2_instance();
        let report = maximize_strict(&inst, &MaximizeOpts::default()).unwrap();
        let expect = 0.5 * 3.0f64.log2();
        assert!(
            (report.value - expect).abs() < 1e-6,
            "value {} vs {expect}",
            report.value
        );
        assert_eq!(report.verdict, Verdict::Achievable);
        assert!(report.lower_bound - 1e-8 <= report.value);
        assert!(report.value <= report.upper_bound + 1e-8);
    }

    #[test]
    fn maximizer_pinches_on_product_target() {
        let inst = product_instance(0.25);
        let report = maximize_strict(&inst, &MaximizeOpts::default()).unwrap();
        let expect = 1.0 - hb(0.25).unwrap();
        assert!((report.value - expect).abs() < 1e-6);
        assert!((report.upper_bound - report.lower_bound).abs() < 1e-9);
    }

    #[test]
    fn pure_noise_channel_with_copy_target_is_ruled_out() {
        // V = U over a capacity-zero channel: upper bound is -H(U) = -1.
        let mut rows = vec![0.0; 8];
        for u in 0..2 {
            for x in 0..2 {
                rows[u * 4 + (x * 2 + u)] = 0.5;
            }
        }
        let inst = StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.5).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap(),
        )
        .unwrap();
        let report = maximize_strict(&inst, &MaximizeOpts::default()).unwrap();
        assert!((report.upper_bound + 1.0).abs() < 1e-9);
        assert_eq!(report.verdict, Verdict::NotAchievable);
    }

    #[test]
    fn rate_margin_values() {
        let opts = MaximizeOpts::default();
        let margin = rate_margin(&product_instance(0.25), &opts).unwrap();
        assert!((margin - (1.0 - hb(0.25).unwrap())).abs() < 1e-6);
        let fig2 = rate_margin(&fig2_instance(), &opts).unwrap();
        assert!((fig2 - 0.5 * 3.0f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn mixture_certificate_dominates_blended_values() {
        let i1 = fig2_instance();
        let i2 = product_instance(0.0);
        let opts = MaximizeOpts {
            restarts: 4,
            ..MaximizeOpts::default()
        };
        let r1 = maximize_strict(&i1, &opts).unwrap();
        let r2 = maximize_strict(&i2, &opts).unwrap();
        let (c1, c2) = match (&r1.certificate, &r2.certificate) {
            (Certificate::Strict(a), Certificate::Strict(b)) => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        for lambda in [0.25, 0.5, 0.75] {
            let (target, aux) =
                mixture_certificate(i1.target(), &c1, i2.target(), &c2, lambda).unwrap();
            let mixed = StrictInstance::new(
                i1.source().clone(),
                i1.channel().clone(),
                target,
            )
            .unwrap();
            let val = objective_strict(&mixed, &aux).unwrap();
            let blend = lambda * r1.value + (1.0 - lambda) * r2.value;
            assert!(
                val >= blend - 1e-9,
                "lambda {lambda}: certificate value {val} below blend {blend}"
            );
        }
    }
}
