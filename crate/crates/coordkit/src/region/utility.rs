//! Utility functions over source/channel symbols and best-effort utility
//! maximization over the achievable set.

use rand::Rng;

use crate::constraint::{
    maximize_strict, objective_strict, Certificate, ConstraintReport, MaximizeOpts,
    StrictInstance, Verdict,
};
use crate::error::{Error, Result};
use crate::prob::{compose_chain, Axis, FiniteDist, Kernel};
use crate::region::capacity::channel_capacity;
use crate::rngutil::{derived_rng, StreamKind};

/// A real-valued utility table over `(U, X, Y, V)`, optionally declared
/// as a distortion and/or cost decomposition.
///
/// When a decomposition is declared, the main table must match it:
/// `phi = d(u,v)`, `phi = c(x)`, or `phi = d(u,v) + c(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySpec {
    nu: usize,
    nx: usize,
    ny: usize,
    nv: usize,
    phi: Vec<f64>,
    distortion: Option<Vec<f64>>,
    cost: Option<Vec<f64>>,
}

impl UtilitySpec {
    pub fn new(nu: usize, nx: usize, ny: usize, nv: usize, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != nu * nx * ny * nv {
            return Err(Error::InstanceFormat(format!(
                "utility table has {} entries, expected {}",
                phi.len(),
                nu * nx * ny * nv
            )));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InstanceFormat("utility table holds a non-finite entry".into()));
        }
        Ok(Self {
            nu,
            nx,
            ny,
            nv,
            phi,
            distortion: None,
            cost: None,
        })
    }

    /// Pure distortion utility `phi(u,x,y,v) = d(u,v)`.
    pub fn from_distortion(nu: usize, nx: usize, ny: usize, nv: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != nu * nv {
            return Err(Error::InstanceFormat("distortion table size mismatch".into()));
        }
        let mut phi = vec![0.0; nu * nx * ny * nv];
        for u in 0..nu {
            for x in 0..nx {
                for y in 0..ny {
                    for v in 0..nv {
                        phi[((u * nx + x) * ny + y) * nv + v] = d[u * nv + v];
                    }
                }
            }
        }
        let mut s = Self::new(nu, nx, ny, nv, phi)?;
        s.distortion = Some(d);
        Ok(s)
    }

    /// Pure channel-cost utility `phi(u,x,y,v) = c(x)`.
    pub fn from_cost(nu: usize, nx: usize, ny: usize, nv: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != nx {
            return Err(Error::InstanceFormat("cost table size mismatch".into()));
        }
        let mut phi = vec![0.0; nu * nx * ny * nv];
        for u in 0..nu {
            for x in 0..nx {
                for y in 0..ny {
                    for v in 0..nv {
                        phi[((u * nx + x) * ny + y) * nv + v] = c[x];
                    }
                }
            }
        }
        let mut s = Self::new(nu, nx, ny, nv, phi)?;
        s.cost = Some(c);
        Ok(s)
    }

    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.nu, self.nx, self.ny, self.nv)
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn distortion(&self) -> Option<&[f64]> {
        self.distortion.as_deref()
    }

    pub fn cost(&self) -> Option<&[f64]> {
        self.cost.as_deref()
    }
}

/// Expected utility of a target conditional under the composed joint.
pub fn expected_utility(
    target: &Kernel,
    source: &FiniteDist,
    channel: &Kernel,
    util: &UtilitySpec,
) -> Result<f64> {
    let joint = compose_chain(source, target, channel)?;
    joint.expectation(util.phi())
}

/// Result of [`max_utility_generic`].
#[derive(Debug, Clone)]
pub struct MaxUtilityResult {
    pub target_star: Kernel,
    pub utility: f64,
    pub report: ConstraintReport,
    /// True when the winner came from the independent-decoder fallback
    /// rather than the penalized search.
    pub fallback_used: bool,
}

/// Options for [`max_utility_generic`].
#[derive(Debug, Clone)]
pub struct MaxUtilityOpts {
    pub restarts: usize,
    pub max_outer: usize,
    pub seed: u64,
    /// Finite-difference step for constraint gradients.
    pub fd_step: f64,
}

impl Default for MaxUtilityOpts {
    fn default() -> Self {
        Self {
            restarts: 4,
            max_outer: 120,
            seed: 0,
            fd_step: 1e-4,
        }
    }
}

fn project_row_to_simplex(row: &mut [f64]) {
    // Euclidean projection: sort, find the threshold, clip.
    let mut sorted: Vec<f64> = row.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    let mut z = 0.0;
    for v in row.iter_mut() {
        *v = (*v - theta).max(0.0);
        z += *v;
    }
    if z <= 0.0 {
        let n = row.len() as f64;
        row.iter_mut().for_each(|v| *v = 1.0 / n);
    } else {
        row.iter_mut().for_each(|v| *v /= z);
    }
}

/// Utility-weighted per-(u,x,v) coefficients with the channel averaged
/// out: the expected utility is linear with these weights.
fn utility_coefficients(
    source: &FiniteDist,
    channel: &Kernel,
    util: &UtilitySpec,
) -> Vec<f64> {
    let (nu, nx, ny, nv) = util.dims();
    let mut coef = vec![0.0; nu * nx * nv];
    for u in 0..nu {
        let pu = source.table()[u];
        for x in 0..nx {
            for v in 0..nv {
                let mut acc = 0.0;
                for y in 0..ny {
                    acc += channel.row(x)[y] * util.phi()[((u * nx + x) * ny + y) * nv + v];
                }
                coef[(u * nx + x) * nv + v] = pu * acc;
            }
        }
    }
    coef
}

fn kernel_from_rows(nu: usize, nx: usize, nv: usize, rows: &[f64]) -> Result<Kernel> {
    Kernel::new(
        vec![(Axis::U, nu)],
        vec![(Axis::X, nx), (Axis::V, nv)],
        rows.to_vec(),
    )
}

/// Always-achievable fallback: an independent decoder output
/// (a point mass on the utility-best `v`) paired with the utility-best
/// deterministic input map. Its constraint value is exactly zero via the
/// constant auxiliary variable.
fn independent_fallback(
    source: &FiniteDist,
    channel: &Kernel,
    util: &UtilitySpec,
) -> Result<Vec<f64>> {
    let (nu, nx, _, nv) = util.dims();
    let coef = utility_coefficients(source, channel, util);
    let mut best: Option<(f64, usize)> = None;
    for v in 0..nv {
        let mut total = 0.0;
        for u in 0..nu {
            let row_best = (0..nx)
                .map(|x| coef[(u * nx + x) * nv + v])
                .fold(f64::NEG_INFINITY, f64::max);
            total += row_best;
        }
        if best.is_none_or(|(b, _)| total > b) {
            best = Some((total, v));
        }
    }
    let v_star = best.expect("nonempty alphabet").1;
    let mut rows = vec![0.0; nu * nx * nv];
    for u in 0..nu {
        let x_star = (0..nx)
            .max_by(|&a, &b| {
                coef[(u * nx + a) * nv + v_star]
                    .partial_cmp(&coef[(u * nx + b) * nv + v_star])
                    .unwrap()
            })
            .unwrap();
        rows[(u * nx + x_star) * nv + v_star] = 1.0;
    }
    Ok(rows)
}

/// Best-effort maximization of the expected utility over certified
/// achievable targets: projected ascent on the target kernel with an
/// exact penalty on the negative part of the certified constraint,
/// doubling penalty weight, and multi-restart. Constraint gradients use
/// central finite differences with the inner certificate held fixed.
pub fn max_utility_generic(
    source: &FiniteDist,
    channel: &Kernel,
    util: &UtilitySpec,
    opts: &MaxUtilityOpts,
) -> Result<MaxUtilityResult> {
    let (nu, nx, ny, nv) = util.dims();
    if source.sizes()[0] != nu || channel.given_sizes()[0] != nx || channel.cols() != ny {
        return Err(Error::InstanceFormat("utility dimensions disagree with the instance".into()));
    }
    let coef = utility_coefficients(source, channel, util);
    let utility_of = |rows: &[f64]| -> f64 {
        rows.iter().zip(coef.iter()).map(|(a, b)| a * b).sum()
    };
    let certify = |rows: &[f64], warm: Option<&Certificate>, seed: u64| -> Result<ConstraintReport> {
        let target = kernel_from_rows(nu, nx, nv, rows)?;
        let instance = StrictInstance::new(source.clone(), channel.clone(), target)?;
        let mut mopts = MaximizeOpts::light(seed);
        if let Some(Certificate::Strict(aux)) = warm {
            mopts.extra_seeds.push(aux.clone());
        }
        maximize_strict(&instance, &mopts)
    };

    // Seed targets.
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    seeds.push(independent_fallback(source, channel, util)?);
    let fallback_rows = seeds[0].clone();
    // Separation targets: capacity-achieving input, deterministic
    // decoder maps. Enumerated while small.
    let pstar = channel_capacity(channel, 1e-10)?.argmax_input;
    let maps = nv.checked_pow(nu as u32).filter(|&m| m <= 32).unwrap_or(0);
    for code in 0..maps {
        let mut rows = vec![0.0; nu * nx * nv];
        let mut c = code;
        for u in 0..nu {
            let v = c % nv;
            c /= nv;
            for x in 0..nx {
                rows[(u * nx + x) * nv + v] = pstar.table()[x];
            }
        }
        seeds.push(rows);
    }
    seeds.push(vec![1.0 / (nx * nv) as f64; nu * nx * nv]);
    for restart in 0..opts.restarts {
        let mut rng = derived_rng(opts.seed, StreamKind::Restart, 9000 + restart as u64);
        let mut rows = vec![0.0; nu * nx * nv];
        for u in 0..nu {
            let row = &mut rows[u * nx * nv..(u + 1) * nx * nv];
            let mut z = 0.0;
            for r in row.iter_mut() {
                *r = -(1.0 - rng.gen::<f64>()).ln();
                z += *r;
            }
            row.iter_mut().for_each(|r| *r /= z);
        }
        seeds.push(rows);
    }

    let mut best: Option<(f64, Vec<f64>, ConstraintReport)> = None;
    let consider =
        |rows: &[f64], report: ConstraintReport, best: &mut Option<(f64, Vec<f64>, ConstraintReport)>| {
            if report.verdict == Verdict::Achievable {
                let u = utility_of(rows);
                if best.as_ref().is_none_or(|(b, _, _)| u > *b) {
                    *best = Some((u, rows.to_vec(), report));
                }
            }
        };

    for (si, seed_rows) in seeds.into_iter().enumerate() {
        let mut z = seed_rows;
        let mut report = certify(&z, None, opts.seed ^ si as u64)?;
        consider(&z, report.clone(), &mut best);
        let mut mu = 4.0;
        let mut eta = 0.25;
        for iter in 0..opts.max_outer {
            let cert = report.certificate.clone();
            let aux = match &cert {
                Certificate::Strict(a) => a.clone(),
                _ => unreachable!("strict certification"),
            };
            let fhat = |rows: &[f64]| -> Result<f64> {
                let target = kernel_from_rows(nu, nx, nv, rows)?;
                let inst = StrictInstance::new(source.clone(), channel.clone(), target)?;
                objective_strict(&inst, &aux)
            };
            let score = |rows: &[f64]| -> Result<f64> {
                Ok(utility_of(rows) + mu * fhat(rows)?.min(0.0))
            };
            let f_here = fhat(&z)?;
            // Gradient: exact utility part plus, when infeasible, the
            // penalty part by central differences under the frozen
            // certificate.
            let mut grad = coef.clone();
            if f_here < 0.0 {
                for i in 0..grad.len() {
                    let mut plus = z.clone();
                    plus[i] += opts.fd_step;
                    let mut minus = z.clone();
                    minus[i] = (minus[i] - opts.fd_step).max(0.0);
                    for u in 0..nu {
                        project_row_to_simplex(&mut plus[u * nx * nv..(u + 1) * nx * nv]);
                        project_row_to_simplex(&mut minus[u * nx * nv..(u + 1) * nx * nv]);
                    }
                    let d = (fhat(&plus)? - fhat(&minus)?) / (2.0 * opts.fd_step);
                    grad[i] += mu * d;
                }
            }
            let s_cur = score(&z)?;
            let mut accepted = false;
            while eta > 1e-7 {
                let mut trial = z.clone();
                for (t, g) in trial.iter_mut().zip(grad.iter()) {
                    *t += eta * g;
                }
                for u in 0..nu {
                    project_row_to_simplex(&mut trial[u * nx * nv..(u + 1) * nx * nv]);
                }
                if score(&trial)? >= s_cur - 1e-15 {
                    z = trial;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if !accepted {
                if f_here < -1e-9 && mu < (1u64 << 20) as f64 {
                    mu *= 2.0;
                    eta = 0.25;
                    continue;
                }
                break;
            }
            eta = (eta * 1.2).min(0.5);
            // Re-certify and track the best feasible iterate.
            report = certify(&z, Some(&cert), opts.seed ^ (si as u64) ^ ((iter as u64) << 8))?;
            consider(&z, report.clone(), &mut best);
        }
    }

    let (utility, rows, report, fallback_used) = match best {
        Some((u, rows, report)) => (u, rows, report, false),
        None => {
            let report = certify(&fallback_rows, None, opts.seed)?;
            (utility_of(&fallback_rows), fallback_rows, report, true)
        }
    };
    Ok(MaxUtilityResult {
        target_star: kernel_from_rows(nu, nx, nv, &rows)?,
        utility,
        report,
        fallback_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::game_family;
    use crate::prob::Axis::U;

    #[test]
    fn constant_utility_is_its_own_expectation() {
        let util = UtilitySpec::new(2, 2, 2, 2, vec![0.42; 16]).unwrap();
        let (target, _) = game_family(0.3).unwrap();
        let got = expected_utility(
            &target,
            &FiniteDist::uniform(vec![(U, 2)]),
            &Kernel::bsc(0.2).unwrap(),
            &util,
        )
        .unwrap();
        assert!((got - 0.42).abs() < 1e-12);
    }

    #[test]
    fn game_family_utility_equals_parameter() {
        let source = FiniteDist::uniform(vec![(U, 2)]);
        let channel = Kernel::bsc(0.15).unwrap();
        for gamma in [0.0, 0.25, 0.6, 1.0] {
            let (target, util) = game_family(gamma).unwrap();
            let got = expected_utility(&target, &source, &channel, &util).unwrap();
            assert!((got - gamma).abs() < 1e-12, "gamma {gamma} -> {got}");
        }
    }

    #[test]
    fn symmetric_flip_distortion_expects_beta() {
        // d(u, v) = 1{u != v} under a beta-symmetric decoder conditional.
        let (p, beta) = (0.3, 0.2);
        let util = UtilitySpec::from_distortion(2, 2, 2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let mut rows = vec![0.0; 8];
        for u in 0..2 {
            for x in 0..2 {
                for v in 0..2 {
                    let q = if v == u { 1.0 - beta } else { beta };
                    rows[(u * 2 + x) * 2 + v] = 0.5 * q;
                }
            }
        }
        let target = Kernel::new(
            vec![(U, 2)],
            vec![(crate::prob::Axis::X, 2), (crate::prob::Axis::V, 2)],
            rows,
        )
        .unwrap();
        let source = FiniteDist::new(vec![(U, 2)], vec![1.0 - p, p]).unwrap();
        let got = expected_utility(&target, &source, &Kernel::bsc(0.25).unwrap(), &util).unwrap();
        assert!((got - beta).abs() < 1e-12);
    }
}
