//! One-parameter target families and boundary location by bisection.

use crate::closed_form::game_family;
use crate::constraint::{analytic_bounds, maximize_strict, MaximizeOpts, StrictInstance};
use crate::error::{Error, Result};
use crate::prob::{Axis, FiniteDist, Kernel};

/// A one-parameter family of target conditionals `(X, V) | U`.
#[derive(Debug, Clone)]
pub enum FamilySpec {
    /// The symmetric binary coordination family; parameter `gamma` runs
    /// over `[1/4, 1]`, right of the constraint's peak, so a crossing is
    /// unique.
    CoordinationGamma,
    /// Product targets of the binary distortion-cost example at fixed
    /// input bias `alpha`; the parameter is the decoder flip probability
    /// `beta` over `[0, 1/2]`.
    DistortionCostBeta { alpha: f64 },
    /// Linear interpolation between two arbitrary endpoint kernels.
    UserLinear { k0: Kernel, k1: Kernel },
}

impl FamilySpec {
    pub fn param_range(&self) -> (f64, f64) {
        match self {
            FamilySpec::CoordinationGamma => (0.25, 1.0),
            FamilySpec::DistortionCostBeta { .. } => (0.0, 0.5),
            FamilySpec::UserLinear { .. } => (0.0, 1.0),
        }
    }

    /// The member kernel at `param`.
    pub fn kernel(&self, param: f64) -> Result<Kernel> {
        match self {
            FamilySpec::CoordinationGamma => Ok(game_family(param)?.0),
            FamilySpec::DistortionCostBeta { alpha } => {
                if !(0.0..=1.0).contains(&param) {
                    return Err(Error::Domain(format!("beta = {param} outside [0,1]")));
                }
                let mut rows = vec![0.0; 8];
                for u in 0..2 {
                    for x in 0..2 {
                        let qx = if x == 0 { *alpha } else { 1.0 - *alpha };
                        for v in 0..2 {
                            let qv = if v == u { 1.0 - param } else { param };
                            rows[(u * 2 + x) * 2 + v] = qx * qv;
                        }
                    }
                }
                Kernel::new(vec![(Axis::U, 2)], vec![(Axis::X, 2), (Axis::V, 2)], rows)
            }
            FamilySpec::UserLinear { k0, k1 } => {
                if !(0.0..=1.0).contains(&param) {
                    return Err(Error::Domain(format!("lambda = {param} outside [0,1]")));
                }
                let rows: Vec<f64> = k0
                    .table()
                    .iter()
                    .zip(k1.table().iter())
                    .map(|(a, b)| (1.0 - param) * a + param * b)
                    .collect();
                Kernel::new(
                    k0.given_axes()
                        .iter()
                        .copied()
                        .zip(k0.given_sizes().iter().copied())
                        .collect(),
                    k0.target_axes()
                        .iter()
                        .copied()
                        .zip(k0.target_sizes().iter().copied())
                        .collect(),
                    rows,
                )
            }
        }
    }
}

/// Which constraint evaluation drives the root search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSelector {
    /// Analytic `W = X` lower bound.
    Lower,
    /// Analytic source-feedforward upper bound.
    Upper,
    /// Certified value from the ascent maximizer.
    Certified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResult {
    pub param_star: f64,
    /// Selected constraint value at the returned parameter.
    pub value_at_star: f64,
    /// Set when the selected bound does not change sign on the interval;
    /// the better endpoint is returned instead of a crossing.
    pub no_crossing: bool,
}

/// Locates the achievability boundary along a family: the parameter
/// where the selected constraint evaluation crosses zero, bisected to an
/// interval shorter than `1e-6`.
pub fn boundary_bisection_family(
    family: &FamilySpec,
    source: &FiniteDist,
    channel: &Kernel,
    selector: BoundSelector,
    opts: &MaximizeOpts,
) -> Result<BoundaryResult> {
    let eval = |param: f64| -> Result<f64> {
        let target = family.kernel(param)?;
        let instance = StrictInstance::new(source.clone(), channel.clone(), target)?;
        match selector {
            BoundSelector::Lower => Ok(analytic_bounds(&instance)?.lower),
            BoundSelector::Upper => Ok(analytic_bounds(&instance)?.upper),
            BoundSelector::Certified => Ok(maximize_strict(
                &instance,
                &MaximizeOpts {
                    seed: opts.seed ^ param.to_bits(),
                    ..opts.clone()
                },
            )?
            .value),
        }
    };
    let (mut lo, mut hi) = family.param_range();
    let f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    // A strict sign change needs one clearly positive and one clearly
    // negative endpoint; endpoint values at the numeric zero count as
    // boundary points themselves.
    let zero = 1e-12;
    if !(f_lo > zero && f_hi < -zero || f_lo < -zero && f_hi > zero) {
        let (p, v) = if f_lo >= f_hi { (lo, f_lo) } else { (hi, f_hi) };
        return Ok(BoundaryResult {
            param_star: p,
            value_at_star: v,
            no_crossing: true,
        });
    }
    let positive_at_lo = f_lo > 0.0;
    while hi - lo >= 1e-6 {
        let mid = 0.5 * (lo + hi);
        let fm = eval(mid)?;
        if (fm > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let star = 0.5 * (lo + hi);
    Ok(BoundaryResult {
        param_star: star,
        value_at_star: eval(star)?,
        no_crossing: false,
    })
}
