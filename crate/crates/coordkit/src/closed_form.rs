//! Exact scalar formulas for the binary coordination game and the
//! binary distortion-cost example.
//!
//! The coordination game: uniform binary source, binary symmetric
//! channel with crossover `eps`, and the symmetric target family with
//! parameter `gamma` that puts conditional mass `gamma` on the aligned
//! triple `x = v = u` and spreads the rest evenly. Its expected utility
//! under the alignment indicator equals `gamma` itself, and the analytic
//! sandwich on the information constraint reduces to the two binary
//! closed forms below.

use crate::error::{Error, Result};
use crate::prob::{hb, Axis, Kernel};
use crate::region::utility::UtilitySpec;

/// Parameters of the binary coordination game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    /// Source parameter.
    pub p: f64,
    /// Channel crossover.
    pub eps: f64,
    /// Coordination parameter of the symmetric target family.
    pub gamma: f64,
}

impl GameParams {
    pub fn new(p: f64, eps: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("eps", eps), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside [0,1]")));
            }
        }
        Ok(Self { p, eps, gamma })
    }
}

/// Sandwich values of the information constraint along the symmetric
/// family at source parameter 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinationBounds {
    /// Value of the `W = X` substitution.
    pub lower: f64,
    /// Source-feedforward relaxation.
    pub upper: f64,
    /// Common value when the channel is perfect (`eps = 0`).
    pub perfect: Option<f64>,
}

/// Closed forms for the sandwich along the symmetric family.
///
/// Both reduce to `Hb(gamma) + (1 - gamma) log2(3) - 1` at `eps = 0`,
/// and to `1 - Hb(eps)` at `gamma = 1/4` (the uniform member).
/// Only derived for source parameter `p = 1/2`.
pub fn coordination_bounds(gp: &GameParams) -> Result<CoordinationBounds> {
    if (gp.p - 0.5).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "closed forms require source parameter 1/2, got {}",
            gp.p
        )));
    }
    let (g, e) = (gp.gamma, gp.eps);
    let log3 = 3.0f64.log2();
    let core = hb(g)? + (1.0 - g) * log3 - 1.0;
    let a = 2.0 / 3.0 - 2.0 * g / 3.0;
    let lower = core - hb(a)? - hb(e)? + hb((a + e * (4.0 * g - 1.0) / 3.0).clamp(0.0, 1.0))?;
    let s = (2.0 * g + 1.0) / 3.0;
    let b = 3.0 * g / (2.0 * g + 1.0);
    let upper = core - hb(e)?
        + s * (hb(((1.0 - e) * b + e * (1.0 - g) / (2.0 * g + 1.0)).clamp(0.0, 1.0))? - hb(b)?);
    let perfect = if e == 0.0 { Some(core) } else { None };
    Ok(CoordinationBounds {
        lower,
        upper,
        perfect,
    })
}

/// Which side of the sandwich a root search applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Utility-optimal coordination parameter: the zero of the selected
/// bound on `gamma` in `[1/4, 1]`, located by bisection to `1e-6`.
///
/// The constraint peaks at `gamma = 1/4` (the uniform member), so a sign
/// change right of the peak is unique. When the bound is not positive at
/// the peak, no coordination beyond the uniform member is certified and
/// `1/4` is returned.
pub fn gamma_star(eps: f64, side: BoundSide) -> Result<f64> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} outside [0, 0.5]")));
    }
    let f = |g: f64| -> Result<f64> {
        let b = coordination_bounds(&GameParams::new(0.5, eps, g)?)?;
        Ok(match side {
            BoundSide::Lower => b.lower,
            BoundSide::Upper => b.upper,
        })
    };
    let mut lo = 0.25;
    let mut hi = 1.0;
    if f(lo)? <= 0.0 {
        return Ok(0.25);
    }
    if f(hi)? > 0.0 {
        return Ok(1.0);
    }
    while hi - lo >= 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Information constraint `I(X;Y) - I(U;V)` of the binary
/// distortion-cost example: input bias `alpha`, symmetric decoder flip
/// `beta`, source parameter `p`, crossover `eps`.
pub fn dc_constraint(alpha: f64, beta: f64, p: f64, eps: f64) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("p", p), ("eps", eps)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} = {v} outside [0,1]")));
        }
    }
    Ok(hb(alpha * eps + (1.0 - alpha) * (1.0 - eps))? + hb(beta)?
        - hb(eps)?
        - hb(beta * p + (1.0 - beta) * (1.0 - p))?)
}

/// The symmetric target family member at `gamma` together with the
/// alignment utility `1{x = v = u}`.
pub fn game_family(gamma: f64) -> Result<(Kernel, UtilitySpec)> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma = {gamma} outside [0,1]")));
    }
    // Joint cells are gamma/2 on the two aligned triples and
    // (1 - gamma)/6 elsewhere; conditioning on the uniform source
    // doubles them.
    let diag = gamma;
    let off = (1.0 - gamma) / 3.0;
    let mut rows = Vec::with_capacity(8);
    for u in 0..2 {
        for x in 0..2 {
            for v in 0..2 {
                rows.push(if x == u && v == u { diag } else { off });
            }
        }
    }
    let target = Kernel::new(vec![(Axis::U, 2)], vec![(Axis::X, 2), (Axis::V, 2)], rows)?;
    let mut phi = vec![0.0; 16];
    for u in 0..2 {
        for y in 0..2 {
            phi[((u * 2 + u) * 2 + y) * 2 + u] = 1.0;
        }
    }
    let utility = UtilitySpec::new(2, 2, 2, 2, phi)?;
    Ok((target, utility))
}
