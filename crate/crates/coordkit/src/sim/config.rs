//! Simulator configuration and rate planning.

use crate::constraint::{AuxKernel, CausalStructure, StrictInstance};
use crate::error::{Error, Result};
use crate::prob::{mutual_information, Axis};
use crate::region::capacity::channel_capacity;

/// Block-Markov simulator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeConfig {
    /// Block length.
    pub n: usize,
    /// Number of blocks.
    pub blocks: usize,
    /// Rate slack added to the covering rates and subtracted from the
    /// packing budget.
    pub delta: f64,
    /// Typicality tolerance, also the success threshold on the full
    /// empirical total variation.
    pub eps_typ: f64,
    pub seed: u64,
    /// Guard on the total codebook size `2^ceil(nR) + 2^ceil(n(R+RL))`;
    /// configurations above it are refused, not truncated.
    pub codeword_cap: u64,
}

impl CodeConfig {
    pub const DEFAULT_CODEWORD_CAP: u64 = 1 << 20;

    pub fn new(n: usize, blocks: usize, delta: f64, eps_typ: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Configuration("block length must be positive".into()));
        }
        if blocks < 3 {
            return Err(Error::Configuration("at least 3 blocks required".into()));
        }
        if delta <= 0.0 {
            return Err(Error::Configuration(format!("rate slack {delta} must be positive")));
        }
        if eps_typ <= 0.0 {
            return Err(Error::Configuration(format!(
                "typicality tolerance {eps_typ} must be positive"
            )));
        }
        Ok(Self {
            n,
            blocks,
            delta,
            eps_typ,
            seed,
            codeword_cap: Self::DEFAULT_CODEWORD_CAP,
        })
    }

    pub fn with_codeword_cap(mut self, cap: u64) -> Self {
        self.codeword_cap = cap;
        self
    }

    pub fn total_len(&self) -> usize {
        self.n * self.blocks
    }
}

/// Rates of the block-Markov scheme: `R` covers the next block's
/// decoder sequence, `R_L` indexes the bin refinement, and feasibility
/// requires `R + R_L <= I(W; Y, V) - delta` plus a positive margin for
/// the init-block transmission, `capacity - R - 2 delta >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePlan {
    pub r: f64,
    pub r_l: f64,
    pub feasible: bool,
    /// `I(W;Y,V) - delta - (R + R_L)`.
    pub slack: f64,
    /// `capacity - R - 2 delta`.
    pub init_margin: f64,
    /// Names the violated inequality when infeasible.
    pub violated: Option<String>,
}

impl RatePlan {
    pub fn require_feasible(&self) -> Result<()> {
        match &self.violated {
            None => Ok(()),
            Some(v) => Err(Error::Infeasible(v.clone())),
        }
    }
}

fn assemble_plan(i_cover: f64, i_bin: f64, i_pack: f64, capacity: f64, delta: f64) -> RatePlan {
    let r = i_cover + delta;
    let r_l = i_bin + delta;
    let slack = i_pack - delta - (r + r_l);
    let init_margin = capacity - r - 2.0 * delta;
    let violated = if slack < 0.0 {
        Some(format!(
            "packing budget violated: R + R_L = {:.6} exceeds {:.6} - delta",
            r + r_l,
            i_pack
        ))
    } else if init_margin < 0.0 {
        Some(format!(
            "init block budget violated: capacity {capacity:.6} < R + 2 delta = {:.6}",
            r + 2.0 * delta
        ))
    } else {
        None
    };
    RatePlan {
        r,
        r_l,
        feasible: violated.is_none(),
        slack,
        init_margin,
        violated,
    }
}

/// Rates for the strictly-causal scheme under a certificate kernel:
/// `R = I(V;U) + delta`, `R_L = I(W;U,V) + delta`, packed against
/// `I(W;Y,V)`.
pub fn plan_rates(instance: &StrictInstance, aux: &AuxKernel, delta: f64) -> Result<RatePlan> {
    if delta <= 0.0 {
        return Err(Error::Configuration(format!("rate slack {delta} must be positive")));
    }
    let joint = instance.joint_with_aux(aux)?;
    let i_cover = mutual_information(&joint, &[Axis::V], &[Axis::U], None)?;
    let i_bin = mutual_information(&joint, &[Axis::W], &[Axis::U, Axis::V], None)?;
    let i_pack = mutual_information(&joint, &[Axis::W], &[Axis::Y, Axis::V], None)?;
    let capacity = channel_capacity(instance.channel(), 1e-10)?.capacity;
    Ok(assemble_plan(i_cover, i_bin, i_pack, capacity, delta))
}

/// Rates for the causal scheme: the second auxiliary variable plays the
/// covering role and the first the binning role.
pub fn plan_rates_causal(structure: &CausalStructure, delta: f64) -> Result<RatePlan> {
    if delta <= 0.0 {
        return Err(Error::Configuration(format!("rate slack {delta} must be positive")));
    }
    let joint = structure.joint();
    let i_cover = mutual_information(&joint, &[Axis::W2], &[Axis::U], None)?;
    let i_bin = mutual_information(&joint, &[Axis::W1], &[Axis::U, Axis::W2], None)?;
    let i_pack = mutual_information(&joint, &[Axis::W1], &[Axis::Y, Axis::W2], None)?;
    let capacity = channel_capacity(structure.channel(), 1e-10)?.capacity;
    Ok(assemble_plan(i_cover, i_bin, i_pack, capacity, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Axis::{U, V, X};
    use crate::prob::{hb, FiniteDist, Kernel};

    #[test]
    fn arithmetic_of_the_rate_plan() {
        // Covering 0.2, binning 0.3, packing 0.9 and slack 0.05 leave
        // room: R = 0.25, R_L = 0.35, 0.6 <= 0.85.
        let plan = assemble_plan(0.2, 0.3, 0.9, 1.0, 0.05);
        assert!((plan.r - 0.25).abs() < 1e-12);
        assert!((plan.r_l - 0.35).abs() < 1e-12);
        assert!(plan.feasible);
        assert!((plan.slack - 0.25).abs() < 1e-12);
    }

    #[test]
    fn product_target_rates_reduce_to_slack() {
        let inst = StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.25).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], vec![0.25; 8]).unwrap(),
        )
        .unwrap();
        let aux = AuxKernel::w_equals_x(&inst.profile(), 2).unwrap();
        let delta = 0.02;
        let plan = plan_rates(&inst, &aux, delta).unwrap();
        assert!((plan.r - delta).abs() < 1e-9);
        assert!((plan.r_l - delta).abs() < 1e-9);
        // Feasible exactly when 2 delta <= I(X;Y) - delta.
        let c = 1.0 - hb(0.25).unwrap();
        assert_eq!(plan.feasible, 2.0 * delta <= c - delta);
        assert!(plan.feasible);
    }

    #[test]
    fn oversized_slack_is_refused() {
        let inst = StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.25).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], vec![0.25; 8]).unwrap(),
        )
        .unwrap();
        let aux = AuxKernel::w_equals_x(&inst.profile(), 2).unwrap();
        let plan = plan_rates(&inst, &aux, 0.2).unwrap();
        assert!(!plan.feasible);
        assert!(plan.violated.is_some());
        assert!(plan.require_feasible().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(CodeConfig::new(10, 2, 0.1, 0.1, 0).is_err());
        assert!(CodeConfig::new(10, 3, 0.0, 0.1, 0).is_err());
        assert!(CodeConfig::new(10, 3, 0.1, 0.0, 0).is_err());
        let c = CodeConfig::new(10, 3, 0.1, 0.1, 0).unwrap();
        assert_eq!(c.total_len(), 30);
        assert_eq!(c.codeword_cap, 1 << 20);
    }
}
