//! Achievable distortion-cost region of the binary example.

use crate::closed_form::dc_constraint;
use crate::error::{Error, Result};

/// One grid cell: exact distortion `D* = beta`, exact cost `C* = alpha`,
/// the constraint value and its achievability flag (nonnegative
/// constraint, equality included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub cost: f64,
    pub distortion: f64,
    pub constraint: f64,
    pub achievable: bool,
}

/// A rectangular grid over `(C*, D*) = (alpha, beta)` in `[0,1]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub p: f64,
    pub eps: f64,
    pub step: f64,
    /// Number of grid points per axis.
    pub points: usize,
    /// Cells in alpha-major order.
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    pub fn cell(&self, alpha_idx: usize, beta_idx: usize) -> &RegionCell {
        &self.cells[alpha_idx * self.points + beta_idx]
    }

    /// True when, in every cost column, the achievable distortions form
    /// one contiguous interval.
    pub fn columns_are_intervals(&self) -> bool {
        for a in 0..self.points {
            let mut runs = 0;
            let mut prev = false;
            for b in 0..self.points {
                let cur = self.cell(a, b).achievable;
                if cur && !prev {
                    runs += 1;
                }
                prev = cur;
            }
            if runs > 1 {
                return false;
            }
        }
        true
    }
}

/// Evaluates the exact-distortion/exact-cost constraint on a grid.
pub fn distortion_cost_region(p: f64, eps: f64, grid_step: f64) -> Result<RegionGrid> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain("p and eps must lie in [0,1]".into()));
    }
    if grid_step <= 0.0 || grid_step > 1.0 {
        return Err(Error::Domain(format!("grid step {grid_step} outside (0,1]")));
    }
    let points = (1.0 / grid_step).round() as usize + 1;
    let mut cells = Vec::with_capacity(points * points);
    for ai in 0..points {
        let alpha = (ai as f64 * grid_step).min(1.0);
        for bi in 0..points {
            let beta = (bi as f64 * grid_step).min(1.0);
            let constraint = dc_constraint(alpha, beta, p, eps)?;
            cells.push(RegionCell {
                cost: alpha,
                distortion: beta,
                constraint,
                achievable: constraint >= 0.0,
            });
        }
    }
    Ok(RegionGrid {
        p,
        eps,
        step: grid_step,
        points,
        cells,
    })
}
