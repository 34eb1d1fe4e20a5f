//! Analytic sandwich bounds on the strictly-causal information constraint.

use crate::constraint::instance::StrictInstance;
use crate::constraint::report::ClosedForm;
use crate::error::Result;
use crate::prob::Axis::{U, V, X, Y};
use crate::prob::{mutual_information, conditional_entropy};

/// Sandwich on `max_W I(W;Y|V) - I(U;V,W)` that needs no auxiliary
/// variable. The gap between the two bounds is `I(U;X|V,Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBounds {
    /// `I(X;Y|V) - I(U;V,X)`: the value of the `W = X` substitution.
    pub lower: f64,
    /// `I(X;Y|U,V) - I(U;V)`: what a decoder that additionally observes
    /// the source could achieve.
    pub upper: f64,
    /// `H(X|V) - I(U;X,V)` when the channel is an identity permutation:
    /// there the sandwich pinches and this value is exact.
    pub perfect_channel_value: Option<f64>,
    /// `I(X;Y) - I(U;V)` when the joint factorizes as
    /// `Q(u,v) x Q(x,y)`: exact in that case.
    pub product_value: Option<f64>,
}

impl AnalyticBounds {
    pub fn closed_form(&self) -> Option<ClosedForm> {
        if let Some(v) = self.perfect_channel_value {
            Some(ClosedForm::PerfectChannel(v))
        } else {
            self.product_value.map(ClosedForm::Product)
        }
    }
}

pub fn analytic_bounds(instance: &StrictInstance) -> Result<AnalyticBounds> {
    let joint = instance.joint();
    let lower = mutual_information(&joint, &[X], &[Y], Some(&[V]))?
        - mutual_information(&joint, &[U], &[V, X], None)?;
    let upper = mutual_information(&joint, &[X], &[Y], Some(&[U, V]))?
        - mutual_information(&joint, &[U], &[V], None)?;

    let perfect_channel_value = if instance.channel().is_identity_permutation() {
        Some(
            conditional_entropy(&joint, &[X], &[V])?
                - mutual_information(&joint, &[U], &[X, V], None)?,
        )
    } else {
        None
    };

    // Product structure: joint == Q(u,v) x Q(x,y) cell by cell.
    let product_value = {
        let uv = joint.marginal(&[U, V])?;
        let xy = joint.marginal(&[X, Y])?;
        let prod = uv.product(&xy)?.reorder(&[U, X, Y, V])?;
        let max_dev = joint
            .table()
            .iter()
            .zip(prod.table().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if max_dev <= 1e-9 {
            Some(
                mutual_information(&joint, &[X], &[Y], None)?
                    - mutual_information(&joint, &[U], &[V], None)?,
            )
        } else {
            None
        }
    };

    Ok(AnalyticBounds {
        lower,
        upper,
        perfect_channel_value,
        product_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{FiniteDist, Kernel};

    fn fig2_style_instance() -> StrictInstance {
        // Uniform binary source, perfect channel, the target conditional
        // extracted from the 12-symbol trace whose (u,x,v) counts are
        // (3,1,1,1)/6 per source symbol.
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

    #[test]
    fn perfect_channel_pinches_the_sandwich() {
        let b = analytic_bounds(&fig2_style_instance()).unwrap();
        let pc = b.perfect_channel_value.expect("identity channel detected");
        assert!((b.lower - pc).abs() < 1e-12);
        assert!((b.upper - pc).abs() < 1e-12);
        // Half of log2(3) for this particular target.
        assert!((pc - 0.5 * 3.0f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn gap_equals_residual_information() {
        // upper - lower = I(U;X|V,Y) for any instance.
        let inst = StrictInstance::new(
            FiniteDist::new(vec![(U, 2)], vec![0.3, 0.7]).unwrap(),
            Kernel::bsc(0.2).unwrap(),
            Kernel::new(
                vec![(U, 2)],
                vec![(X, 2), (V, 2)],
                vec![0.4, 0.1, 0.3, 0.2, 0.05, 0.25, 0.45, 0.25],
            )
            .unwrap(),
        )
        .unwrap();
        let b = analytic_bounds(&inst).unwrap();
        let joint = inst.joint();
        let gap = mutual_information(&joint, &[U], &[X], Some(&[V, Y])).unwrap();
        assert!((b.upper - b.lower - gap).abs() < 1e-10);
        assert!(b.upper + 1e-12 >= b.lower);
    }

    #[test]
    fn product_target_detected() {
        let inst = StrictInstance::new(
            FiniteDist::uniform(vec![(U, 2)]),
            Kernel::bsc(0.25).unwrap(),
            Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], vec![0.25; 8]).unwrap(),
        )
        .unwrap();
        let b = analytic_bounds(&inst).unwrap();
        let pv = b.product_value.expect("product structure detected");
        let expect = 1.0 - crate::prob::hb(0.25).unwrap();
        assert!((pv - expect).abs() < 1e-12);
        assert!((b.lower - expect).abs() < 1e-12);
        assert!((b.upper - expect).abs() < 1e-12);
    }
}
