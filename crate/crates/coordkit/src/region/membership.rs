//! Achievability membership for target conditionals.

use crate::constraint::{maximize_strict, ConstraintReport, MaximizeOpts, StrictInstance, Verdict};
use crate::error::Result;
use crate::prob::{mutual_information, Axis};
use crate::region::capacity::channel_capacity;

/// Numerical zero for capacity and mutual-information tests.
pub const ZERO_TOL: f64 = 1e-9;

/// Decides whether a target conditional is achievable.
///
/// Over a zero-capacity channel the answer is a dichotomy: achievable
/// exactly when the target leaves the decoder output independent of the
/// source. Otherwise the certified maximization decides, with value zero
/// counting as achievable.
pub fn membership(
    instance: &StrictInstance,
    opts: &MaximizeOpts,
) -> Result<(Verdict, ConstraintReport)> {
    let report = maximize_strict(instance, opts)?;
    let capacity = channel_capacity(instance.channel(), 1e-10)?.capacity;
    let verdict = if capacity <= ZERO_TOL {
        let joint = instance.joint();
        let iuv = mutual_information(&joint, &[Axis::U], &[Axis::V], None)?;
        if iuv <= ZERO_TOL {
            Verdict::Achievable
        } else {
            Verdict::NotAchievable
        }
    } else {
        report.verdict
    };
    Ok((verdict, report))
}
