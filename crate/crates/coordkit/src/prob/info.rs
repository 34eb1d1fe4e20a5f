//! Entropy and mutual-information functionals, in bits.
//!
//! All logarithms are base 2 and `0 * log 0 = 0`.

use crate::error::{Error, Result};
use crate::prob::axis::Axis;
use crate::prob::dist::FiniteDist;

pub(crate) const LN_2: f64 = std::f64::consts::LN_2;

/// Entropy of the marginal of `joint` on `axes`, in bits.
pub fn entropy(joint: &FiniteDist, axes: &[Axis]) -> Result<f64> {
    let m = joint.marginal(axes)?;
    Ok(entropy_of_table(m.table()))
}

pub(crate) fn entropy_of_table(table: &[f64]) -> f64 {
    -table
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
        / LN_2
}

/// Conditional entropy `H(target | given)` in bits.
pub fn conditional_entropy(joint: &FiniteDist, target: &[Axis], given: &[Axis]) -> Result<f64> {
    let all: Vec<Axis> = given.iter().chain(target.iter()).copied().collect();
    if given.is_empty() {
        return entropy(joint, target);
    }
    Ok(entropy(joint, &all)? - entropy(joint, given)?)
}

/// Mutual information `I(a ; b | c)` in bits.
///
/// The three groups must be disjoint subsets of the joint's axes. Tiny
/// negative values from floating-point cancellation are clamped to zero.
pub fn mutual_information(
    joint: &FiniteDist,
    a: &[Axis],
    b: &[Axis],
    c: Option<&[Axis]>,
) -> Result<f64> {
    let c = c.unwrap_or(&[]);
    for ax in a {
        if b.contains(ax) || c.contains(ax) {
            return Err(Error::InstanceFormat(format!("axis {ax} in two groups")));
        }
    }
    for ax in b {
        if c.contains(ax) {
            return Err(Error::InstanceFormat(format!("axis {ax} in two groups")));
        }
    }
    let ac: Vec<Axis> = c.iter().chain(a.iter()).copied().collect();
    let bc: Vec<Axis> = c.iter().chain(b.iter()).copied().collect();
    let abc: Vec<Axis> = c.iter().chain(a.iter()).chain(b.iter()).copied().collect();
    // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
    let mut i = entropy(joint, &ac)? + entropy(joint, &bc)? - entropy(joint, &abc)?;
    if !c.is_empty() {
        i -= entropy(joint, c)?;
    }
    if i < 0.0 {
        debug_assert!(i > -1e-9, "mutual information {i} too negative");
        i = 0.0;
    }
    Ok(i)
}

/// Binary entropy `-x log2 x - (1-x) log2 (1-x)` with endpoint value 0.
pub fn hb(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0,1]")));
    }
    Ok(entropy_of_table(&[x, 1.0 - x]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::axis::Axis::{U, V, X, Y};
    use crate::prob::kernel::Kernel;

    #[test]
    fn independent_axes_have_zero_information() {
        let p = FiniteDist::new(vec![(U, 2)], vec![0.3, 0.7]).unwrap();
        let q = FiniteDist::new(vec![(V, 3)], vec![0.2, 0.5, 0.3]).unwrap();
        let joint = p.product(&q).unwrap();
        let got = mutual_information(&joint, &[U], &[V], None).unwrap();
        assert!(got.abs() < 1e-12, "got {got}");
    }

    #[test]
    fn bsc_information_matches_closed_form() {
        // Uniform input through a crossover-0.25 binary symmetric channel.
        let input = FiniteDist::uniform(vec![(X, 2)]);
        let joint = Kernel::bsc(0.25).unwrap().join(&input).unwrap();
        let expect = 1.0 - hb(0.25).unwrap();
        let got = mutual_information(&joint, &[X], &[Y], None).unwrap();
        assert!((got - expect).abs() < 1e-12, "got {got}, expected {expect}");
        // Hb(0.25) = 2 - 0.75 * log2(3)
        assert!((hb(0.25).unwrap() - (2.0 - 0.75 * 3.0f64.log2())).abs() < 1e-15);
    }

    #[test]
    fn hb_endpoints() {
        assert_eq!(hb(0.0).unwrap(), 0.0);
        assert_eq!(hb(1.0).unwrap(), 0.0);
        assert_eq!(hb(0.5).unwrap(), 1.0);
        assert!(hb(1.5).is_err());
    }

    #[test]
    fn overlapping_groups_rejected() {
        let joint = FiniteDist::uniform(vec![(U, 2), (V, 2)]);
        assert!(mutual_information(&joint, &[U], &[U], None).is_err());
        assert!(mutual_information(&joint, &[U], &[V], Some(&[V])).is_err());
    }
}
