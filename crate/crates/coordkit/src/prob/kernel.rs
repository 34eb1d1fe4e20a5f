//! Conditional probability tables (Markov kernels) over named axes.

use crate::error::{Error, Result};
use crate::prob::axis::{Axis, DIST_TOL};
use crate::prob::dist::{advance, flat_index, FiniteDist};

/// A conditional distribution: one probability row over the target axes
/// for every joint index of the given axes.
///
/// Rows are stored contiguously, row-major over the given axes, each row
/// row-major over the target axes. Every row sums to one within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    given_axes: Vec<Axis>,
    given_sizes: Vec<usize>,
    target_axes: Vec<Axis>,
    target_sizes: Vec<usize>,
    table: Vec<f64>,
}

impl Kernel {
    pub fn new(
        given: Vec<(Axis, usize)>,
        target: Vec<(Axis, usize)>,
        table: Vec<f64>,
    ) -> Result<Self> {
        let (given_axes, given_sizes): (Vec<_>, Vec<_>) = given.into_iter().unzip();
        let (target_axes, target_sizes): (Vec<_>, Vec<_>) = target.into_iter().unzip();
        for a in &target_axes {
            if given_axes.contains(a) {
                return Err(Error::InstanceFormat(format!(
                    "axis {a} on both sides of a kernel"
                )));
            }
        }
        if given_sizes.iter().chain(target_sizes.iter()).any(|&s| s == 0) {
            return Err(Error::InstanceFormat("axis of size 0".into()));
        }
        let rows: usize = given_sizes.iter().product();
        let cols: usize = target_sizes.iter().product();
        if table.len() != rows * cols {
            return Err(Error::InstanceFormat(format!(
                "kernel table has {} entries, expected {}",
                table.len(),
                rows * cols
            )));
        }
        for r in 0..rows {
            let row = &table[r * cols..(r + 1) * cols];
            if row.iter().any(|&p| !p.is_finite() || p < -DIST_TOL) {
                return Err(Error::InstanceFormat(format!("row {r} holds an invalid probability")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > DIST_TOL {
                return Err(Error::InstanceFormat(format!(
                    "row {r} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Self {
            given_axes,
            given_sizes,
            target_axes,
            target_sizes,
            table: table.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    /// Deterministic identity kernel on `n` letters.
    pub fn identity(given: Axis, target: Axis, n: usize) -> Self {
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            table[i * n + i] = 1.0;
        }
        Self {
            given_axes: vec![given],
            given_sizes: vec![n],
            target_axes: vec![target],
            target_sizes: vec![n],
            table,
        }
    }

    /// Binary symmetric channel with crossover probability `eps`.
    pub fn bsc(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Domain(format!("crossover {eps} outside [0,1]")));
        }
        Kernel::new(
            vec![(Axis::X, 2)],
            vec![(Axis::Y, 2)],
            vec![1.0 - eps, eps, eps, 1.0 - eps],
        )
    }

    pub fn given_axes(&self) -> &[Axis] {
        &self.given_axes
    }

    pub fn target_axes(&self) -> &[Axis] {
        &self.target_axes
    }

    pub fn given_sizes(&self) -> &[usize] {
        &self.given_sizes
    }

    pub fn target_sizes(&self) -> &[usize] {
        &self.target_sizes
    }

    pub fn rows(&self) -> usize {
        self.given_sizes.iter().product()
    }

    pub fn cols(&self) -> usize {
        self.target_sizes.iter().product()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let cols = self.cols();
        &self.table[r * cols..(r + 1) * cols]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn prob(&self, given: &[usize], target: &[usize]) -> Result<f64> {
        let r = flat_index(&self.given_sizes, given)?;
        let c = flat_index(&self.target_sizes, target)?;
        Ok(self.table[r * self.cols() + c])
    }

    /// True when the kernel is a deterministic bijection of equal-sized
    /// alphabets (every row a point mass, all targets distinct).
    pub fn is_identity_permutation(&self) -> bool {
        let rows = self.rows();
        let cols = self.cols();
        if rows != cols {
            return false;
        }
        let mut seen = vec![false; cols];
        for r in 0..rows {
            let row = self.row(r);
            let mut hit = None;
            for (c, &p) in row.iter().enumerate() {
                if (p - 1.0).abs() <= DIST_TOL {
                    hit = Some(c);
                } else if p > DIST_TOL {
                    return false;
                }
            }
            match hit {
                Some(c) if !seen[c] => seen[c] = true,
                _ => return false,
            }
        }
        true
    }

    /// Joint distribution `prior(given) * kernel(target | given)`.
    ///
    /// The result carries the given axes followed by the target axes.
    pub fn join(&self, prior: &FiniteDist) -> Result<FiniteDist> {
        if prior.axes() != self.given_axes || prior.sizes() != self.given_sizes {
            return Err(Error::InstanceFormat(
                "prior axes do not match the kernel's given axes".into(),
            ));
        }
        let cols = self.cols();
        let mut table = Vec::with_capacity(prior.cells() * cols);
        for (r, &p) in prior.table().iter().enumerate() {
            for &q in self.row(r) {
                table.push(p * q);
            }
        }
        let axes: Vec<Axis> = self
            .given_axes
            .iter()
            .chain(self.target_axes.iter())
            .copied()
            .collect();
        let sizes: Vec<usize> = self
            .given_sizes
            .iter()
            .chain(self.target_sizes.iter())
            .copied()
            .collect();
        Ok(FiniteDist::from_parts(axes, sizes, table))
    }

    /// Iterates `(given multi-index, row slice)`.
    pub fn iter_rows(&self) -> impl Iterator<Item = (Vec<usize>, &[f64])> {
        let mut idx = vec![0usize; self.given_sizes.len()];
        (0..self.rows()).map(move |r| {
            let item = (idx.clone(), self.row(r));
            advance(&mut idx, &self.given_sizes);
            item
        })
    }
}
