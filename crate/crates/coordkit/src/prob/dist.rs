//! Joint probability distributions over named finite axes.

use crate::error::{Error, Result};
use crate::prob::axis::{Axis, DIST_TOL};
use crate::prob::kernel::Kernel;

/// A probability distribution over the product of named finite axes.
///
/// The table is stored row-major over the axis order, and the axis order
/// is part of the distribution's identity: two tables with permuted axes
/// are different values and must be aligned with [`FiniteDist::reorder`].
///
/// Invariants: all entries are nonnegative and the table sums to one
/// within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    axes: Vec<Axis>,
    sizes: Vec<usize>,
    table: Vec<f64>,
}

impl FiniteDist {
    /// Validates and wraps a probability table.
    pub fn new(axes: Vec<(Axis, usize)>, table: Vec<f64>) -> Result<Self> {
        let (ax, sizes): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
        for (i, a) in ax.iter().enumerate() {
            if ax[i + 1..].contains(a) {
                return Err(Error::InstanceFormat(format!("duplicate axis {a}")));
            }
        }
        if sizes.contains(&0) {
            return Err(Error::InstanceFormat("axis of size 0".into()));
        }
        let cells: usize = sizes.iter().product();
        if table.len() != cells {
            return Err(Error::InstanceFormat(format!(
                "table has {} entries, expected {}",
                table.len(),
                cells
            )));
        }
        for (i, &p) in table.iter().enumerate() {
            if !p.is_finite() || p < -DIST_TOL {
                return Err(Error::InstanceFormat(format!(
                    "cell {i} holds invalid probability {p}"
                )));
            }
        }
        let sum: f64 = table.iter().sum();
        if (sum - 1.0).abs() > DIST_TOL {
            return Err(Error::InstanceFormat(format!(
                "table sums to {sum}, expected 1"
            )));
        }
        Ok(Self {
            axes: ax,
            sizes,
            table: table.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    /// Internal constructor for tables produced by arithmetic that
    /// preserves normalization by construction.
    pub(crate) fn from_parts(axes: Vec<Axis>, sizes: Vec<usize>, table: Vec<f64>) -> Self {
        debug_assert_eq!(table.len(), sizes.iter().product::<usize>());
        debug_assert!((table.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        Self { axes, sizes, table }
    }

    pub fn uniform(axes: Vec<(Axis, usize)>) -> Self {
        let (ax, sizes): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
        let cells: usize = sizes.iter().product();
        Self {
            axes: ax,
            sizes,
            table: vec![1.0 / cells as f64; cells],
        }
    }

    /// Point mass on one joint symbol.
    pub fn point(axes: Vec<(Axis, usize)>, symbol: &[usize]) -> Result<Self> {
        let (ax, sizes): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
        let cells: usize = sizes.iter().product();
        let mut table = vec![0.0; cells];
        let idx = flat_index(&sizes, symbol)?;
        table[idx] = 1.0;
        Ok(Self {
            axes: ax,
            sizes,
            table,
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size_of(&self, axis: Axis) -> Result<usize> {
        self.position(axis).map(|i| self.sizes[i])
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn cells(&self) -> usize {
        self.table.len()
    }

    fn position(&self, axis: Axis) -> Result<usize> {
        self.axes
            .iter()
            .position(|&a| a == axis)
            .ok_or_else(|| Error::InstanceFormat(format!("unknown axis {axis}")))
    }

    pub fn prob(&self, symbol: &[usize]) -> Result<f64> {
        Ok(self.table[flat_index(&self.sizes, symbol)?])
    }

    /// Iterates `(multi-index, probability)` over all cells.
    pub fn iter_cells(&self) -> CellIter<'_> {
        CellIter {
            dist: self,
            next: 0,
            idx: vec![0; self.sizes.len()],
        }
    }

    /// Marginal onto `keep`, in the requested axis order.
    pub fn marginal(&self, keep: &[Axis]) -> Result<FiniteDist> {
        let positions: Vec<usize> = keep
            .iter()
            .map(|&a| self.position(a))
            .collect::<Result<_>>()?;
        for (i, a) in keep.iter().enumerate() {
            if keep[i + 1..].contains(a) {
                return Err(Error::InstanceFormat(format!("duplicate axis {a}")));
            }
        }
        let out_sizes: Vec<usize> = positions.iter().map(|&p| self.sizes[p]).collect();
        let mut out = vec![0.0; out_sizes.iter().product()];
        let mut idx = vec![0usize; self.sizes.len()];
        for &p in &self.table {
            let mut o = 0;
            for (k, &pos) in positions.iter().enumerate() {
                o = o * out_sizes[k] + idx[pos];
            }
            out[o] += p;
            advance(&mut idx, &self.sizes);
        }
        Ok(FiniteDist::from_parts(keep.to_vec(), out_sizes, out))
    }

    /// Conditional kernel of `target` given `given`.
    ///
    /// Rows conditioned on zero-mass events are filled uniform, so every
    /// returned kernel is well-formed regardless of the support.
    pub fn conditional(&self, target: &[Axis], given: &[Axis]) -> Result<Kernel> {
        for a in target {
            if given.contains(a) {
                return Err(Error::InstanceFormat(format!(
                    "axis {a} requested on both sides of the conditional"
                )));
            }
        }
        let all: Vec<Axis> = given.iter().chain(target.iter()).copied().collect();
        let joint = self.marginal(&all)?;
        let given_sizes: Vec<usize> = given
            .iter()
            .map(|&a| self.size_of(a))
            .collect::<Result<_>>()?;
        let target_sizes: Vec<usize> = target
            .iter()
            .map(|&a| self.size_of(a))
            .collect::<Result<_>>()?;
        let rows: usize = given_sizes.iter().product();
        let cols: usize = target_sizes.iter().product();
        let mut table = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let slice = &joint.table[r * cols..(r + 1) * cols];
            let mass: f64 = slice.iter().sum();
            if mass <= 0.0 {
                table.extend(std::iter::repeat_n(1.0 / cols as f64, cols));
            } else {
                table.extend(slice.iter().map(|&p| p / mass));
            }
        }
        Kernel::new(
            given.iter().copied().zip(given_sizes).collect(),
            target.iter().copied().zip(target_sizes).collect(),
            table,
        )
    }

    /// Same distribution with axes permuted into `order`.
    pub fn reorder(&self, order: &[Axis]) -> Result<FiniteDist> {
        if order.len() != self.axes.len() {
            return Err(Error::InstanceFormat(
                "reorder must mention every axis exactly once".into(),
            ));
        }
        self.marginal(order)
    }

    /// Product of two distributions over disjoint axes.
    pub fn product(&self, other: &FiniteDist) -> Result<FiniteDist> {
        for a in other.axes() {
            if self.axes.contains(a) {
                return Err(Error::InstanceFormat(format!("axis {a} present in both factors")));
            }
        }
        let axes: Vec<Axis> = self.axes.iter().chain(other.axes.iter()).copied().collect();
        let sizes: Vec<usize> = self.sizes.iter().chain(other.sizes.iter()).copied().collect();
        let mut table = Vec::with_capacity(self.table.len() * other.table.len());
        for &p in &self.table {
            for &q in &other.table {
                table.push(p * q);
            }
        }
        Ok(FiniteDist::from_parts(axes, sizes, table))
    }

    /// Total variation distance, `0.5 * sum |p - q|`.
    pub fn tv_distance(&self, other: &FiniteDist) -> Result<f64> {
        if self.axes != other.axes || self.sizes != other.sizes {
            return Err(Error::InstanceFormat(
                "total variation requires identical axes and sizes".into(),
            ));
        }
        Ok(self
            .table
            .iter()
            .zip(other.table.iter())
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
            / 2.0)
    }

    /// Expectation of a table indexed like this distribution.
    pub fn expectation(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.table.len() {
            return Err(Error::InstanceFormat(format!(
                "value table has {} entries, expected {}",
                values.len(),
                self.table.len()
            )));
        }
        Ok(self
            .table
            .iter()
            .zip(values.iter())
            .map(|(p, v)| p * v)
            .sum())
    }
}

pub struct CellIter<'a> {
    dist: &'a FiniteDist,
    next: usize,
    idx: Vec<usize>,
}

impl<'a> Iterator for CellIter<'a> {
    type Item = (Vec<usize>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.dist.table.len() {
            return None;
        }
        let item = (self.idx.clone(), self.dist.table[self.next]);
        advance(&mut self.idx, &self.dist.sizes);
        self.next += 1;
        Some(item)
    }
}

pub(crate) fn flat_index(sizes: &[usize], symbol: &[usize]) -> Result<usize> {
    if symbol.len() != sizes.len() {
        return Err(Error::InstanceFormat(format!(
            "index has {} coordinates, expected {}",
            symbol.len(),
            sizes.len()
        )));
    }
    let mut idx = 0;
    for (k, (&s, &i)) in sizes.iter().zip(symbol.iter()).enumerate() {
        if i >= s {
            return Err(Error::InstanceFormat(format!(
                "coordinate {k} is {i}, axis size {s}"
            )));
        }
        idx = idx * s + i;
    }
    Ok(idx)
}

pub(crate) fn advance(idx: &mut [usize], sizes: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < sizes[k] {
            return;
        }
        idx[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::axis::Axis::{U, V, X};

    #[test]
    fn rejects_unnormalized_table() {
        let err = FiniteDist::new(vec![(U, 2)], vec![0.3, 0.6]);
        assert!(err.is_err());
    }

    #[test]
    fn marginal_of_product_recovers_factor() {
        let p = FiniteDist::new(vec![(U, 2)], vec![0.3, 0.7]).unwrap();
        let q = FiniteDist::new(vec![(X, 3)], vec![0.2, 0.5, 0.3]).unwrap();
        let joint = p.product(&q).unwrap();
        let back = joint.marginal(&[U]).unwrap();
        for (a, b) in back.table().iter().zip(p.table()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn conditional_fills_uniform_on_zero_mass() {
        // V = 0 has zero mass, so the row conditioned on it is uniform.
        let joint = FiniteDist::new(vec![(U, 2), (V, 2)], vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let k = joint.conditional(&[U], &[V]).unwrap();
        assert_eq!(k.row(1), &[0.5, 0.5]);
        assert_eq!(k.row(0), &[0.5, 0.5]);
    }

    #[test]
    fn reorder_permutes_table() {
        let joint =
            FiniteDist::new(vec![(U, 2), (X, 2)], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let flipped = joint.reorder(&[X, U]).unwrap();
        assert_eq!(flipped.prob(&[1, 0]).unwrap(), 0.2);
        assert_eq!(flipped.prob(&[0, 1]).unwrap(), 0.3);
    }

    #[test]
    fn tv_basics() {
        let p = FiniteDist::new(vec![(U, 2)], vec![0.5, 0.5]).unwrap();
        let q = FiniteDist::new(vec![(U, 2)], vec![1.0, 0.0]).unwrap();
        assert_eq!(p.tv_distance(&p).unwrap(), 0.0);
        assert!((p.tv_distance(&q).unwrap() - 0.5).abs() < 1e-15);
        // Disjoint supports sit at distance one.
        let r = FiniteDist::new(vec![(U, 2)], vec![0.0, 1.0]).unwrap();
        assert_eq!(q.tv_distance(&r).unwrap(), 1.0);
    }
}
