//! Symbol sequences, empirical distributions and robust typicality.

use crate::error::{Error, Result};
use crate::prob::axis::Axis;
use crate::prob::dist::FiniteDist;

/// Aligned symbol sequences of common length `n`, one per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolBlock {
    axes: Vec<Axis>,
    sizes: Vec<usize>,
    n: usize,
    /// One sequence per axis, each of length `n`.
    seqs: Vec<Vec<u8>>,
}

impl SymbolBlock {
    pub fn new(axes: Vec<(Axis, usize)>, seqs: Vec<Vec<u8>>) -> Result<Self> {
        let (ax, sizes): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
        if seqs.len() != ax.len() {
            return Err(Error::InstanceFormat(format!(
                "{} sequences for {} axes",
                seqs.len(),
                ax.len()
            )));
        }
        if seqs.is_empty() || seqs[0].is_empty() {
            return Err(Error::InstanceFormat("empty block".into()));
        }
        let n = seqs[0].len();
        for (k, s) in seqs.iter().enumerate() {
            if s.len() != n {
                return Err(Error::InstanceFormat(format!(
                    "sequence {k} has length {}, expected {n}",
                    s.len()
                )));
            }
            if let Some(&bad) = s.iter().find(|&&sym| sym as usize >= sizes[k]) {
                return Err(Error::InstanceFormat(format!(
                    "symbol {bad} out of range for axis {} (size {})",
                    ax[k], sizes[k]
                )));
            }
        }
        Ok(Self {
            axes: ax,
            sizes,
            n,
            seqs,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn sequence(&self, axis: Axis) -> Result<&[u8]> {
        let k = self
            .axes
            .iter()
            .position(|&a| a == axis)
            .ok_or_else(|| Error::InstanceFormat(format!("unknown axis {axis}")))?;
        Ok(&self.seqs[k])
    }

    /// Occurrence counts of joint symbols, row-major over the axis order.
    pub fn counts(&self) -> Vec<u64> {
        let cells: usize = self.sizes.iter().product();
        let mut counts = vec![0u64; cells];
        for i in 0..self.n {
            let mut idx = 0;
            for (k, s) in self.seqs.iter().enumerate() {
                idx = idx * self.sizes[k] + s[i] as usize;
            }
            counts[idx] += 1;
        }
        counts
    }

    /// Concatenation of blocks over identical axes.
    pub fn concat(blocks: &[SymbolBlock]) -> Result<SymbolBlock> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InstanceFormat("empty block list".into()))?;
        let mut seqs = first.seqs.clone();
        for b in &blocks[1..] {
            if b.axes != first.axes || b.sizes != first.sizes {
                return Err(Error::InstanceFormat("blocks disagree on axes".into()));
            }
            for (dst, src) in seqs.iter_mut().zip(b.seqs.iter()) {
                dst.extend_from_slice(src);
            }
        }
        Ok(SymbolBlock {
            axes: first.axes.clone(),
            sizes: first.sizes.clone(),
            n: seqs[0].len(),
            seqs,
        })
    }
}

/// Empirical distribution of a block: occurrence counts divided by `n`.
pub fn empirical_distribution(block: &SymbolBlock) -> FiniteDist {
    let counts = block.counts();
    let n = block.len() as f64;
    FiniteDist::from_parts(
        block.axes().to_vec(),
        block.sizes().to_vec(),
        counts.iter().map(|&c| c as f64 / n).collect(),
    )
}

/// Robust typicality: every cell `a` satisfies
/// `|N(a)/n - Q(a)| <= eps * Q(a)`, so cells of zero probability must
/// have zero count.
pub fn is_typical(block: &SymbolBlock, target: &FiniteDist, eps: f64) -> Result<bool> {
    if eps <= 0.0 {
        return Err(Error::Domain(format!("typicality tolerance {eps} must be positive")));
    }
    if block.axes() != target.axes() || block.sizes() != target.sizes() {
        return Err(Error::InstanceFormat(
            "block axes do not match the target distribution".into(),
        ));
    }
    let counts = block.counts();
    let n = block.len() as f64;
    Ok(counts
        .iter()
        .zip(target.table().iter())
        .all(|(&c, &q)| (c as f64 / n - q).abs() <= eps * q))
}

/// Precomputed per-cell integer count windows for fast repeated
/// typicality checks against one target at fixed `n` and `eps`.
///
/// A cell of probability `q` admits counts in `[n q (1-eps), n q (1+eps)]`.
#[derive(Debug, Clone)]
pub struct TypicalityWindow {
    lo: Vec<u64>,
    hi: Vec<u64>,
    pub n: usize,
}

impl TypicalityWindow {
    pub fn new(target: &FiniteDist, n: usize, eps: f64) -> Self {
        let mut lo = Vec::with_capacity(target.cells());
        let mut hi = Vec::with_capacity(target.cells());
        let nf = n as f64;
        for &q in target.table() {
            // Guard the boundaries against rounding: widen by one ulp-ish.
            let l = (nf * q * (1.0 - eps) - 1e-9).ceil().max(0.0) as u64;
            let h = (nf * q * (1.0 + eps) + 1e-9).floor() as u64;
            lo.push(l);
            hi.push(h);
        }
        Self { lo, hi, n }
    }

    pub fn admits(&self, counts: &[u64]) -> bool {
        counts
            .iter()
            .zip(self.lo.iter().zip(self.hi.iter()))
            .all(|(&c, (&l, &h))| c >= l && c <= h)
    }

    /// True when no integer count vector can satisfy the windows.
    pub fn is_empty_window(&self) -> bool {
        self.lo.iter().zip(self.hi.iter()).any(|(&l, &h)| l > h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::axis::Axis::{U, V, X};

    fn example_trace() -> SymbolBlock {
        // A 12-symbol (U, X, V) trace over a perfect channel.
        let u = vec![0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1];
        let x = vec![0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 0, 1];
        let v = vec![0, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1];
        SymbolBlock::new(vec![(U, 2), (X, 2), (V, 2)], vec![u, x, v]).unwrap()
    }

    #[test]
    fn twelve_symbol_trace_counts() {
        let counts = example_trace().counts();
        // (u,x,v) row-major: the two aligned cells hold 3/12, the rest 1/12.
        assert_eq!(counts, vec![3, 1, 1, 1, 1, 1, 1, 3]);
        let emp = empirical_distribution(&example_trace());
        assert_eq!(emp.prob(&[0, 0, 0]).unwrap(), 3.0 / 12.0);
        assert_eq!(emp.prob(&[1, 1, 1]).unwrap(), 3.0 / 12.0);
        assert_eq!(emp.prob(&[0, 1, 0]).unwrap(), 1.0 / 12.0);
        assert!((emp.table().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_to_uniform() {
        // Two cells at 3/12 and six at 1/12 against the uniform 1/8:
        // 0.5 * (2 * |3/12 - 1/8| + 6 * |1/12 - 1/8|) = 1/4.
        let emp = empirical_distribution(&example_trace());
        let uniform = FiniteDist::uniform(vec![(U, 2), (X, 2), (V, 2)]);
        let tv = emp.tv_distance(&uniform).unwrap();
        assert!((tv - 0.25).abs() < 1e-15, "tv {tv}");
    }

    #[test]
    fn trace_conditional_entropy_identity() {
        // H(X, U | V) - H(U) = 1/2 log2(3) for the twelve-symbol trace,
        // and conditioning the joint gives Q(X = 0 | V = 0) = 4/6.
        let emp = empirical_distribution(&example_trace());
        let value = crate::prob::conditional_entropy(&emp, &[X, U], &[V]).unwrap()
            - crate::prob::entropy(&emp, &[U]).unwrap();
        assert!((value - 0.5 * 3.0f64.log2()).abs() < 1e-12);
        let x_given_v = emp.conditional(&[X], &[V]).unwrap();
        assert!((x_given_v.prob(&[0], &[0]).unwrap() - 4.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sequence_gives_point_mass() {
        let b = SymbolBlock::new(vec![(U, 2)], vec![vec![1; 7]]).unwrap();
        let emp = empirical_distribution(&b);
        assert_eq!(emp.table(), &[0.0, 1.0]);
    }

    #[test]
    fn concatenation_mixes_empiricals_by_length() {
        let b1 = SymbolBlock::new(vec![(U, 2)], vec![vec![0, 0, 1]]).unwrap();
        let b2 = SymbolBlock::new(vec![(U, 2)], vec![vec![1, 1, 1]]).unwrap();
        let cat = SymbolBlock::concat(&[b1.clone(), b2.clone()]).unwrap();
        let e = empirical_distribution(&cat);
        let e1 = empirical_distribution(&b1);
        let e2 = empirical_distribution(&b2);
        for c in 0..2 {
            let mixed = 0.5 * e1.table()[c] + 0.5 * e2.table()[c];
            assert!((e.table()[c] - mixed).abs() < 1e-15);
        }
    }

    #[test]
    fn own_type_is_always_typical() {
        let b = example_trace();
        let emp = empirical_distribution(&b);
        assert!(is_typical(&b, &emp, 0.01).unwrap());
        assert!(is_typical(&b, &emp, 1e-9).unwrap());
    }

    #[test]
    fn zero_probability_cell_breaks_typicality() {
        let target = FiniteDist::new(vec![(U, 2)], vec![1.0, 0.0]).unwrap();
        let b = SymbolBlock::new(vec![(U, 2)], vec![vec![0, 0, 0, 1]]).unwrap();
        assert!(!is_typical(&b, &target, 0.5).unwrap());
        let clean = SymbolBlock::new(vec![(U, 2)], vec![vec![0, 0, 0, 0]]).unwrap();
        assert!(is_typical(&clean, &target, 0.01).unwrap());
    }

    #[test]
    fn windows_match_direct_check() {
        let target = FiniteDist::new(vec![(X, 2)], vec![0.75, 0.25]).unwrap();
        for n in [7usize, 16, 33] {
            let w = TypicalityWindow::new(&target, n, 0.2);
            for ones in 0..=n {
                let seq: Vec<u8> = (0..n).map(|i| u8::from(i < ones)).collect();
                let b = SymbolBlock::new(vec![(X, 2)], vec![seq]).unwrap();
                assert_eq!(
                    w.admits(&b.counts()),
                    is_typical(&b, &target, 0.2).unwrap(),
                    "disagreement at n={n}, ones={ones}"
                );
            }
        }
    }
}
