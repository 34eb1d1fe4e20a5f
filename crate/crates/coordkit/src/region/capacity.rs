//! Channel capacity by Blahut-Arimoto fixed-point iteration.

use crate::error::{Error, Result};
use crate::prob::info::LN_2;
use crate::prob::{Axis, FiniteDist, Kernel};

/// Capacity in bits together with a maximizing input distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub capacity: f64,
    pub argmax_input: FiniteDist,
    pub iterations: usize,
}

/// Maximizes `I(X;Y)` over input distributions.
///
/// Alternates the Blahut-Arimoto update `p(x) <- p(x) c(x) / sum p c`
/// with `c(x) = exp sum_y T(y|x) ln(T(y|x)/q(y))`, stopping when the
/// standard capacity bracket `[log2 sum p c, log2 max_x c]` is tighter
/// than `tol`.
pub fn channel_capacity(channel: &Kernel, tol: f64) -> Result<CapacityResult> {
    if tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let nx = channel.given_sizes().iter().product::<usize>();
    let ny = channel.cols();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut c = vec![0.0; nx];
    let mut capacity = 0.0;
    let mut iterations = 0;
    for _ in 0..10_000 {
        iterations += 1;
        let mut q = vec![0.0; ny];
        for x in 0..nx {
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += p[x] * channel.row(x)[y];
            }
        }
        for x in 0..nx {
            if p[x] == 0.0 {
                // A letter squeezed out of the support stays out; its
                // exponent may be unbounded and must not pollute z.
                c[x] = 0.0;
                continue;
            }
            let mut acc = 0.0;
            for y in 0..ny {
                let t = channel.row(x)[y];
                if t > 0.0 {
                    acc += t * (t / q[y]).ln();
                }
            }
            c[x] = acc.exp();
        }
        let z: f64 = p.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
        let lower = z.ln() / LN_2;
        let upper = c
            .iter()
            .zip(p.iter())
            .filter(|(_, &px)| px > 0.0)
            .map(|(&cx, _)| cx)
            .fold(f64::NEG_INFINITY, f64::max)
            .ln()
            / LN_2;
        capacity = lower.max(0.0);
        if upper - lower < tol {
            break;
        }
        for x in 0..nx {
            p[x] *= c[x] / z;
        }
    }
    let total: f64 = p.iter().sum();
    for px in p.iter_mut() {
        *px /= total;
    }
    Ok(CapacityResult {
        capacity,
        argmax_input: FiniteDist::new(vec![(Axis::X, nx)], p)?,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::hb;
    use crate::prob::Axis::{X, Y};

    #[test]
    fn bsc_capacity_matches_closed_form() {
        let r = channel_capacity(&Kernel::bsc(0.25).unwrap(), 1e-12).unwrap();
        let expect = 1.0 - hb(0.25).unwrap();
        assert!((r.capacity - expect).abs() < 1e-9, "got {}", r.capacity);
        for &p in r.argmax_input.table() {
            assert!((p - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn pure_noise_has_zero_capacity() {
        let r = channel_capacity(&Kernel::bsc(0.5).unwrap(), 1e-12).unwrap();
        assert!(r.capacity.abs() < 1e-12);
    }

    #[test]
    fn noiseless_k_letter_channel() {
        for k in [2usize, 3, 5] {
            let r = channel_capacity(&Kernel::identity(X, Y, k), 1e-12).unwrap();
            assert!((r.capacity - (k as f64).log2()).abs() < 1e-9);
            for &p in r.argmax_input.table() {
                assert!((p - 1.0 / k as f64).abs() < 1e-6);
            }
        }
    }
}
