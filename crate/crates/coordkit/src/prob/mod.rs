//! Exact finite-alphabet probability arithmetic.
//!
//! Joint and conditional tables over named axes, entropy and
//! mutual-information functionals, total variation, empirical
//! distributions of symbol sequences and robust typicality tests.
//! Every value is immutable after construction and every operation is a
//! pure function.

pub mod axis;
pub mod block;
pub mod dist;
pub mod info;
pub mod kernel;

pub use axis::{AlphabetProfile, Axis, DIST_TOL};
pub use block::{empirical_distribution, is_typical, SymbolBlock, TypicalityWindow};
pub use dist::FiniteDist;
pub use info::{conditional_entropy, entropy, hb, mutual_information};
pub use kernel::Kernel;

use crate::error::{Error, Result};

/// Joint law of a source, a target conditional and a memoryless channel:
/// `P(u) * Q(x,v|u) * T(y|x)` over the axes `(U, X, Y, V)`.
pub fn compose_chain(
    source: &FiniteDist,
    target: &Kernel,
    channel: &Kernel,
) -> Result<FiniteDist> {
    if source.axes() != [Axis::U] {
        return Err(Error::InstanceFormat("source must be a distribution over u".into()));
    }
    if target.given_axes() != [Axis::U]
        || target.target_axes() != [Axis::X, Axis::V]
    {
        return Err(Error::InstanceFormat(
            "target must be a kernel (x, v) | u".into(),
        ));
    }
    if channel.given_axes() != [Axis::X] || channel.target_axes() != [Axis::Y] {
        return Err(Error::InstanceFormat("channel must be a kernel y | x".into()));
    }
    let nu = source.sizes()[0];
    let (nx, nv) = (target.target_sizes()[0], target.target_sizes()[1]);
    let ny = channel.target_sizes()[0];
    if target.given_sizes()[0] != nu {
        return Err(Error::InstanceFormat(format!(
            "target conditions on {} source symbols, source has {nu}",
            target.given_sizes()[0]
        )));
    }
    if channel.given_sizes()[0] != nx {
        return Err(Error::InstanceFormat(format!(
            "channel expects {} inputs, target produces {nx}",
            channel.given_sizes()[0]
        )));
    }
    let mut table = vec![0.0; nu * nx * ny * nv];
    for u in 0..nu {
        let pu = source.table()[u];
        if pu == 0.0 {
            continue;
        }
        let row = target.row(u);
        for x in 0..nx {
            for v in 0..nv {
                let q = row[x * nv + v];
                if q == 0.0 {
                    continue;
                }
                for y in 0..ny {
                    let t = channel.row(x)[y];
                    table[((u * nx + x) * ny + y) * nv + v] = pu * q * t;
                }
            }
        }
    }
    Ok(FiniteDist::from_parts(
        vec![Axis::U, Axis::X, Axis::Y, Axis::V],
        vec![nu, nx, ny, nv],
        table,
    ))
}
