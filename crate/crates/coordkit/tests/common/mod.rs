//! Shared helpers for the integration suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use coordkit::constraint::StrictInstance;
use coordkit::prob::Axis::{U, V, X, Y};
use coordkit::prob::{FiniteDist, Kernel};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn dirichlet_row(rng: &mut ChaCha12Rng, len: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0f64 - rng.gen::<f64>()).ln()).collect();
    let z: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= z);
    row
}

pub fn random_source(rng: &mut ChaCha12Rng) -> FiniteDist {
    FiniteDist::new(vec![(U, 2)], dirichlet_row(rng, 2)).unwrap()
}

pub fn random_channel(rng: &mut ChaCha12Rng) -> Kernel {
    let mut rows = dirichlet_row(rng, 2);
    rows.extend(dirichlet_row(rng, 2));
    Kernel::new(vec![(X, 2)], vec![(Y, 2)], rows).unwrap()
}

pub fn random_target(rng: &mut ChaCha12Rng) -> Kernel {
    let mut rows = dirichlet_row(rng, 4);
    rows.extend(dirichlet_row(rng, 4));
    Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap()
}

/// Random binary instance with an arbitrary channel.
pub fn random_instance(rng: &mut ChaCha12Rng) -> StrictInstance {
    StrictInstance::new(random_source(rng), random_channel(rng), random_target(rng)).unwrap()
}

/// Random instance whose channel is an identity permutation.
pub fn random_perfect_channel_instance(rng: &mut ChaCha12Rng) -> StrictInstance {
    let channel = if rng.gen::<bool>() {
        Kernel::identity(X, Y, 2)
    } else {
        Kernel::new(vec![(X, 2)], vec![(Y, 2)], vec![0.0, 1.0, 1.0, 0.0]).unwrap()
    };
    StrictInstance::new(random_source(rng), channel, random_target(rng)).unwrap()
}

/// Random instance whose target makes `(U, V)` independent of `(X, Y)`:
/// `Q(x, v | u) = Q(x) Q(v | u)`.
pub fn random_product_instance(rng: &mut ChaCha12Rng) -> StrictInstance {
    let qx = dirichlet_row(rng, 2);
    let qv0 = dirichlet_row(rng, 2);
    let qv1 = dirichlet_row(rng, 2);
    let mut rows = Vec::with_capacity(8);
    for qv in [&qv0, &qv1] {
        for x in 0..2 {
            for v in 0..2 {
                rows.push(qx[x] * qv[v]);
            }
        }
    }
    StrictInstance::new(
        random_source(rng),
        random_channel(rng),
        Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap(),
    )
    .unwrap()
}

/// Random target of the form `Q(v) Q(x | u, v)`, which leaves the
/// decoder output independent of the source.
pub fn random_independent_target(rng: &mut ChaCha12Rng) -> Kernel {
    let qv = dirichlet_row(rng, 2);
    let mut rows = vec![0.0; 8];
    for u in 0..2 {
        for v in 0..2 {
            let qx = dirichlet_row(rng, 2);
            for x in 0..2 {
                rows[(u * 2 + x) * 2 + v] = qv[v] * qx[x];
            }
        }
    }
    Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap()
}

/// The separation-style instance: `V = U`, channel input uniform and
/// independent, over a given channel.
pub fn separation_instance(p: f64, channel: Kernel) -> StrictInstance {
    let mut rows = vec![0.0; 8];
    for u in 0..2 {
        for x in 0..2 {
            rows[u * 4 + x * 2 + u] = 0.5;
        }
    }
    StrictInstance::new(
        FiniteDist::new(vec![(U, 2)], vec![1.0 - p, p]).unwrap(),
        channel,
        Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], rows).unwrap(),
    )
    .unwrap()
}

/// Uniform-everything product target over a given channel.
pub fn uniform_product_instance(channel: Kernel) -> StrictInstance {
    StrictInstance::new(
        FiniteDist::uniform(vec![(U, 2)]),
        channel,
        Kernel::new(vec![(U, 2)], vec![(X, 2), (V, 2)], vec![0.25; 8]).unwrap(),
    )
    .unwrap()
}
