//! Problem instances and factorization checks.

use crate::error::{Error, Result};
use crate::prob::{compose_chain, AlphabetProfile, Axis, FiniteDist, Kernel};

/// Tolerance for factorization checks.
pub const DECOMP_TOL: f64 = 1e-7;

/// A strictly-causal problem instance: source law over `U`, memoryless
/// channel `Y | X` and target conditional `(X, V) | U`. The induced joint
/// `P(u) Q(x,v|u) T(y|x)` satisfies the strictly-causal factorization by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictInstance {
    source: FiniteDist,
    channel: Kernel,
    target: Kernel,
}

impl StrictInstance {
    pub fn new(source: FiniteDist, channel: Kernel, target: Kernel) -> Result<Self> {
        // compose_chain validates all axis/size compatibility.
        compose_chain(&source, &target, &channel)?;
        Ok(Self {
            source,
            channel,
            target,
        })
    }

    pub fn source(&self) -> &FiniteDist {
        &self.source
    }

    pub fn channel(&self) -> &Kernel {
        &self.channel
    }

    pub fn target(&self) -> &Kernel {
        &self.target
    }

    pub fn profile(&self) -> AlphabetProfile {
        AlphabetProfile::new(
            self.source.sizes()[0],
            self.target.target_sizes()[0],
            self.channel.target_sizes()[0],
            self.target.target_sizes()[1],
        )
        .expect("sizes validated at construction")
    }

    /// The induced joint over `(U, X, Y, V)`.
    pub fn joint(&self) -> FiniteDist {
        compose_chain(&self.source, &self.target, &self.channel)
            .expect("validated at construction")
    }

    /// The joint over `(U, X, Y, V, W)` induced by an auxiliary kernel:
    /// `P(u) Q(x,v|u) Q(w|u,x,v) T(y|x)`.
    pub fn joint_with_aux(&self, aux: &AuxKernel) -> Result<FiniteDist> {
        let p = self.profile();
        let (nu, nx, ny, nv) = (p.u_size, p.x_size, p.y_size, p.v_size);
        let nw = aux.w_size();
        if aux.kernel.given_sizes() != [nu, nx, nv] {
            return Err(Error::InstanceFormat(
                "auxiliary kernel conditions on the wrong alphabet sizes".into(),
            ));
        }
        let mut table = vec![0.0; nu * nx * ny * nv * nw];
        for u in 0..nu {
            let pu = self.source.table()[u];
            let trow = self.target.row(u);
            for x in 0..nx {
                for v in 0..nv {
                    let base = pu * trow[x * nv + v];
                    if base == 0.0 {
                        continue;
                    }
                    let rrow = aux.kernel.row((u * nx + x) * nv + v);
                    for y in 0..ny {
                        let t = self.channel.row(x)[y];
                        if t == 0.0 {
                            continue;
                        }
                        for w in 0..nw {
                            table[(((u * nx + x) * ny + y) * nv + v) * nw + w] =
                                base * t * rrow[w];
                        }
                    }
                }
            }
        }
        Ok(FiniteDist::from_parts(
            vec![Axis::U, Axis::X, Axis::Y, Axis::V, Axis::W],
            vec![nu, nx, ny, nv, nw],
            table,
        ))
    }
}

/// Auxiliary-variable kernel `Q(w | u, x, v)` for the strictly-causal
/// information constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxKernel {
    kernel: Kernel,
    ceiling_overridden: bool,
}

impl AuxKernel {
    /// Wraps a kernel `W | (U, X, V)` and flags auxiliary alphabets above
    /// the default support ceiling `|U||X||V| + 1`.
    pub fn new(kernel: Kernel) -> Result<Self> {
        if kernel.given_axes() != [Axis::U, Axis::X, Axis::V]
            || kernel.target_axes() != [Axis::W]
        {
            return Err(Error::InstanceFormat(
                "auxiliary kernel must map (u, x, v) to w".into(),
            ));
        }
        let g = kernel.given_sizes();
        let ceiling = g[0] * g[1] * g[2] + 1;
        let overridden = kernel.target_sizes()[0] > ceiling;
        Ok(Self {
            kernel,
            ceiling_overridden: overridden,
        })
    }

    pub fn from_rows(
        u_size: usize,
        x_size: usize,
        v_size: usize,
        w_size: usize,
        rows: Vec<f64>,
    ) -> Result<Self> {
        let kernel = Kernel::new(
            vec![(Axis::U, u_size), (Axis::X, x_size), (Axis::V, v_size)],
            vec![(Axis::W, w_size)],
            rows,
        )?;
        AuxKernel::new(kernel)
    }

    /// Deterministic choice `W = X`, optimal for perfect channels and for
    /// product targets.
    pub fn w_equals_x(profile: &AlphabetProfile, w_size: usize) -> Result<Self> {
        if w_size < profile.x_size {
            return Err(Error::Configuration(format!(
                "w_size {w_size} cannot embed the channel input alphabet of size {}",
                profile.x_size
            )));
        }
        Self::deterministic(profile, w_size, |_, x, _| x)
    }

    /// Deterministic pairing `W = (X, V)`.
    pub fn w_equals_xv(profile: &AlphabetProfile, w_size: usize) -> Result<Self> {
        if w_size < profile.x_size * profile.v_size {
            return Err(Error::Configuration(format!(
                "w_size {w_size} cannot embed the (x, v) alphabet of size {}",
                profile.x_size * profile.v_size
            )));
        }
        let nv = profile.v_size;
        Self::deterministic(profile, w_size, move |_, x, v| x * nv + v)
    }

    /// Constant auxiliary variable.
    pub fn degenerate(profile: &AlphabetProfile, w_size: usize) -> Result<Self> {
        Self::deterministic(profile, w_size, |_, _, _| 0)
    }

    fn deterministic(
        profile: &AlphabetProfile,
        w_size: usize,
        f: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let (nu, nx, nv) = (profile.u_size, profile.x_size, profile.v_size);
        let mut rows = vec![0.0; nu * nx * nv * w_size];
        for u in 0..nu {
            for x in 0..nx {
                for v in 0..nv {
                    let w = f(u, x, v);
                    rows[((u * nx + x) * nv + v) * w_size + w] = 1.0;
                }
            }
        }
        Self::from_rows(nu, nx, nv, w_size, rows)
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn w_size(&self) -> usize {
        self.kernel.target_sizes()[0]
    }

    pub fn ceiling_overridden(&self) -> bool {
        self.ceiling_overridden
    }
}

/// A causal-decoder structure: `P(u) Q(x,w1,w2|u) T(y|x) Q(v|y,w2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalStructure {
    source: FiniteDist,
    channel: Kernel,
    front: Kernel,
    back: Kernel,
    ceiling_overridden: bool,
}

impl CausalStructure {
    pub fn new(
        source: FiniteDist,
        channel: Kernel,
        front: Kernel,
        back: Kernel,
    ) -> Result<Self> {
        if source.axes() != [Axis::U] {
            return Err(Error::InstanceFormat("source must be a distribution over u".into()));
        }
        if channel.given_axes() != [Axis::X] || channel.target_axes() != [Axis::Y] {
            return Err(Error::InstanceFormat("channel must be a kernel y | x".into()));
        }
        if front.given_axes() != [Axis::U]
            || front.target_axes() != [Axis::X, Axis::W1, Axis::W2]
        {
            return Err(Error::InstanceFormat(
                "front must be a kernel (x, w1, w2) | u".into(),
            ));
        }
        if back.given_axes() != [Axis::Y, Axis::W2] || back.target_axes() != [Axis::V] {
            return Err(Error::InstanceFormat("back must be a kernel v | (y, w2)".into()));
        }
        if front.given_sizes()[0] != source.sizes()[0] {
            return Err(Error::InstanceFormat("front and source disagree on |U|".into()));
        }
        if channel.given_sizes()[0] != front.target_sizes()[0] {
            return Err(Error::InstanceFormat("channel and front disagree on |X|".into()));
        }
        if back.given_sizes() != [channel.target_sizes()[0], front.target_sizes()[2]] {
            return Err(Error::InstanceFormat(
                "back must condition on (|Y|, |W2|) matching channel and front".into(),
            ));
        }
        let nu = source.sizes()[0];
        let nx = front.target_sizes()[0];
        let ny = channel.target_sizes()[0];
        let nv = back.target_sizes()[0];
        let ceiling = nu * nx * ny * nv + 2;
        let overridden =
            front.target_sizes()[1] > ceiling || front.target_sizes()[2] > ceiling;
        Ok(Self {
            source,
            channel,
            front,
            back,
            ceiling_overridden: overridden,
        })
    }

    pub fn source(&self) -> &FiniteDist {
        &self.source
    }

    pub fn channel(&self) -> &Kernel {
        &self.channel
    }

    pub fn front(&self) -> &Kernel {
        &self.front
    }

    pub fn back(&self) -> &Kernel {
        &self.back
    }

    pub fn w1_size(&self) -> usize {
        self.front.target_sizes()[1]
    }

    pub fn w2_size(&self) -> usize {
        self.front.target_sizes()[2]
    }

    pub fn ceiling_overridden(&self) -> bool {
        self.ceiling_overridden
    }

    /// The induced joint over `(U, X, Y, V, W1, W2)`.
    pub fn joint(&self) -> FiniteDist {
        let nu = self.source.sizes()[0];
        let [nx, nw1, nw2] = [
            self.front.target_sizes()[0],
            self.front.target_sizes()[1],
            self.front.target_sizes()[2],
        ];
        let ny = self.channel.target_sizes()[0];
        let nv = self.back.target_sizes()[0];
        let mut table = vec![0.0; nu * nx * ny * nv * nw1 * nw2];
        for u in 0..nu {
            let pu = self.source.table()[u];
            if pu == 0.0 {
                continue;
            }
            let frow = self.front.row(u);
            for x in 0..nx {
                for w1 in 0..nw1 {
                    for w2 in 0..nw2 {
                        let f = frow[(x * nw1 + w1) * nw2 + w2];
                        if f == 0.0 {
                            continue;
                        }
                        for y in 0..ny {
                            let t = self.channel.row(x)[y];
                            if t == 0.0 {
                                continue;
                            }
                            let brow = self.back.row(y * nw2 + w2);
                            for v in 0..nv {
                                let idx = ((((u * nx + x) * ny + y) * nv + v) * nw1 + w1)
                                    * nw2
                                    + w2;
                                table[idx] = pu * f * t * brow[v];
                            }
                        }
                    }
                }
            }
        }
        FiniteDist::from_parts(
            vec![Axis::U, Axis::X, Axis::Y, Axis::V, Axis::W1, Axis::W2],
            vec![nu, nx, ny, nv, nw1, nw2],
            table,
        )
    }
}

/// Which factorization a joint distribution is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    /// `P(u) Q(x,v|u) T(y|x)`: the decoder output is conditionally
    /// independent of the channel output given `(U, X)`.
    Strict,
    /// `P(u) Q(x|u) T(y|x) Q(v|u,x,y)`: only the `(U, X, Y)` marginal is
    /// constrained to factor through the channel.
    Causal,
}

/// Tests whether `joint` factorizes through the given source and channel.
/// Returns the verdict together with the worst cell deviation.
pub fn decomposition_check(
    joint: &FiniteDist,
    source: &FiniteDist,
    channel: &Kernel,
    mode: DecompositionMode,
) -> Result<(bool, f64)> {
    if joint.axes() != [Axis::U, Axis::X, Axis::Y, Axis::V] {
        return Err(Error::InstanceFormat(
            "joint must carry axes (u, x, y, v)".into(),
        ));
    }
    let mut dev: f64 = 0.0;
    // Source marginal must match in both modes.
    let mu = joint.marginal(&[Axis::U])?;
    for (p, q) in mu.table().iter().zip(source.table().iter()) {
        dev = dev.max((p - q).abs());
    }
    match mode {
        DecompositionMode::Strict => {
            let m_uxv = joint.marginal(&[Axis::U, Axis::X, Axis::V])?;
            let (nu, nx, ny, nv) = (
                joint.sizes()[0],
                joint.sizes()[1],
                joint.sizes()[2],
                joint.sizes()[3],
            );
            for u in 0..nu {
                for x in 0..nx {
                    for y in 0..ny {
                        for v in 0..nv {
                            let lhs = joint.prob(&[u, x, y, v])?;
                            let rhs = m_uxv.prob(&[u, x, v])? * channel.row(x)[y];
                            dev = dev.max((lhs - rhs).abs());
                        }
                    }
                }
            }
        }
        DecompositionMode::Causal => {
            let m_uxy = joint.marginal(&[Axis::U, Axis::X, Axis::Y])?;
            let m_ux = joint.marginal(&[Axis::U, Axis::X])?;
            let (nu, nx, ny) = (joint.sizes()[0], joint.sizes()[1], joint.sizes()[2]);
            for u in 0..nu {
                for x in 0..nx {
                    for y in 0..ny {
                        let lhs = m_uxy.prob(&[u, x, y])?;
                        let rhs = m_ux.prob(&[u, x])? * channel.row(x)[y];
                        dev = dev.max((lhs - rhs).abs());
                    }
                }
            }
        }
    }
    Ok((dev <= DECOMP_TOL, dev))
}
