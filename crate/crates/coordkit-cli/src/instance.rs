//! Instance file parsing and validation.
//!
//! The instance format is one JSON object:
//!
//! ```json
//! {
//!   "alphabets": {"u": 2, "x": 2, "y": 2, "v": 2},
//!   "source":  [0.5, 0.5],
//!   "channel": [[0.75, 0.25], [0.25, 0.75]],
//!   "target":  [[0.25, 0.25, 0.25, 0.25], [0.25, 0.25, 0.25, 0.25]]
//! }
//! ```
//!
//! `source[u]` is the source law, `channel[x][y]` the channel rows and
//! `target[u]` the conditional over `(x, v)` flattened row-major, `x`
//! first. Optional fields: `utility[u][x][y][v]`, `distortion[u][v]`,
//! `cost[x]`, and for causal evaluation `target_x[u][x]` plus
//! `target_v[u][x][y][v]`. A `joint[u][x][y][v]` field feeds the
//! factorization check.

use serde::Deserialize;

use coordkit::constraint::{CausalInstance, StrictInstance};
use coordkit::prob::{Axis, FiniteDist, Kernel};
use coordkit::region::UtilitySpec;
use coordkit::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
pub struct AlphabetSpec {
    pub u: usize,
    pub x: usize,
    pub y: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct InstanceFile {
    pub alphabets: AlphabetSpec,
    pub source: Vec<f64>,
    pub channel: Vec<Vec<f64>>,
    #[serde(default)]
    pub target: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub utility: Option<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(default)]
    pub distortion: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub cost: Option<Vec<f64>>,
    #[serde(default)]
    pub target_x: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub target_v: Option<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(default)]
    pub joint: Option<Vec<Vec<Vec<Vec<f64>>>>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InstanceFormat(format!("instance JSON: {e}")))
    }

    pub fn source_dist(&self) -> Result<FiniteDist> {
        if self.source.len() != self.alphabets.u {
            return Err(Error::InstanceFormat(format!(
                "source has {} entries, alphabets.u = {}",
                self.source.len(),
                self.alphabets.u
            )));
        }
        FiniteDist::new(vec![(Axis::U, self.alphabets.u)], self.source.clone())
    }

    pub fn channel_kernel(&self) -> Result<Kernel> {
        let (nx, ny) = (self.alphabets.x, self.alphabets.y);
        if self.channel.len() != nx {
            return Err(Error::InstanceFormat(format!(
                "channel has {} rows, alphabets.x = {nx}",
                self.channel.len()
            )));
        }
        let mut rows = Vec::with_capacity(nx * ny);
        for (x, row) in self.channel.iter().enumerate() {
            if row.len() != ny {
                return Err(Error::InstanceFormat(format!(
                    "channel row {x} has {} entries, alphabets.y = {ny}",
                    row.len()
                )));
            }
            rows.extend_from_slice(row);
        }
        Kernel::new(vec![(Axis::X, nx)], vec![(Axis::Y, ny)], rows)
    }

    pub fn target_kernel(&self) -> Result<Kernel> {
        let target = self
            .target
            .as_ref()
            .ok_or_else(|| Error::InstanceFormat("instance file lacks a `target` table".into()))?;
        let (nu, nx, nv) = (self.alphabets.u, self.alphabets.x, self.alphabets.v);
        if target.len() != nu {
            return Err(Error::InstanceFormat(format!(
                "target has {} rows, alphabets.u = {nu}",
                target.len()
            )));
        }
        let mut rows = Vec::with_capacity(nu * nx * nv);
        for (u, row) in target.iter().enumerate() {
            if row.len() != nx * nv {
                return Err(Error::InstanceFormat(format!(
                    "target row {u} has {} entries, expected {} (x-major over (x, v))",
                    row.len(),
                    nx * nv
                )));
            }
            rows.extend_from_slice(row);
        }
        Kernel::new(
            vec![(Axis::U, nu)],
            vec![(Axis::X, nx), (Axis::V, nv)],
            rows,
        )
    }

    pub fn strict_instance(&self) -> Result<StrictInstance> {
        StrictInstance::new(
            self.source_dist()?,
            self.channel_kernel()?,
            self.target_kernel()?,
        )
    }

    pub fn causal_instance(&self) -> Result<CausalInstance> {
        let (nu, nx, ny, nv) = (
            self.alphabets.u,
            self.alphabets.x,
            self.alphabets.y,
            self.alphabets.v,
        );
        let tx = self
            .target_x
            .as_ref()
            .ok_or_else(|| Error::InstanceFormat("causal evaluation needs `target_x`".into()))?;
        let tv = self
            .target_v
            .as_ref()
            .ok_or_else(|| Error::InstanceFormat("causal evaluation needs `target_v`".into()))?;
        let mut tx_rows = Vec::with_capacity(nu * nx);
        for row in tx {
            tx_rows.extend_from_slice(row);
        }
        if tx_rows.len() != nu * nx {
            return Err(Error::InstanceFormat("target_x dimensions disagree".into()));
        }
        let tv_rows = flatten4(tv, nu, nx, ny, nv, "target_v")?;
        CausalInstance::new(
            self.source_dist()?,
            self.channel_kernel()?,
            Kernel::new(vec![(Axis::U, nu)], vec![(Axis::X, nx)], tx_rows)?,
            Kernel::new(
                vec![(Axis::U, nu), (Axis::X, nx), (Axis::Y, ny)],
                vec![(Axis::V, nv)],
                tv_rows,
            )?,
        )
    }

    pub fn utility_spec(&self) -> Result<UtilitySpec> {
        let (nu, nx, ny, nv) = (
            self.alphabets.u,
            self.alphabets.x,
            self.alphabets.y,
            self.alphabets.v,
        );
        if let Some(phi) = &self.utility {
            return UtilitySpec::new(nu, nx, ny, nv, flatten4(phi, nu, nx, ny, nv, "utility")?);
        }
        if let Some(d) = &self.distortion {
            let mut flat = Vec::with_capacity(nu * nv);
            for row in d {
                flat.extend_from_slice(row);
            }
            if flat.len() != nu * nv {
                return Err(Error::InstanceFormat("distortion dimensions disagree".into()));
            }
            return UtilitySpec::from_distortion(nu, nx, ny, nv, flat);
        }
        if let Some(c) = &self.cost {
            return UtilitySpec::from_cost(nu, nx, ny, nv, c.clone());
        }
        Err(Error::InstanceFormat(
            "instance file lacks `utility`, `distortion` or `cost`".into(),
        ))
    }

    pub fn joint_dist(&self) -> Result<FiniteDist> {
        let (nu, nx, ny, nv) = (
            self.alphabets.u,
            self.alphabets.x,
            self.alphabets.y,
            self.alphabets.v,
        );
        let joint = self
            .joint
            .as_ref()
            .ok_or_else(|| Error::InstanceFormat("factorization check needs a `joint` table".into()))?;
        FiniteDist::new(
            vec![
                (Axis::U, nu),
                (Axis::X, nx),
                (Axis::Y, ny),
                (Axis::V, nv),
            ],
            flatten4(joint, nu, nx, ny, nv, "joint")?,
        )
    }
}

fn flatten4(
    t: &[Vec<Vec<Vec<f64>>>],
    nu: usize,
    nx: usize,
    ny: usize,
    nv: usize,
    what: &str,
) -> Result<Vec<f64>> {
    let mut flat = Vec::with_capacity(nu * nx * ny * nv);
    if t.len() != nu {
        return Err(Error::InstanceFormat(format!("{what}: expected {nu} u-planes")));
    }
    for (u, per_x) in t.iter().enumerate() {
        if per_x.len() != nx {
            return Err(Error::InstanceFormat(format!("{what}[{u}]: expected {nx} x-planes")));
        }
        for (x, per_y) in per_x.iter().enumerate() {
            if per_y.len() != ny {
                return Err(Error::InstanceFormat(format!(
                    "{what}[{u}][{x}]: expected {ny} y-rows"
                )));
            }
            for (y, per_v) in per_y.iter().enumerate() {
                if per_v.len() != nv {
                    return Err(Error::InstanceFormat(format!(
                        "{what}[{u}][{x}][{y}]: expected {nv} v-entries"
                    )));
                }
                flat.extend_from_slice(per_v);
            }
        }
    }
    Ok(flat)
}
