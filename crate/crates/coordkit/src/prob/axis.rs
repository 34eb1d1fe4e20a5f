//! Named axes of probability tables and alphabet-size bookkeeping.

use crate::error::{Error, Result};

/// Tolerance used when validating that a table sums to one.
pub const DIST_TOL: f64 = 1e-9;

/// Role of one coordinate of a joint distribution.
///
/// Axis order is part of a table's identity; reordering is an explicit
/// operation, never an implicit one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Source symbol.
    U,
    /// Channel input.
    X,
    /// Channel output.
    Y,
    /// Decoder output.
    V,
    /// Auxiliary variable (strictly causal evaluation).
    W,
    /// First auxiliary variable (causal evaluation).
    W1,
    /// Second auxiliary variable (causal evaluation).
    W2,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::U => "u",
            Axis::X => "x",
            Axis::Y => "y",
            Axis::V => "v",
            Axis::W => "w",
            Axis::W1 => "w1",
            Axis::W2 => "w2",
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Alphabet sizes for a problem instance.
///
/// The auxiliary sizes default to the cardinality ceilings
/// `|W| <= |U||X||V| + 1` and `|W1|, |W2| <= |U||X||Y||V| + 2`.
/// Larger sizes are accepted but flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetProfile {
    pub u_size: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub v_size: usize,
    pub w_size: Option<usize>,
    pub w1_size: Option<usize>,
    pub w2_size: Option<usize>,
}

impl AlphabetProfile {
    pub fn new(u_size: usize, x_size: usize, y_size: usize, v_size: usize) -> Result<Self> {
        for (n, s) in [("u", u_size), ("x", x_size), ("y", y_size), ("v", v_size)] {
            if s == 0 {
                return Err(Error::InstanceFormat(format!("axis {n} has size 0")));
            }
        }
        Ok(Self {
            u_size,
            x_size,
            y_size,
            v_size,
            w_size: None,
            w1_size: None,
            w2_size: None,
        })
    }

    /// Default ceiling for the single auxiliary alphabet.
    pub fn w_ceiling(&self) -> usize {
        self.u_size * self.x_size * self.v_size + 1
    }

    /// Default ceiling for each of the two causal auxiliary alphabets.
    pub fn w12_ceiling(&self) -> usize {
        self.u_size * self.x_size * self.y_size * self.v_size + 2
    }

    /// True when the requested auxiliary size exceeds its default ceiling.
    pub fn w_size_overridden(&self, w_size: usize) -> bool {
        w_size > self.w_ceiling()
    }

    pub fn size_of(&self, axis: Axis) -> Result<usize> {
        match axis {
            Axis::U => Ok(self.u_size),
            Axis::X => Ok(self.x_size),
            Axis::Y => Ok(self.y_size),
            Axis::V => Ok(self.v_size),
            Axis::W => self
                .w_size
                .ok_or_else(|| Error::InstanceFormat("axis w has no declared size".into())),
            Axis::W1 => self
                .w1_size
                .ok_or_else(|| Error::InstanceFormat("axis w1 has no declared size".into())),
            Axis::W2 => self
                .w2_size
                .ok_or_else(|| Error::InstanceFormat("axis w2 has no declared size".into())),
        }
    }
}
