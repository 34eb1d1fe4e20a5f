//! Achievability membership, expected-utility optimization, boundary
//! location, channel capacity and the distortion-cost region.

pub mod capacity;
pub mod distortion_cost;
pub mod family;
pub mod membership;
pub mod utility;

pub use capacity::{channel_capacity, CapacityResult};
pub use distortion_cost::{distortion_cost_region, RegionCell, RegionGrid};
pub use family::{boundary_bisection_family, BoundSelector, BoundaryResult, FamilySpec};
pub use membership::{membership, ZERO_TOL};
pub use utility::{
    expected_utility, max_utility_generic, MaxUtilityOpts, MaxUtilityResult, UtilitySpec,
};
