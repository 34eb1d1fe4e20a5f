//! Single-letter information constraints for strictly-causal and causal
//! decoding: evaluation, analytic sandwich bounds and certified
//! maximization over auxiliary kernels.

pub mod bounds;
pub mod causal;
pub mod instance;
pub mod report;
pub mod strict;

pub use bounds::{analytic_bounds, AnalyticBounds};
pub use causal::{
    embed_strict_certificate, maximize_causal, objective_causal, CausalInstance,
    CausalObjective, CausalOpts,
};
pub use instance::{
    decomposition_check, AuxKernel, CausalStructure, DecompositionMode, StrictInstance,
};
pub use report::{Certificate, ClosedForm, ConstraintReport, Verdict};
pub use strict::{
    maximize_strict, mixture_certificate, objective_strict, rate_margin, MaximizeOpts,
};
