//! Evaluation reports for information-constraint maximization.

use crate::constraint::instance::AuxKernel;
use crate::prob::Kernel;

/// Three-valued achievability verdict.
///
/// `Achievable` is certified by an explicit auxiliary kernel attaining a
/// nonnegative objective; `NotAchievable` is certified by a negative
/// analytic upper bound; everything in between stays `Undetermined`,
/// since the inner maximization is not concave and ascent only proves
/// lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Achievable,
    NotAchievable,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Achievable => "achievable",
            Verdict::NotAchievable => "not-achievable",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// Closed-form value available for special channel or target structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `H(X|V) - I(U; X, V)`, exact when the channel is an identity
    /// permutation.
    PerfectChannel(f64),
    /// `I(X;Y) - I(U;V)`, exact when `(U, V)` is independent of `(X, Y)`.
    Product(f64),
}

impl ClosedForm {
    pub fn value(&self) -> f64 {
        match *self {
            ClosedForm::PerfectChannel(v) | ClosedForm::Product(v) => v,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClosedForm::PerfectChannel(_) => "perfect-channel",
            ClosedForm::Product(_) => "product",
        }
    }
}

/// The kernel(s) witnessing the reported objective value.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Strict(AuxKernel),
    Causal { front: Kernel, back: Kernel },
}

/// Result of an information-constraint maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    /// Best certified objective value in bits (a lower bound on the true
    /// maximum).
    pub value: f64,
    pub certificate: Certificate,
    /// Analytic lower bound obtained from the `W = X` substitution.
    pub lower_bound: f64,
    /// Analytic upper bound obtained from the source-feedforward
    /// relaxation.
    pub upper_bound: f64,
    pub closed_form: Option<ClosedForm>,
    pub verdict: Verdict,
    pub restarts_used: usize,
    pub iterations: usize,
    /// Worst row total-variation mismatch between requested and induced
    /// target marginals (causal evaluation only).
    pub marginal_residual: Option<f64>,
}
