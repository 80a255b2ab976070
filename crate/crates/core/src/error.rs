use thiserror::Error;

/// Constraint that keeps a coupling triple off the `(alpha, delta, phi)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartConstraint {
    /// `A <= 0`: no angle `alpha` in `(0, pi/2]` reproduces it.
    NonPositiveA,
    /// `f > f_upper(A)`: no real `phi`.
    FExceedsUpper,
    /// The chart point would need `c^2 < 0`.
    NegativeCSquared,
    /// An angle lies outside its admissible range.
    AngleRange,
}

impl std::fmt::Display for ChartConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ChartConstraint::NonPositiveA => "A must be positive",
            ChartConstraint::FExceedsUpper => "f must not exceed f_upper(A)",
            ChartConstraint::NegativeCSquared => "chart point has c^2 < 0",
            ChartConstraint::AngleRange => "angle outside its admissible range",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// The three printed forms of `C` disagree. Signals a bug, not bad input.
    #[error("secular coefficient forms disagree: {forms:?}")]
    Inconsistency { forms: [f64; 3] },

    #[error("domain error: {0}")]
    Domain(String),

    /// `f` lies above `f_upper(A)`; `excess = f - f_upper`.
    #[error("f exceeds f_upper(A) by {excess}")]
    FExceedsUpper { excess: f64 },

    #[error("point not representable on the (alpha, delta, phi) chart: {0}")]
    NotRepresentable(ChartConstraint),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no interior seed found at f = {f}")]
    NoInteriorSeed { f: f64 },

    #[error("assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
