//! Weight distributions, their dyadic quantiles `a_k`, and the regime classifier.

mod cdf;
mod grammar;
mod regime;
mod sequence;

pub use cdf::{from_ak, zhang, AtomList, Cdf, PiecewiseInverse, Segment, Shape};
pub use grammar::DistSpec;
pub use regime::{
    classify_regime, Conclusion, ConclusionTag, KakBehavior, PartialSums, PercolationRegime,
    RegimeReport, SeriesVerdict,
};
pub use sequence::AkSequence;

use thiserror::Error;

/// Default cap used by [`from_ak`] when building a distribution from a sequence.
pub const DEFAULT_K_MAX: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("probability {0} outside (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("shape parameter must be positive, got {0}")]
    NonPositiveShape(f64),
    #[error("sequence is not nonincreasing")]
    NonMonotone,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid distribution: {0}")]
    InvalidCdf(String),
    #[error("cannot parse distribution spec `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// `F^{-1}(t)`.
pub fn quantile(f: &Cdf, t: f64) -> Result<f64, DistError> {
    f.quantile(t)
}

/// `a_k = F^{-1}(1/2 + 2^{-k})`.
pub fn ak(f: &Cdf, k: u32) -> f64 {
    f.ak(k)
}

/// `tau = F^{-1}(u)`.
pub fn sample_weight(f: &Cdf, u: f64) -> f64 {
    f.sample_weight(u)
}
