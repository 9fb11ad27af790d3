//! Monte Carlo estimators built on the static and dynamical models.
//!
//! Replica `r` of a run with root seed `s` uses `LabelSource::new(s).replica(r)`
//! (or a named substream of it), so results do not depend on scheduling.

mod analytic;
mod arms;
mod crossing;
mod dynamic;
mod growth;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::DistError;
use crate::dynamics::DynError;
use crate::fpp::FppError;
use crate::labels::{mix64, LabelSource};
use crate::lattice::LatticeError;
use crate::percolation::PercError;

pub use analytic::{abel_compare, bernoulli_rate, AbelOutcome};
pub use arms::{arm_exponent, arm_probability, quasimultiplicativity_check, ArmExponent, ArmPoint, QmRow, Sampling};
pub use crossing::{
    box_rect, correlation_length, crossing_curve, crossing_probability, crossing_thresholds, parallelogram, pn_estimate, CorrelationLength,
    PnEstimate, ThresholdSearch,
};
pub use dynamic::{
    b_k_event, covering_survey, hausdorff_cover_survey, interval_count_statistic, noise_decay, zero_cluster_reaches, CoverRow,
    CoveringSurvey, HausdorffRow, HausdorffSurvey, IntervalCount, NoiseDecay, NoiseRow,
};
pub use growth::{growth_curve, tail_profile, vn_survey, GrowthRow, TailProfile, TailRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("estimate for {0} is zero")]
    ZeroEstimate(String),
    #[error("needs {needed} vertices, budget is {limit}")]
    Budget { needed: u64, limit: u64 },
    #[error(transparent)]
    Perc(#[from] PercError),
    #[error(transparent)]
    Fpp(#[from] FppError),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Sample mean with its standard error and a normal 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub ci95: (f64, f64),
}

impl EstimatorResult {
    pub fn new(estimate: f64, stderr: f64, n_samples: u64) -> Self {
        EstimatorResult { estimate, stderr, n_samples, ci95: (estimate - 1.96 * stderr, estimate + 1.96 * stderr) }
    }

    /// Mean of the values, with the sample standard deviation (n - 1) over `sqrt(n)`.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::new(f64::NAN, f64::NAN, 0);
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        Self::new(mean, (var / n as f64).sqrt(), n as u64)
    }

    /// Proportion of `hits` among `n` indicators.
    pub fn from_count(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Self::new(f64::NAN, f64::NAN, 0);
        }
        let p = hits as f64 / n as f64;
        let var = if n > 1 { p * (1.0 - p) * n as f64 / (n - 1) as f64 } else { 0.0 };
        Self::new(p, (var / n as f64).sqrt(), n)
    }

    /// Whether `value` lies within `k` standard errors.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.stderr
    }
}

/// Deterministic sub-stream of a root seed for one stage of an experiment.
pub fn stream(seed: u64, stage: u64) -> LabelSource {
    LabelSource::new(mix64(seed ^ mix64(stage.wrapping_add(0x5eed))))
}

/// `f(r, replica source)` for `r = 0..samples`, in index order.
pub(crate) fn replicate<T: Send>(src: &LabelSource, range: std::ops::Range<u64>, f: impl Fn(LabelSource) -> T + Sync) -> Vec<T> {
    range.into_par_iter().map(|r| f(src.replica(r))).collect()
}

/// Same with per-thread scratch.
pub(crate) fn replicate_with<T: Send, S>(
    src: &LabelSource,
    range: std::ops::Range<u64>,
    init: impl Fn() -> S + Sync + Send,
    f: impl Fn(&mut S, LabelSource) -> T + Sync + Send,
) -> Vec<T> {
    range.into_par_iter().map_init(init, |s, r| f(s, src.replica(r))).collect()
}

pub(crate) fn check_prob(name: &str, p: f64) -> Result<(), ExpError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ExpError::InvalidParameter(format!("{name} = {p} is not in [0, 1]")))
    }
}

pub(crate) fn check_samples(samples: u64) -> Result<(), ExpError> {
    if samples == 0 {
        Err(ExpError::InvalidParameter("samples must be positive".into()))
    } else {
        Ok(())
    }
}
