//! Arm event probabilities and exponents.

use serde::{Deserialize, Serialize};

use crate::fit::{weighted_line, LineFit};
use crate::labels::LabelSource;
use crate::percolation::{ArmDetector, ArmSpec, LazyThreshold, Sector};

use super::{check_prob, check_samples, replicate_with, stream, EstimatorResult, ExpError};

/// How many samples to draw: at least `min_samples`, then doubling until the
/// rarest estimate has relative standard error at most `target_rel` or
/// `max_samples` is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub min_samples: u64,
    pub max_samples: u64,
    pub target_rel: f64,
}

impl Sampling {
    pub fn fixed(samples: u64) -> Self {
        Sampling { min_samples: samples, max_samples: samples, target_rel: 0.0 }
    }
}

/// Probability of the arm event `spec` across `Ann(m, n)` at parameter `p`.
pub fn arm_probability(spec: &ArmSpec, m: i32, n: i32, p: f64, samples: u64, seed: u64) -> Result<EstimatorResult, ExpError> {
    check_samples(samples)?;
    check_prob("p", p)?;
    spec.validate()?;
    if !(0 <= m && m < n) {
        return Err(ExpError::InvalidParameter(format!("need 0 <= m < n, got m = {m}, n = {n}")));
    }
    let src = LabelSource::new(seed);
    let hits = replicate_with(&src, 0..samples, ArmDetector::new, |det, r| det.detect(&LazyThreshold { src: r, p }, m, n, spec));
    Ok(EstimatorResult::from_count(hits.iter().filter(|&&h| h).count() as u64, samples))
}

/// Number of leading grid sizes at which the (monotone) arm event holds.
fn depth(det: &mut ArmDetector, col: &LazyThreshold, m: i32, grid: &[i32], spec: &ArmSpec) -> usize {
    if let [color] = spec.colors.as_slice() {
        let r = det.reach(col, m, *grid.last().expect("nonempty grid"), spec.sector == Sector::UpperHalf, *color);
        return grid.iter().take_while(|&&n| n <= r).count();
    }
    grid.iter().take_while(|&&n| det.detect(col, m, n, spec)).count()
}

/// One point of an arm exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmPoint {
    pub n: i32,
    pub hits: u64,
    pub estimate: EstimatorResult,
}

/// Weighted fit of `log pi` against `log n`; `exponent` is minus the slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmExponent {
    pub spec: String,
    pub m: i32,
    pub p: f64,
    pub points: Vec<ArmPoint>,
    pub exponent: f64,
    pub fit: LineFit,
}

/// Arm probabilities at every `n` of an increasing grid from the same
/// samples, and the power-law fit through them.
pub fn arm_exponent(spec: &ArmSpec, m: i32, n_grid: &[i32], p: f64, sampling: Sampling, seed: u64) -> Result<ArmExponent, ExpError> {
    spec.validate()?;
    check_prob("p", p)?;
    check_samples(sampling.min_samples)?;
    if n_grid.len() < 4 {
        return Err(ExpError::InvalidParameter(format!("need at least 4 scales, got {}", n_grid.len())));
    }
    if n_grid[0] <= m || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExpError::InvalidParameter("scales must increase and exceed m".into()));
    }
    let src = LabelSource::new(seed);
    let mut hits = vec![0u64; n_grid.len()];
    let mut total = 0u64;
    let mut batch = sampling.min_samples;
    loop {
        let depths = replicate_with(&src, total..total + batch, ArmDetector::new, |det, r| depth(det, &LazyThreshold { src: r, p }, m, n_grid, spec));
        for d in depths {
            for h in hits.iter_mut().take(d) {
                *h += 1;
            }
        }
        total += batch;
        let rarest = *hits.last().expect("nonempty") as f64;
        let rel = if rarest > 0.0 { ((1.0 - rarest / total as f64) / rarest).sqrt() } else { f64::INFINITY };
        if rel <= sampling.target_rel || total >= sampling.max_samples {
            break;
        }
        batch = total.min(sampling.max_samples - total);
    }
    let mut points = Vec::new();
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for (&n, &h) in n_grid.iter().zip(&hits) {
        if h == 0 {
            return Err(ExpError::ZeroEstimate(format!("{spec} arm probability at n = {n}")));
        }
        let est = EstimatorResult::from_count(h, total);
        let pi = est.estimate;
        let var = ((1.0 - pi) / (pi * total as f64)).max(1.0 / (total as f64 * total as f64));
        x.push((n as f64).ln());
        y.push(pi.ln());
        w.push(1.0 / var);
        points.push(ArmPoint { n, hits: h, estimate: est });
    }
    let fit = weighted_line(&x, &y, &w).ok_or_else(|| ExpError::InvalidParameter("degenerate grid".into()))?;
    Ok(ArmExponent { spec: spec.to_string(), m, p, points, exponent: -fit.slope, fit })
}

/// `pi(m, n) / (pi(m, r) pi(r, n))` for one triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmRow {
    pub m: i32,
    pub r: i32,
    pub n: i32,
    pub pi_mn: EstimatorResult,
    pub pi_mr: EstimatorResult,
    pub pi_rn: EstimatorResult,
    pub ratio: f64,
    pub ratio_stderr: f64,
}

/// Quasimultiplicativity ratios; an empty annulus (`r = m` or `r = n`) has
/// probability 1. Each annulus has its own samples, shared between triples.
pub fn quasimultiplicativity_check(spec: &ArmSpec, triples: &[(i32, i32, i32)], p: f64, samples: u64, seed: u64) -> Result<Vec<QmRow>, ExpError> {
    let mut out = Vec::new();
    for &(m, r, n) in triples {
        if !(0 <= m && m <= r && r <= n && m < n) {
            return Err(ExpError::InvalidParameter(format!("need m <= r <= n, m < n; got ({m}, {r}, {n})")));
        }
        let pi = |a: i32, b: i32| -> Result<EstimatorResult, ExpError> {
            if a == b {
                Ok(EstimatorResult::new(1.0, 0.0, 0))
            } else {
                arm_probability(spec, a, b, p, samples, stream(seed, ((a as u64) << 32) | b as u64).seed())
            }
        };
        let (pi_mn, pi_mr, pi_rn) = (pi(m, n)?, pi(m, r)?, pi(r, n)?);
        for (e, what) in [(pi_mn, (m, n)), (pi_mr, (m, r)), (pi_rn, (r, n))] {
            if e.estimate == 0.0 {
                return Err(ExpError::ZeroEstimate(format!("{spec} arm probability on Ann{what:?}")));
            }
        }
        let ratio = pi_mn.estimate / (pi_mr.estimate * pi_rn.estimate);
        let rel2 = [pi_mn, pi_mr, pi_rn].iter().map(|e| (e.stderr / e.estimate).powi(2)).sum::<f64>();
        out.push(QmRow { m, r, n, pi_mn, pi_mr, pi_rn, ratio, ratio_stderr: ratio * rel2.sqrt() });
    }
    Ok(out)
}
