//! Box crossings, correlation length and its near-inverse.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::grid::Marks;
use crate::labels::LabelSource;
use crate::lattice::{neighbors, Region, Side, Vertex};

use super::{check_prob, check_samples, replicate_with, stream, EstimatorResult, ExpError};

/// `[0, n] x [0, n]`, a rhombus in the triangular embedding.
pub fn parallelogram(n: i32) -> Region {
    Region::Rect { x0: 0, x1: n, y0: 0, y1: n }
}

/// `[-n, n]^2`.
pub fn box_rect(n: i32) -> Region {
    Region::Rect { x0: -n, x1: n, y0: -n, y1: n }
}

/// Bottleneck search: the least `p` at which a rectangle has a left-right
/// `p`-open crossing, i.e. the minimum over crossings of the largest label.
#[derive(Debug)]
pub struct ThresholdSearch {
    done: Marks,
    heap: BinaryHeap<Reverse<(u64, Vertex)>>,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self::new()
    }
}

impl ThresholdSearch {
    pub fn new() -> Self {
        ThresholdSearch { done: Marks::new(crate::lattice::Bounds::around(1)), heap: BinaryHeap::new() }
    }

    pub fn lr_threshold(&mut self, label: impl Fn(Vertex) -> f64, rect: &Region) -> Result<f64, ExpError> {
        let Region::Rect { x0, x1, y0, y1 } = *rect else {
            return Err(ExpError::InvalidParameter(format!("{rect} is not a rectangle")));
        };
        self.done.reset_to(rect.bounds().expect("bounded"));
        self.heap.clear();
        for v in crate::lattice::side(rect, Side::Left)? {
            self.heap.push(Reverse((label(v).to_bits(), v)));
        }
        while let Some(Reverse((key, u))) = self.heap.pop() {
            if !self.done.mark(u) {
                continue;
            }
            if u.x == x1 {
                return Ok(f64::from_bits(key));
            }
            let k = f64::from_bits(key);
            for w in neighbors(u) {
                if w.x < x0 || w.x > x1 || w.y < y0 || w.y > y1 || self.done.is_marked(w) {
                    continue;
                }
                self.heap.push(Reverse((k.max(label(w)).to_bits(), w)));
            }
        }
        unreachable!("a rectangle is connected")
    }
}

/// Crossing thresholds of `rect` for replicas `0..samples` of `src`.
pub fn crossing_thresholds(rect: &Region, samples: u64, src: &LabelSource) -> Result<Vec<f64>, ExpError> {
    if !matches!(rect, Region::Rect { .. }) {
        return Err(ExpError::InvalidParameter(format!("{rect} is not a rectangle")));
    }
    replicate_with(src, 0..samples, ThresholdSearch::new, |s, r| s.lr_threshold(|v| r.label(v, 0), rect)).into_iter().collect()
}

/// Probability of a left-right `p`-open crossing of `rect`.
pub fn crossing_probability(p: f64, rect: &Region, samples: u64, seed: u64) -> Result<EstimatorResult, ExpError> {
    Ok(crossing_curve(&[p], rect, samples, seed)?[0].1)
}

/// Crossing probabilities at several `p` on the same samples; exactly
/// monotone in `p`.
pub fn crossing_curve(ps: &[f64], rect: &Region, samples: u64, seed: u64) -> Result<Vec<(f64, EstimatorResult)>, ExpError> {
    check_samples(samples)?;
    for &p in ps {
        check_prob("p", p)?;
    }
    let th = crossing_thresholds(rect, samples, &LabelSource::new(seed))?;
    Ok(ps.iter().map(|&p| (p, EstimatorResult::from_count(th.iter().filter(|&&t| t <= p).count() as u64, samples))).collect())
}

/// Outcome of a correlation length search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationLength {
    pub p: f64,
    pub eps0: f64,
    /// `None` when `n_max` was reached first.
    pub estimate: Option<i32>,
    /// `(n, crossing probability)` at every size evaluated, sorted by `n`.
    pub evaluated: Vec<(i32, EstimatorResult)>,
}

/// Smallest `n` at which `[-n, n]^2` is crossed with probability clearly
/// above `1 - eps0` (for `p > 1/2`) or clearly below `eps0` (for `p < 1/2`):
/// the estimate must clear the level by two standard errors. Doubling, then
/// bisection.
pub fn correlation_length(p: f64, eps0: f64, n_max: i32, samples: u64, seed: u64) -> Result<CorrelationLength, ExpError> {
    check_prob("p", p)?;
    check_samples(samples)?;
    if p == 0.5 {
        return Err(ExpError::InvalidParameter("the correlation length is infinite at p = 1/2".into()));
    }
    if !(eps0 > 0.0 && eps0 < 0.5) {
        return Err(ExpError::InvalidParameter(format!("eps0 = {eps0} is not in (0, 1/2)")));
    }
    if n_max < 1 {
        return Err(ExpError::InvalidParameter("n_max must be at least 1".into()));
    }
    let mut evaluated: Vec<(i32, EstimatorResult)> = Vec::new();
    let mut good = |n: i32| -> Result<bool, ExpError> {
        let e = match evaluated.iter().find(|(m, _)| *m == n) {
            Some((_, e)) => *e,
            None => {
                let e = crossing_probability(p, &box_rect(n), samples, stream(seed, n as u64).seed())?;
                evaluated.push((n, e));
                e
            }
        };
        Ok(if p > 0.5 { e.estimate - 2.0 * e.stderr > 1.0 - eps0 } else { e.estimate + 2.0 * e.stderr < eps0 })
    };
    let mut hi = 1;
    let mut lo = 0;
    let estimate = loop {
        if good(hi)? {
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if good(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            break Some(hi);
        }
        if hi >= n_max {
            break None;
        }
        lo = hi;
        hi = (2 * hi).min(n_max);
    };
    evaluated.sort_by_key(|(n, _)| *n);
    Ok(CorrelationLength { p, eps0, estimate, evaluated })
}

/// `p̂_n` with an interval from the order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PnEstimate {
    pub n: i32,
    pub p_hat: f64,
    pub bracket: (f64, f64),
    pub n_samples: u64,
}

/// The `p > 1/2` at which `[-n, n]^2` is crossed with probability `1 - eps0`:
/// the `(1 - eps0)` quantile of the crossing thresholds, so that the
/// estimated correlation length at `p̂_n` is about `n`.
pub fn pn_estimate(n: i32, eps0: f64, samples: u64, seed: u64) -> Result<PnEstimate, ExpError> {
    check_samples(samples)?;
    if n < 2 {
        return Err(ExpError::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    if !(eps0 > 0.0 && eps0 < 0.5) {
        return Err(ExpError::InvalidParameter(format!("eps0 = {eps0} is not in (0, 1/2)")));
    }
    let mut th = crossing_thresholds(&box_rect(n), samples, &LabelSource::new(seed))?;
    th.sort_by(f64::total_cmp);
    let q = 1.0 - eps0;
    let nf = samples as f64;
    let at = |k: f64| th[(k.ceil() as i64 - 1).clamp(0, samples as i64 - 1) as usize];
    let spread = 1.96 * (nf * q * eps0).sqrt();
    Ok(PnEstimate { n, p_hat: at(q * nf), bracket: (at(q * nf - spread), at(q * nf + spread)), n_samples: samples })
}
