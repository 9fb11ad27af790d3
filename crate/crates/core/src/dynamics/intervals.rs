//! Exceptional time sets and their covering numbers.

use serde::{Deserialize, Serialize};

use crate::fit::{ordinary_line, LineFit};

use super::{DynError, Trajectory};

/// Disjoint sorted intervals inside `[0, horizon]`. Pieces of a trajectory
/// are half-open; for covering purposes each interval is taken closed, and
/// degenerate intervals `[a, a]` stand for single points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
    horizon: f64,
}

impl IntervalSet {
    /// Sorts, validates and merges touching intervals.
    pub fn new(mut intervals: Vec<(f64, f64)>, horizon: f64) -> Result<Self, DynError> {
        if !(horizon > 0.0) {
            return Err(DynError::NonPositiveHorizon(horizon));
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            if !(a <= b && a >= 0.0 && b <= horizon) {
                return Err(DynError::BadIntervals(format!("[{a}, {b}] in [0, {horizon}]")));
            }
            match out.last_mut() {
                Some(last) if a < last.1 || (a == last.1 && a > last.0) => {
                    if a < last.1 {
                        return Err(DynError::BadIntervals(format!("[{a}, {b}] overlaps [{}, {}]", last.0, last.1)));
                    }
                    last.1 = b;
                }
                _ => out.push((a, b)),
            }
        }
        Ok(IntervalSet { intervals: out, horizon })
    }

    pub fn empty(horizon: f64) -> Self {
        IntervalSet { intervals: Vec::new(), horizon }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Membership with half-open pieces `[a, b)`.
    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= t && t < b)
    }
}

/// `{t : value(t) <= x}` as a union of trajectory pieces.
pub fn exceptional_set(traj: &Trajectory, x: f64) -> IntervalSet {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b, v) in traj.pieces() {
        if v <= x {
            match out.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => out.push((a, b)),
            }
        }
    }
    IntervalSet { intervals: out, horizon: traj.horizon }
}

/// Fewest closed intervals of length `eps` covering the closure of
/// `set ∩ window`, placed greedily from the left.
pub fn covering_number(set: &IntervalSet, eps: f64, window: (f64, f64)) -> Result<u64, DynError> {
    if !(eps > 0.0) {
        return Err(DynError::BadScale(eps));
    }
    let mut count = 0u64;
    let mut covered = f64::NEG_INFINITY;
    for &(a, b) in &set.intervals {
        let (a, b) = (a.max(window.0), b.min(window.1));
        if a > b || b <= covered {
            continue;
        }
        let from = if a > covered { a } else { covered };
        let k = (((b - from) / eps).ceil() as u64).max(1);
        count += k;
        covered = from + k as f64 * eps;
    }
    Ok(count)
}

/// Covering count at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub eps: f64,
    pub count: u64,
    /// `log N / log(1/eps)`.
    pub ratio: f64,
}

/// Box-counting slope of a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub fit: LineFit,
    pub points: Vec<ScalePoint>,
}

/// Least-squares slope of `log N(set, eps)` against `log(1/eps)`.
pub fn dimension_estimate(set: &IntervalSet, eps_grid: &[f64]) -> Result<DimensionEstimate, DynError> {
    if eps_grid.len() < 3 {
        return Err(DynError::TooFewScales { need: 3, got: eps_grid.len() });
    }
    if set.is_empty() {
        return Err(DynError::EmptySet);
    }
    let mut points = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let count = covering_number(set, eps, (0.0, set.horizon))?;
        points.push(ScalePoint { eps, count, ratio: (count as f64).ln() / (1.0 / eps).ln() });
    }
    let x: Vec<f64> = points.iter().map(|p| (1.0 / p.eps).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| (p.count as f64).ln()).collect();
    let fit = ordinary_line(&x, &y).ok_or(DynError::TooFewScales { need: 2, got: 1 })?;
    Ok(DimensionEstimate { slope: fit.slope, fit, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(iv: &[(f64, f64)], s: f64) -> IntervalSet {
        IntervalSet::new(iv.to_vec(), s).unwrap()
    }

    #[test]
    fn counts() {
        let s = set(&[(0.0, 0.25), (0.5, 0.6)], 1.0);
        assert_eq!(covering_number(&s, 0.1, (0.0, 1.0)).unwrap(), 4);
        assert_eq!(covering_number(&IntervalSet::empty(1.0), 0.1, (0.0, 1.0)).unwrap(), 0);
        assert_eq!(covering_number(&s, 0.1, (0.55, 1.0)).unwrap(), 1);
        assert!(covering_number(&s, 0.0, (0.0, 1.0)).is_err());
        // two nearby pieces share a cover
        assert_eq!(covering_number(&set(&[(0.0, 0.01), (0.02, 0.03)], 1.0), 0.1, (0.0, 1.0)).unwrap(), 1);
    }

    #[test]
    fn validation_and_merge() {
        assert!(IntervalSet::new(vec![(0.0, 0.5), (0.4, 0.6)], 1.0).is_err());
        assert!(IntervalSet::new(vec![(0.0, 1.5)], 1.0).is_err());
        let s = set(&[(0.5, 0.7), (0.0, 0.5)], 1.0);
        assert_eq!(s.intervals(), &[(0.0, 0.7)]);
        assert!((s.measure() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn unit_interval_and_point() {
        let grid: Vec<f64> = (1..=10).map(|k| 0.5f64.powi(k)).collect();
        let d = dimension_estimate(&set(&[(0.0, 1.0)], 1.0), &grid).unwrap();
        assert!((d.slope - 1.0).abs() < 0.01);
        let d = dimension_estimate(&set(&[(0.3, 0.3)], 1.0), &grid).unwrap();
        assert_eq!(d.slope, 0.0);
        assert!(dimension_estimate(&IntervalSet::empty(1.0), &grid).is_err());
        assert!(dimension_estimate(&set(&[(0.0, 1.0)], 1.0), &grid[..2]).is_err());
    }

    #[test]
    fn exceptional_pieces() {
        let traj = Trajectory { statistic: "x".into(), horizon: 1.0, starts: vec![0.0, 0.2, 0.5, 0.7], values: vec![1.0, 0.0, 0.0, 2.0] };
        assert_eq!(exceptional_set(&traj, 0.5).intervals(), &[(0.2, 0.7)]);
        assert!(exceptional_set(&traj, -1.0).is_empty());
        assert_eq!(exceptional_set(&traj, 5.0).intervals(), &[(0.0, 1.0)]);
    }
}
