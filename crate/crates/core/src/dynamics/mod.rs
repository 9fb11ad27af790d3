//! Weights that refresh at the rings of independent rate-one Poisson clocks.
//!
//! Vertex `v` carries labels `omega_v^(0), omega_v^(1), ...`; the `j`-th label
//! is in force from the `j`-th ring of its clock (right-continuously) until
//! the next one.

mod intervals;
mod scan;

use std::sync::Arc;

use thiserror::Error;

use crate::distributions::Cdf;
use crate::fpp::{FppError, WeightField};
use crate::labels::{LabelField, LabelSource};
use crate::lattice::{LatticeError, Region, Vertex, VertexIndex};

pub use intervals::{covering_number, dimension_estimate, exceptional_set, DimensionEstimate, IntervalSet, ScalePoint};
pub use scan::{scan_statistic, FnStatistic, PointToBox, Statistic, Trajectory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynError {
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("need at least {need} scales, got {got}")]
    TooFewScales { need: usize, got: usize },
    #[error("the set is empty")]
    EmptySet,
    #[error("invalid intervals: {0}")]
    BadIntervals(String),
    #[error("region {inner} is not contained in {outer}")]
    RegionMismatch { inner: String, outer: String },
    #[error(transparent)]
    Fpp(#[from] FppError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// One clock ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub vertex: Vertex,
    /// Index of the label that takes over (1 for the first ring).
    pub ordinal: u64,
}

/// Clock rings on `[0, horizon]` for every vertex of a region.
#[derive(Debug, Clone)]
pub struct DynamicalField {
    index: Arc<VertexIndex>,
    horizon: f64,
    cdf: Cdf,
    src: LabelSource,
    offsets: Vec<usize>,
    times: Vec<f64>,
}

impl DynamicalField {
    pub fn generate(region: Region, horizon: f64, cdf: Cdf, src: LabelSource) -> Result<Self, DynError> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(DynError::NonPositiveHorizon(horizon));
        }
        let index = Arc::new(VertexIndex::new(region)?);
        let mut offsets = Vec::with_capacity(index.len() + 1);
        let mut times = Vec::new();
        offsets.push(0);
        for &v in index.vertices() {
            let mut clock = 0.0;
            for j in 0.. {
                clock += src.clock_gap(v, j);
                if clock > horizon {
                    break;
                }
                times.push(clock);
            }
            offsets.push(times.len());
        }
        Ok(DynamicalField { index, horizon, cdf, src, offsets, times })
    }

    pub fn index(&self) -> &Arc<VertexIndex> {
        &self.index
    }

    pub fn region(&self) -> &Region {
        self.index.region()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn cdf(&self) -> &Cdf {
        &self.cdf
    }

    pub fn source(&self) -> &LabelSource {
        &self.src
    }

    /// Ring times of `v` in `[0, horizon]`, increasing.
    pub fn event_times(&self, v: Vertex) -> &[f64] {
        match self.index.index_of(v) {
            Some(i) => &self.times[self.offsets[i]..self.offsets[i + 1]],
            None => &[],
        }
    }

    pub fn event_count(&self) -> usize {
        self.times.len()
    }

    /// `omega_v^(j)`.
    pub fn label(&self, v: Vertex, j: u64) -> f64 {
        self.src.label(v, j)
    }

    /// Label of `v` at time `t`.
    pub fn label_at(&self, v: Vertex, t: f64) -> f64 {
        let n = self.event_times(v).partition_point(|&e| e <= t);
        self.src.label(v, n as u64)
    }

    /// All rings of vertices in `region`, sorted by time (ties by vertex).
    pub fn events_in(&self, region: &Region) -> Vec<Event> {
        let mut out = Vec::new();
        for (i, &v) in self.index.vertices().iter().enumerate() {
            if !region.contains(v) {
                continue;
            }
            for (j, &time) in self.times[self.offsets[i]..self.offsets[i + 1]].iter().enumerate() {
                out.push(Event { time, vertex: v, ordinal: j as u64 + 1 });
            }
        }
        out.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.vertex.cmp(&b.vertex)));
        out
    }

    /// Labels in force at time `t`.
    pub fn labels_at(&self, t: f64) -> Result<LabelField, DynError> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(DynError::TimeOutOfRange { t, horizon: self.horizon });
        }
        let vals = self.index.vertices().iter().map(|&v| self.label_at(v, t)).collect();
        Ok(LabelField::from_values(self.index.clone(), vals))
    }

    /// The weights `tau_v(t)`.
    pub fn snapshot(&self, t: f64) -> Result<WeightField, DynError> {
        Ok(WeightField::from_labels(self.labels_at(t)?, &self.cdf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(r: i32, s: f64, seed: u64) -> DynamicalField {
        DynamicalField::generate(Region::Box { radius: r }, s, Cdf::bernoulli(0.5).unwrap(), LabelSource::new(seed)).unwrap()
    }

    #[test]
    fn snapshot_at_zero_is_static_field() {
        let d = field(4, 1.0, 9);
        let stat = WeightField::generate(Region::Box { radius: 4 }, d.cdf(), &LabelSource::new(9)).unwrap();
        assert_eq!(d.snapshot(0.0).unwrap().weights(), stat.weights());
        assert_eq!(d.labels_at(0.0).unwrap().values(), stat.labels().unwrap().values());
        assert!(d.snapshot(1.5).is_err());
        assert!(DynamicalField::generate(Region::Box { radius: 1 }, 0.0, d.cdf().clone(), LabelSource::new(1)).is_err());
    }

    #[test]
    fn events_sorted_and_labels_follow() {
        let d = field(3, 2.0, 5);
        let ev = d.events_in(d.region());
        assert_eq!(ev.len(), d.event_count());
        assert!(ev.windows(2).all(|w| w[0].time <= w[1].time));
        for e in &ev {
            assert_eq!(d.label_at(e.vertex, e.time), d.label(e.vertex, e.ordinal));
            assert!(e.time > 0.0 && e.time <= 2.0);
        }
        for v in d.index().vertices() {
            if d.event_times(*v).is_empty() {
                assert_eq!(d.label_at(*v, 2.0), d.label(*v, 0));
            }
        }
    }

    #[test]
    fn extension_keeps_events() {
        let small = field(2, 1.0, 3);
        let big = field(5, 1.0, 3);
        for v in small.index().vertices() {
            assert_eq!(small.event_times(*v), big.event_times(*v));
        }
    }
}
