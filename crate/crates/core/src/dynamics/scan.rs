//! Exact time series of field statistics.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::fpp::{FppError, Search, WeightField, WeightSource};
use crate::io::Table;
use crate::lattice::{Bounds, Region, Vertex};

use super::{DynError, DynamicalField};

/// A functional of the weights in a fixed region.
pub trait Statistic {
    fn name(&self) -> String;

    /// The statistic reads no weight outside this region.
    fn relevant(&self) -> &Region;

    /// From-scratch value.
    fn evaluate(&mut self, field: &WeightField) -> Result<f64, FppError>;

    /// Value after `tau_v` changed from `old` to its current value in `field`.
    /// Called only after `evaluate` or `update` on the previous weights.
    fn update(&mut self, field: &WeightField, v: Vertex, old: f64) -> Result<f64, FppError> {
        let _ = (v, old);
        self.evaluate(field)
    }
}

/// A closure statistic, recomputed after every change.
pub struct FnStatistic<F> {
    name: String,
    relevant: Region,
    f: F,
}

impl<F: FnMut(&WeightField) -> Result<f64, FppError>> FnStatistic<F> {
    pub fn new(name: impl Into<String>, relevant: Region, f: F) -> Self {
        FnStatistic { name: name.into(), relevant, f }
    }
}

impl<F: FnMut(&WeightField) -> Result<f64, FppError>> Statistic for FnStatistic<F> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn relevant(&self) -> &Region {
        &self.relevant
    }

    fn evaluate(&mut self, field: &WeightField) -> Result<f64, FppError> {
        (self.f)(field)
    }
}

/// `T(0, ∂B(n))`, kept up to date along a stored geodesic.
///
/// Raising a weight off the geodesic changes nothing. Lowering `tau_v` can
/// only help paths through `v`; the best of those is found with one search
/// to `v` and one from `v`, started at the distance of `v` so the sum is
/// formed in path order exactly as a fresh search would form it.
#[derive(Debug)]
pub struct PointToBox {
    n: i32,
    region: Region,
    search: Search,
    value: f64,
    geodesic: HashSet<Vertex>,
    /// Number of full recomputations so far.
    pub recomputes: usize,
}

impl PointToBox {
    pub fn new(n: i32) -> Result<Self, FppError> {
        Ok(PointToBox { n, region: Region::square(n)?, search: Search::new(), value: f64::NAN, geodesic: HashSet::new(), recomputes: 0 })
    }

    fn bounds(&self) -> Bounds {
        Bounds::around(self.n)
    }
}

fn loop_erase(walk: &[Vertex]) -> Vec<Vertex> {
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    let mut out: Vec<Vertex> = Vec::new();
    for &v in walk {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

impl Statistic for PointToBox {
    fn name(&self) -> String {
        format!("point_to_box(n={})", self.n)
    }

    fn relevant(&self) -> &Region {
        &self.region
    }

    fn evaluate(&mut self, field: &WeightField) -> Result<f64, FppError> {
        field.require(&self.region)?;
        self.recomputes += 1;
        let n = self.n;
        let (end, d) = self
            .search
            .run(self.bounds(), field, &[(Vertex::ORIGIN, 0.0)], |_| true, true, |v, _| v.sup_norm() == n)
            .ok_or(FppError::Unreachable)?;
        self.value = d;
        self.geodesic = self.search.path_to(end).into_iter().collect();
        Ok(d)
    }

    fn update(&mut self, field: &WeightField, v: Vertex, old: f64) -> Result<f64, FppError> {
        if v == Vertex::ORIGIN || v.sup_norm() > self.n {
            return Ok(self.value);
        }
        let new = field.weight(v);
        if new >= old {
            if self.geodesic.contains(&v) && new > old {
                return self.evaluate(field);
            }
            return Ok(self.value);
        }
        let n = self.n;
        let b = self.bounds();
        let Some((_, d0)) = self.search.run(b, field, &[(Vertex::ORIGIN, 0.0)], |_| true, true, |u, _| u == v) else {
            return Ok(self.value);
        };
        if d0 >= self.value {
            return Ok(self.value);
        }
        let mut walk = self.search.path_to(v);
        let (end, d) = self
            .search
            .run(b, field, &[(v, d0)], |_| true, true, |u, _| u.sup_norm() == n)
            .ok_or(FppError::Unreachable)?;
        if d < self.value {
            walk.extend(self.search.path_to(end).into_iter().skip(1));
            self.value = d;
            self.geodesic = loop_erase(&walk).into_iter().collect();
        }
        Ok(self.value)
    }
}

/// A right-continuous step function on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub statistic: String,
    pub horizon: f64,
    /// Left endpoints, starting at 0 and increasing.
    pub starts: Vec<f64>,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// `(start, end, value)` for each piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.len()).map(move |i| {
            let end = self.starts.get(i + 1).copied().unwrap_or(self.horizon);
            (self.starts[i], end, self.values[i])
        })
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.starts.partition_point(|&s| s <= t).max(1) - 1;
        self.values[i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Columns `t_start, t_end, value`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["t_start", "t_end", "value"]);
        for (a, b, v) in self.pieces() {
            t.push(vec![a.into(), b.into(), v.into()]);
        }
        t
    }
}

/// Runs `stat` through every clock ring of its relevant region.
pub fn scan_statistic<S: Statistic + ?Sized>(dfield: &DynamicalField, stat: &mut S) -> Result<Trajectory, DynError> {
    let relevant = stat.relevant().clone();
    if !relevant.is_subset_of(dfield.region())? {
        return Err(DynError::RegionMismatch { inner: relevant.to_string(), outer: dfield.region().to_string() });
    }
    let mut field = dfield.snapshot(0.0)?;
    let mut value = stat.evaluate(&field)?;
    let mut traj = Trajectory { statistic: stat.name(), horizon: dfield.horizon(), starts: vec![0.0], values: vec![value] };
    let events = dfield.events_in(&relevant);
    let mut i = 0;
    while i < events.len() {
        let t = events[i].time;
        while i < events.len() && events[i].time == t {
            let e = events[i];
            let old = field.relabel(e.vertex, dfield.label(e.vertex, e.ordinal), dfield.cdf()).expect("event inside field");
            value = stat.update(&field, e.vertex, old)?;
            i += 1;
        }
        if value != *traj.values.last().expect("nonempty") {
            traj.starts.push(t);
            traj.values.push(value);
        }
    }
    Ok(traj)
}
