//! First-passage times with vertex weights.
//!
//! The passage time of a path `v_1, ..., v_k` is `tau_{v_2} + ... + tau_{v_k}`:
//! the first vertex is free.

mod circuit;
mod search;
mod vn;

use std::sync::Arc;

use thiserror::Error;

use crate::distributions::Cdf;
use crate::labels::{LabelField, LabelSource};
use crate::lattice::{box_ring, Bounds, LatticeError, Region, Side, Vertex, VertexIndex};

pub use circuit::{min_circuit_time, min_circuit_time_with};
pub use search::{Search, WeightSource};
pub use vn::{count_contributing_vertices, contributing_vertex, s_rect, r_rect};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FppError {
    #[error("no path exists inside the allowed region")]
    Unreachable,
    #[error("{0} is empty")]
    EmptySet(&'static str),
    #[error("region {inner} is not contained in {outer}")]
    RegionMismatch { inner: String, outer: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("window size {lhat} exceeds 2^{n}")]
    WindowTooLarge { lhat: i32, n: u32 },
    #[error("scale {0} is too large")]
    ScaleTooLarge(u32),
}

/// Labels and weights `tau_v = F^{-1}(omega_v)` on an indexed region.
#[derive(Debug, Clone)]
pub struct WeightField {
    index: Arc<VertexIndex>,
    labels: Option<LabelField>,
    tau: Vec<f64>,
}

impl WeightField {
    pub fn generate(region: Region, cdf: &Cdf, src: &LabelSource) -> Result<Self, FppError> {
        let index = Arc::new(VertexIndex::new(region)?);
        Ok(Self::from_labels(LabelField::generate(index, src), cdf))
    }

    pub fn from_labels(labels: LabelField, cdf: &Cdf) -> Self {
        let tau = labels.values().iter().map(|&u| cdf.sample_weight(u)).collect();
        WeightField { index: labels.index().clone(), labels: Some(labels), tau }
    }

    /// Weights given directly, without labels.
    pub fn from_fn(index: Arc<VertexIndex>, f: impl Fn(Vertex) -> f64) -> Self {
        let tau = index.vertices().iter().map(|&v| f(v)).collect();
        WeightField { index, labels: None, tau }
    }

    pub fn from_weights(index: Arc<VertexIndex>, tau: Vec<f64>) -> Self {
        assert_eq!(index.len(), tau.len(), "one weight per vertex");
        WeightField { index, labels: None, tau }
    }

    pub fn index(&self) -> &Arc<VertexIndex> {
        &self.index
    }

    pub fn region(&self) -> &Region {
        self.index.region()
    }

    pub fn labels(&self) -> Option<&LabelField> {
        self.labels.as_ref()
    }

    pub fn weights(&self) -> &[f64] {
        &self.tau
    }

    #[inline]
    pub fn tau(&self, v: Vertex) -> Option<f64> {
        self.index.index_of(v).map(|i| self.tau[i])
    }

    /// Sets `tau_v` directly, dropping the labels (they no longer determine the
    /// weights). Returns the old weight.
    pub fn set_tau(&mut self, v: Vertex, tau: f64) -> Option<f64> {
        let i = self.index.index_of(v)?;
        self.labels = None;
        Some(std::mem::replace(&mut self.tau[i], tau))
    }

    /// Sets `omega_v` and `tau_v = F^{-1}(omega_v)`. Returns the old weight.
    pub fn relabel(&mut self, v: Vertex, omega: f64, cdf: &Cdf) -> Option<f64> {
        let i = self.index.index_of(v)?;
        if let Some(l) = self.labels.as_mut() {
            l.set(v, omega);
        }
        Some(std::mem::replace(&mut self.tau[i], cdf.sample_weight(omega)))
    }

    pub(crate) fn require(&self, region: &Region) -> Result<(), FppError> {
        let ok = region.vertices()?.into_iter().all(|v| self.index.contains(v));
        if ok {
            Ok(())
        } else {
            Err(FppError::RegionMismatch { inner: region.to_string(), outer: self.region().to_string() })
        }
    }
}

impl WeightSource for WeightField {
    #[inline]
    fn weight(&self, v: Vertex) -> f64 {
        self.tau(v).unwrap_or(f64::INFINITY)
    }
}

/// Weights computed on the fly from hashed labels.
#[derive(Debug, Clone, Copy)]
pub struct LazyWeights<'a> {
    pub src: LabelSource,
    pub cdf: &'a Cdf,
}

impl WeightSource for LazyWeights<'_> {
    #[inline]
    fn weight(&self, v: Vertex) -> f64 {
        self.cdf.sample_weight(self.src.label(v, 0))
    }
}

/// A passage time and, on request, a path realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub value: f64,
    pub witness: Option<Vec<Vertex>>,
}

/// Passage time of a vertex sequence: every weight but the first.
pub fn path_time<W: WeightSource + ?Sized>(w: &W, path: &[Vertex]) -> f64 {
    path.iter().skip(1).fold(0.0, |acc, &v| acc + w.weight(v))
}

/// `T(A, B)` over paths inside `allowed`.
pub fn passage_time(
    field: &WeightField,
    a: &[Vertex],
    b: &[Vertex],
    allowed: &Region,
    witness: bool,
) -> Result<PathResult, FppError> {
    if a.is_empty() {
        return Err(FppError::EmptySet("source set"));
    }
    if b.is_empty() {
        return Err(FppError::EmptySet("target set"));
    }
    field.require(allowed)?;
    for &v in a.iter().chain(b) {
        if !allowed.contains(v) {
            return Err(FppError::RegionMismatch { inner: format!("vertex {v}"), outer: allowed.to_string() });
        }
    }
    let bounds = allowed.bounds().expect("allowed region is bounded");
    let mut targets = crate::grid::Marks::new(bounds);
    for &v in b {
        targets.mark(v);
    }
    let sources: Vec<(Vertex, f64)> = a.iter().map(|&v| (v, 0.0)).collect();
    let mut search = Search::new();
    let (end, value) = search
        .run(bounds, field, &sources, |v| allowed.contains(v), witness, |v, _| targets.is_marked(v))
        .ok_or(FppError::Unreachable)?;
    Ok(PathResult { value, witness: witness.then(|| search.path_to(end)) })
}

/// `T(0, ∂B(n))`.
pub fn point_to_box(field: &WeightField, n: i32) -> Result<f64, FppError> {
    let region = Region::square(n)?;
    field.require(&region)?;
    let mut search = Search::new();
    radial_sweep(&mut search, field, &[n]).map(|v| v[0])
}

/// `T(0, ∂B(r))` for every `r` in `radii` (increasing) with one search.
pub fn radial_sweep<W: WeightSource + ?Sized>(search: &mut Search, w: &W, radii: &[i32]) -> Result<Vec<f64>, FppError> {
    let Some(&n_max) = radii.last() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(radii.len());
    search.run(Bounds::around(n_max), w, &[(Vertex::ORIGIN, 0.0)], |_| true, false, |v, d| {
        let r = v.sup_norm();
        while out.len() < radii.len() && radii[out.len()] <= r {
            out.push(d);
        }
        out.len() == radii.len()
    });
    if out.len() < radii.len() {
        return Err(FppError::Unreachable);
    }
    Ok(out)
}

fn dyadic(n: u32) -> Result<i32, FppError> {
    if n > 28 {
        return Err(FppError::ScaleTooLarge(n));
    }
    Ok(1i32 << n)
}

/// The two summands of `tn`.
#[derive(Debug, Clone, PartialEq)]
pub struct TnParts {
    /// Cheapest circuit around the origin in `Ann(2^n, 2^{n+1})`.
    pub circuit: PathResult,
    /// Cheapest path from `∂B(2^n)` (first vertex free) to `∂B(2^{n+2})`
    /// staying in `{2^n <= |v|_inf <= 2^{n+2}}`.
    pub crossing: PathResult,
}

impl TnParts {
    pub fn total(&self) -> f64 {
        self.circuit.value + self.crossing.value
    }
}

/// `T^(1)(n) + T^(2)(n)`.
pub fn tn(field: &WeightField, n: u32) -> Result<f64, FppError> {
    Ok(tn_parts(field, n, false)?.total())
}

pub fn tn_parts(field: &WeightField, n: u32, witness: bool) -> Result<TnParts, FppError> {
    let lo = dyadic(n)?;
    let hi = dyadic(n + 2)?;
    field.require(&Region::square(hi)?)?;
    let circuit = min_circuit_time(field, lo, 2 * lo, witness)?;
    let sources: Vec<(Vertex, f64)> = box_ring(lo).into_iter().map(|v| (v, 0.0)).collect();
    let mut search = Search::new();
    let (end, value) = search
        .run(
            Bounds::around(hi),
            field,
            &sources,
            |v| v.sup_norm() >= lo,
            witness,
            |v, _| v.sup_norm() == hi,
        )
        .ok_or(FppError::Unreachable)?;
    let crossing = PathResult { value, witness: witness.then(|| search.path_to(end)) };
    Ok(TnParts { circuit, crossing })
}

/// Which rectangle a crossing time refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingRect {
    /// `R(n) = [-2^{n+1}, 2^{n+1}] x [-2^n, 2^n]`.
    R,
    /// `S(n) = [-2^{n+2}, 2^{n+2}] x [-2^n, 2^n]`.
    S,
}

/// Cheapest left-right crossing of `R(n)` or `S(n)` staying inside it.
pub fn rect_crossing_time(field: &WeightField, n: u32, which: CrossingRect, witness: bool) -> Result<PathResult, FppError> {
    let rect = match which {
        CrossingRect::R => r_rect(n)?,
        CrossingRect::S => s_rect(n)?,
    };
    lr_crossing_time(field, &rect, witness)
}

/// Cheapest path inside a rectangle from its left side to its right side.
pub fn lr_crossing_time(field: &WeightField, rect: &Region, witness: bool) -> Result<PathResult, FppError> {
    field.require(rect)?;
    let left = crate::lattice::side(rect, Side::Left)?;
    let Region::Rect { x1, .. } = *rect else {
        return Err(LatticeError::Unsupported(rect.to_string()).into());
    };
    let sources: Vec<(Vertex, f64)> = left.into_iter().map(|v| (v, 0.0)).collect();
    let bounds = rect.bounds().expect("bounded");
    let mut search = Search::new();
    let (end, value) = search
        .run(bounds, field, &sources, |_| true, witness, |v, _| v.x == x1)
        .ok_or(FppError::Unreachable)?;
    Ok(PathResult { value, witness: witness.then(|| search.path_to(end)) })
}
