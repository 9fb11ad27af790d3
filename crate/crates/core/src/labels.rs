//! Counter-based randomness keyed by `(seed, vertex, ordinal)`.
//!
//! Every uniform label and every Poisson clock tick is a pure function of its
//! key, so a field restricted to any sub-region is identical to the same
//! sub-region of a larger field, and replicas can be evaluated in any order.

use std::sync::Arc;

use crate::lattice::{Vertex, VertexIndex};

const LABEL_STREAM: u64 = 0x6c61_6265_6c00_0000;
const CLOCK_STREAM: u64 = 0x636c_6f63_6b00_0000;
const REPLICA_STREAM: u64 = 0x7265_706c_6963_6100;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn to_open_unit(bits: u64) -> f64 {
    // 53 random bits mapped to the midpoints of a 2^-53 grid: strictly inside (0, 1).
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Seed for replica `r` of an experiment rooted at `seed`.
pub fn replica_seed(seed: u64, r: u64) -> u64 {
    mix64(mix64(seed ^ REPLICA_STREAM) ^ r.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// A deterministic source of i.i.d. uniforms and exponential clock gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSource {
    seed: u64,
}

impl LabelSource {
    pub fn new(seed: u64) -> Self {
        LabelSource { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replica(&self, r: u64) -> Self {
        LabelSource::new(replica_seed(self.seed, r))
    }

    #[inline]
    fn key(&self, stream: u64, v: Vertex, ordinal: u64) -> u64 {
        let site = (v.x as u32 as u64) | ((v.y as u32 as u64) << 32);
        let h = mix64(self.seed ^ stream);
        let h = mix64(h ^ site);
        mix64(h ^ ordinal)
    }

    /// The `ordinal`-th uniform label of `v` (ordinal 0 is the initial label).
    #[inline]
    pub fn label(&self, v: Vertex, ordinal: u64) -> f64 {
        to_open_unit(self.key(LABEL_STREAM, v, ordinal))
    }

    /// The `j`-th rate-one exponential inter-event gap of `v`'s clock.
    #[inline]
    pub fn clock_gap(&self, v: Vertex, j: u64) -> f64 {
        -to_open_unit(self.key(CLOCK_STREAM, v, j)).ln()
    }

    /// Time of the first clock ring of `v`.
    #[inline]
    pub fn first_event(&self, v: Vertex) -> f64 {
        self.clock_gap(v, 0)
    }

    /// Number of clock rings of `v` in `[0, t]`.
    pub fn events_up_to(&self, v: Vertex, t: f64) -> u64 {
        let mut clock = 0.0;
        let mut j = 0;
        loop {
            clock += self.clock_gap(v, j);
            if clock > t {
                return j;
            }
            j += 1;
        }
    }

    /// Label of `v` in force at time `t` (right-continuous).
    pub fn label_at(&self, v: Vertex, t: f64) -> f64 {
        self.label(v, self.events_up_to(v, t))
    }
}

/// Uniform labels `omega_v` on the vertices of an indexed region.
#[derive(Debug, Clone)]
pub struct LabelField {
    index: Arc<VertexIndex>,
    labels: Vec<f64>,
}

impl LabelField {
    /// Initial labels `(seed, v, 0)` for every vertex of the region.
    pub fn generate(index: Arc<VertexIndex>, src: &LabelSource) -> Self {
        let labels = index.vertices().iter().map(|&v| src.label(v, 0)).collect();
        LabelField { index, labels }
    }

    pub fn from_values(index: Arc<VertexIndex>, labels: Vec<f64>) -> Self {
        assert_eq!(index.len(), labels.len(), "one label per vertex");
        LabelField { index, labels }
    }

    pub fn index(&self) -> &Arc<VertexIndex> {
        &self.index
    }

    pub fn values(&self) -> &[f64] {
        &self.labels
    }

    /// Label of `v`, or `None` outside the region.
    #[inline]
    pub fn get(&self, v: Vertex) -> Option<f64> {
        self.index.index_of(v).map(|i| self.labels[i])
    }

    /// Replaces the label of `v`; returns the old one, or `None` outside the region.
    pub fn set(&mut self, v: Vertex, omega: f64) -> Option<f64> {
        let i = self.index.index_of(v)?;
        Some(std::mem::replace(&mut self.labels[i], omega))
    }
}
