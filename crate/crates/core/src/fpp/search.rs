//! Shortest paths with vertex weights: a move `u -> w` costs `tau_w`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::grid::{Grid, Marks};
use crate::lattice::{neighbors, Bounds, Vertex};

/// Vertex weights, looked up on demand.
pub trait WeightSource {
    fn weight(&self, v: Vertex) -> f64;
}

impl<F: Fn(Vertex) -> f64> WeightSource for F {
    #[inline]
    fn weight(&self, v: Vertex) -> f64 {
        self(v)
    }
}

const NO_PREV: Vertex = Vertex { x: i32::MIN, y: i32::MIN };

/// Reusable Dijkstra scratch over a rectangle of the lattice.
///
/// Vertices reached at the same distance as the vertex being settled (zero
/// weights, mostly) go on a stack and are settled before the heap is touched
/// again.
#[derive(Debug)]
pub struct Search {
    bounds: Bounds,
    dist: Grid<f64>,
    weight: Grid<f64>,
    prev: Option<Grid<Vertex>>,
    seen: Marks,
    done: Marks,
    weighed: Marks,
    heap: BinaryHeap<Reverse<(u64, Vertex)>>,
    level: Vec<Vertex>,
    settled: usize,
}

impl Default for Search {
    fn default() -> Self {
        Self::new()
    }
}

impl Search {
    pub fn new() -> Self {
        let b = Bounds::around(0);
        Search {
            bounds: b,
            dist: Grid::new(b, 0.0),
            weight: Grid::new(b, 0.0),
            prev: None,
            seen: Marks::new(b),
            done: Marks::new(b),
            weighed: Marks::new(b),
            heap: BinaryHeap::new(),
            level: Vec::new(),
            settled: 0,
        }
    }

    fn prepare(&mut self, bounds: Bounds, track: bool) {
        let b = self.bounds;
        let covers = b.x0 <= bounds.x0 && b.x1 >= bounds.x1 && b.y0 <= bounds.y0 && b.y1 >= bounds.y1;
        if !covers {
            self.bounds = bounds;
            self.dist = Grid::new(bounds, 0.0);
            self.weight = Grid::new(bounds, 0.0);
            self.prev = None;
            self.seen = Marks::new(bounds);
            self.done = Marks::new(bounds);
            self.weighed = Marks::new(bounds);
        } else {
            self.seen.clear();
            self.done.clear();
            self.weighed.clear();
        }
        if track && self.prev.is_none() {
            self.prev = Some(Grid::new(self.bounds, NO_PREV));
        }
        self.heap.clear();
        self.level.clear();
        self.settled = 0;
    }

    /// Multi-source search inside `limits ∩ allowed`. Each source starts at its
    /// given distance. `stop` is called on every vertex as it is settled, in
    /// nondecreasing distance order; the search ends when it returns true and
    /// that vertex is returned. `None` means the reachable set was exhausted.
    pub fn run<W, A, S>(
        &mut self,
        limits: Bounds,
        weights: &W,
        sources: &[(Vertex, f64)],
        allowed: A,
        track: bool,
        mut stop: S,
    ) -> Option<(Vertex, f64)>
    where
        W: WeightSource + ?Sized,
        A: Fn(Vertex) -> bool,
        S: FnMut(Vertex, f64) -> bool,
    {
        self.prepare(limits, track);
        for &(v, d) in sources {
            if !limits.contains(v) || !allowed(v) {
                continue;
            }
            if !self.seen.is_marked(v) || d < *self.dist.get(v) {
                self.seen.mark(v);
                *self.dist.get_mut(v) = d;
                if let Some(p) = self.prev.as_mut().filter(|_| track) {
                    *p.get_mut(v) = NO_PREV;
                }
                self.heap.push(Reverse((d.to_bits(), v)));
            }
        }
        loop {
            let u = match self.level.pop() {
                Some(u) => u,
                None => match self.heap.pop() {
                    Some(Reverse((_, u))) => u,
                    None => return None,
                },
            };
            if !self.done.mark(u) {
                continue;
            }
            self.settled += 1;
            let du = *self.dist.get(u);
            if stop(u, du) {
                return Some((u, du));
            }
            for w in neighbors(u) {
                if !limits.contains(w) || self.done.is_marked(w) || !allowed(w) {
                    continue;
                }
                if self.weighed.mark(w) {
                    *self.weight.get_mut(w) = weights.weight(w);
                }
                let nd = du + *self.weight.get(w);
                if !self.seen.is_marked(w) || nd < *self.dist.get(w) {
                    self.seen.mark(w);
                    *self.dist.get_mut(w) = nd;
                    if track {
                        *self.prev.as_mut().expect("tracking").get_mut(w) = u;
                    }
                    if nd == du {
                        self.level.push(w);
                    } else {
                        self.heap.push(Reverse((nd.to_bits(), w)));
                    }
                }
            }
        }
    }

    /// Distance of a vertex settled by the last run.
    pub fn settled_dist(&self, v: Vertex) -> Option<f64> {
        (self.bounds.contains(v) && self.done.is_marked(v)).then(|| *self.dist.get(v))
    }

    /// Tentative or final distance found by the last run.
    pub fn tentative_dist(&self, v: Vertex) -> Option<f64> {
        (self.bounds.contains(v) && self.seen.is_marked(v)).then(|| *self.dist.get(v))
    }

    /// Number of vertices settled by the last run.
    pub fn settled_count(&self) -> usize {
        self.settled
    }

    /// Path from a source to `v` (last run must have tracked predecessors).
    pub fn path_to(&self, v: Vertex) -> Vec<Vertex> {
        let prev = self.prev.as_ref().expect("search ran without tracking");
        let mut out = vec![v];
        let mut c = v;
        loop {
            let p = *prev.get(c);
            if p == NO_PREV {
                break;
            }
            out.push(p);
            c = p;
        }
        out.reverse();
        out
    }
}
