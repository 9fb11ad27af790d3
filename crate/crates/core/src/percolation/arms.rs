use crate::grid::Marks;
use crate::lattice::{neighbors, Bounds, Vertex};

use super::flow::{max_disjoint_paths, FlowProblem};
use super::{ArmSpec, Color, Coloring, Sector};

#[derive(Debug, Clone, Copy)]
struct Annulus {
    m: i32,
    n: i32,
    half: bool,
}

impl Annulus {
    #[inline]
    fn inside(&self, v: Vertex) -> bool {
        let r = v.sup_norm();
        r > self.m && r <= self.n && (!self.half || v.y >= 0)
    }

    #[inline]
    fn on_target(&self, v: Vertex) -> bool {
        v.sup_norm() == self.n
    }
}

/// Vertices of `Ann(m, n)` (intersected with the upper half-plane when
/// `half`) that have a neighbour in `B(m)`; arms start at these.
pub fn arm_starts(m: i32, n: i32, half: bool) -> Vec<Vertex> {
    let ann = Annulus { m, n, half };
    let r = m + 1;
    let mut out = Vec::new();
    for y in -r..=r {
        for x in -r..=r {
            let v = Vertex::new(x, y);
            if v.sup_norm() == r && ann.inside(v) && neighbors(v).iter().any(|w| w.sup_norm() <= m) {
                out.push(v);
            }
        }
    }
    out
}

/// Reusable scratch for arm-event detection on any [`Coloring`].
///
/// An arm crossing `Ann(m, n)` is a path of vertices strictly inside
/// `B(n) \ B(m)` that starts next to `B(m)` and ends on `{|v|_inf = n}`.
#[derive(Debug, Clone)]
pub struct ArmDetector {
    marks: Marks,
    stack: Vec<Vertex>,
}

impl Default for ArmDetector {
    fn default() -> Self {
        Self::new()
    }
}

impl ArmDetector {
    pub fn new() -> Self {
        ArmDetector { marks: Marks::new(Bounds::around(1)), stack: Vec::new() }
    }

    /// Whether the arms in `spec` (assumed valid) cross `Ann(m, n)`.
    pub fn detect<C: Coloring + ?Sized>(&mut self, col: &C, m: i32, n: i32, spec: &ArmSpec) -> bool {
        let ann = Annulus { m, n, half: spec.sector == Sector::UpperHalf };
        let starts = arm_starts(m, n, ann.half);
        match spec.colors.as_slice() {
            [c] => self.crossing(col, &ann, &starts, *c),
            [a, b] if a != b => self.crossing(col, &ann, &starts, *a) && self.crossing(col, &ann, &starts, *b),
            [a, _] => self.disjoint(col, &ann, &starts, *a) >= 2,
            [a, ..] => {
                self.crossing_clusters(col, &ann, &starts, *a, 2) >= 2
                    && self.crossing_clusters(col, &ann, &starts, a.flip(), 2) >= 2
            }
            [] => true,
        }
    }

    /// Largest radius reached by the `color` cluster of the arm starts of
    /// `Ann(m, n_max)`; the one-colour arm event holds for `Ann(m, n)` iff the
    /// returned value is at least `n`.
    pub fn reach<C: Coloring + ?Sized>(&mut self, col: &C, m: i32, n_max: i32, half: bool, color: Color) -> i32 {
        let ann = Annulus { m, n: n_max, half };
        self.marks.reset_to(Bounds::around(n_max));
        self.stack.clear();
        let mut best = m;
        for v in arm_starts(m, n_max, half) {
            if color.of(col, v) && self.marks.mark(v) {
                self.stack.push(v);
            }
        }
        while let Some(v) = self.stack.pop() {
            best = best.max(v.sup_norm());
            if best == n_max {
                return best;
            }
            for w in neighbors(v) {
                if ann.inside(w) && color.of(col, w) && self.marks.mark(w) {
                    self.stack.push(w);
                }
            }
        }
        best
    }

    fn crossing<C: Coloring + ?Sized>(&mut self, col: &C, ann: &Annulus, starts: &[Vertex], color: Color) -> bool {
        self.marks.reset_to(Bounds::around(ann.n));
        self.stack.clear();
        for &v in starts {
            if color.of(col, v) && self.marks.mark(v) {
                self.stack.push(v);
            }
        }
        while let Some(v) = self.stack.pop() {
            if ann.on_target(v) {
                return true;
            }
            for w in neighbors(v) {
                if ann.inside(w) && color.of(col, w) && self.marks.mark(w) {
                    self.stack.push(w);
                }
            }
        }
        false
    }

    /// Number of distinct `color` clusters of the annulus that join the starts
    /// to the outer boundary, counting up to `enough`.
    fn crossing_clusters<C: Coloring + ?Sized>(
        &mut self,
        col: &C,
        ann: &Annulus,
        starts: &[Vertex],
        color: Color,
        enough: usize,
    ) -> usize {
        self.marks.reset_to(Bounds::around(ann.n));
        let mut count = 0;
        for &s in starts {
            if !color.of(col, s) || !self.marks.mark(s) {
                continue;
            }
            self.stack.clear();
            self.stack.push(s);
            let mut crosses = false;
            while let Some(v) = self.stack.pop() {
                if ann.on_target(v) {
                    crosses = true;
                    if count + 1 == enough {
                        return enough;
                    }
                }
                for w in neighbors(v) {
                    if ann.inside(w) && color.of(col, w) && self.marks.mark(w) {
                        self.stack.push(w);
                    }
                }
            }
            if crosses {
                count += 1;
            }
        }
        count
    }

    /// Maximum number (up to 2) of vertex-disjoint `color` arms.
    fn disjoint<C: Coloring + ?Sized>(&mut self, col: &C, ann: &Annulus, starts: &[Vertex], color: Color) -> u32 {
        // Restrict to the part of the colour class reachable from the starts.
        self.marks.reset_to(Bounds::around(ann.n));
        self.stack.clear();
        let mut nodes = Vec::new();
        for &v in starts {
            if color.of(col, v) && self.marks.mark(v) {
                self.stack.push(v);
            }
        }
        let mut touches = false;
        while let Some(v) = self.stack.pop() {
            nodes.push(v);
            touches |= ann.on_target(v);
            for w in neighbors(v) {
                if ann.inside(w) && color.of(col, w) && self.marks.mark(w) {
                    self.stack.push(w);
                }
            }
        }
        if !touches {
            return 0;
        }
        let problem = FlowProblem {
            sources: starts.iter().filter(|v| color.of(col, **v)).map(|&v| (v, 1)).collect(),
            sinks: nodes.iter().filter(|v| ann.on_target(**v)).map(|&v| (v, 0)).collect(),
            group_caps: vec![2],
            node_caps: Vec::new(),
            nodes,
        };
        max_disjoint_paths(&problem, 2)
    }
}
