use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::grid::Marks;
use crate::lattice::{neighbors, Bounds, Region, Vertex, CCW_OFFSETS};

use super::{Coloring, Configuration, PercError};

/// A closed self-avoiding lattice path, listed once around (the closing edge
/// from the last vertex back to the first is implicit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    vertices: Vec<Vertex>,
}

/// Parity of the winding number of the closed polygon `poly` around `q`,
/// which must not lie on it. Odd means `q` is enclosed.
///
/// Counts polygon edges between rows `q.y` and `q.y + 1` whose lower endpoint
/// lies to the right of `q`: a horizontal ray from `q` in the usual embedding.
pub fn winding_parity(poly: &[Vertex], q: Vertex) -> bool {
    let mut odd = false;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if (a.y > q.y) != (b.y > q.y) {
            let low = if a.y <= q.y { a } else { b };
            if low.y == q.y && low.x > q.x {
                odd = !odd;
            }
        }
    }
    odd
}

impl Circuit {
    /// Checks that consecutive vertices are adjacent and none repeats.
    pub fn new(vertices: Vec<Vertex>) -> Option<Self> {
        let n = vertices.len();
        if n < 3 {
            return None;
        }
        for i in 0..n {
            if !vertices[i].is_adjacent(vertices[(i + 1) % n]) {
                return None;
            }
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Circuit { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn on(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Whether `q` lies in the bounded component of the complement.
    pub fn encloses(&self, q: Vertex) -> bool {
        !self.on(q) && winding_parity(&self.vertices, q)
    }

    /// All vertices of the interior.
    pub fn interior(&self) -> Vec<Vertex> {
        let x0 = self.vertices.iter().map(|v| v.x).min().unwrap_or(0);
        let x1 = self.vertices.iter().map(|v| v.x).max().unwrap_or(0);
        let y0 = self.vertices.iter().map(|v| v.y).min().unwrap_or(0);
        let y1 = self.vertices.iter().map(|v| v.y).max().unwrap_or(0);
        let mut out = Vec::new();
        for y in y0..=y1 {
            for x in x0..=x1 {
                let q = Vertex::new(x, y);
                if self.encloses(q) {
                    out.push(q);
                }
            }
        }
        out
    }
}

/// The innermost open circuit around the origin in `Ann(m, n)`, if any.
pub fn innermost_open_circuit(cfg: &Configuration, m: i32, n: i32) -> Result<Option<Circuit>, PercError> {
    let ann = Region::annulus(m, n)?;
    cfg.covers(&ann)?;
    let mut marks = Marks::new(Bounds::around(n));
    Ok(innermost_circuit_with(cfg, m, n, &mut marks, &mut Vec::new()))
}

/// [`innermost_open_circuit`] on any colouring with caller scratch.
///
/// Let `K` be the component of `B(m)` in `B(m)` together with the closed
/// vertices of the annulus. The circuit is the simple loop around the origin
/// in the outer vertex boundary of `K`.
pub fn innermost_circuit_with<C: Coloring + ?Sized>(
    col: &C,
    m: i32,
    n: i32,
    marks: &mut Marks,
    stack: &mut Vec<Vertex>,
) -> Option<Circuit> {
    marks.reset_to(Bounds::around(n));
    stack.clear();
    for y in -m..=m {
        for x in -m..=m {
            let v = Vertex::new(x, y);
            marks.mark(v);
            if v.sup_norm() == m {
                stack.push(v);
            }
        }
    }
    while let Some(v) = stack.pop() {
        for w in neighbors(v) {
            let r = w.sup_norm();
            if r > m && r <= n && !col.is_open(w) && marks.mark(w) {
                if r == n {
                    return None;
                }
                stack.push(w);
            }
        }
    }
    let in_k = |v: Vertex| v.sup_norm() < n && marks.is_marked(v);

    // Rightmost point of K on the positive x axis; the next point is outside.
    let xs = (0..n).rev().find(|&x| in_k(Vertex::new(x, 0))).expect("origin is in K");
    let start = Vertex::new(xs + 1, 0);
    let exit = |c: Vertex, d: usize| -> usize {
        (1..=6).map(|k| (d + k) % 6).find(|&j| !in_k(c.offset(CCW_OFFSETS[j]))).expect("boundary vertex has a free side")
    };
    // Walk with K on one side; states are (vertex, exit direction).
    let mut walk = Vec::new();
    let j0 = exit(start, 3);
    let (mut c, mut j) = (start, j0);
    let limit = 12 * (2 * n as usize + 1).pow(2);
    loop {
        walk.push(c);
        let next = c.offset(CCW_OFFSETS[j]);
        let d = (j + 4) % 6;
        c = next;
        j = exit(c, d);
        if c == start && j == j0 {
            break;
        }
        assert!(walk.len() <= limit, "boundary walk did not close");
    }

    // Chronological loop erasure; the loop enclosing the origin is the answer.
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    let mut path: Vec<Vertex> = Vec::new();
    let mut found: Option<Vec<Vertex>> = None;
    for &v in walk.iter().chain(std::iter::once(&walk[0])) {
        if let Some(&i) = pos.get(&v) {
            let lp = &path[i..];
            if found.is_none() && lp.len() >= 3 && winding_parity(lp, Vertex::ORIGIN) {
                found = Some(lp.to_vec());
            }
            for u in path.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, path.len());
            path.push(v);
        }
    }
    Circuit::new(found.expect("outer boundary of K winds around the origin"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::VertexIndex;

    fn cfg(n: i32, f: impl Fn(Vertex) -> bool) -> Configuration {
        Configuration::from_fn(Arc::new(VertexIndex::new(Region::Box { radius: n }).unwrap()), f)
    }

    #[test]
    fn hexagon_when_all_open() {
        let c = innermost_open_circuit(&cfg(2, |_| true), 0, 2).unwrap().unwrap();
        let mut got = c.vertices().to_vec();
        got.sort();
        let mut want = neighbors(Vertex::ORIGIN).to_vec();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(c.interior(), vec![Vertex::ORIGIN]);
    }

    #[test]
    fn ring_around_unit_box() {
        let c = innermost_open_circuit(&cfg(2, |_| true), 1, 2).unwrap().unwrap();
        assert_eq!(c.len(), 14);
        assert_eq!(c.interior().len(), 9);
    }

    #[test]
    fn none_when_all_closed() {
        assert!(innermost_open_circuit(&cfg(4, |_| false), 1, 4).unwrap().is_none());
    }

    #[test]
    fn dead_end_pocket_is_skipped() {
        // A closed cup attached to B(0) whose mouth leaves a one-vertex pocket.
        let closed = [(1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2)];
        let c = cfg(5, |v| !closed.contains(&(v.x, v.y)));
        let circ = innermost_open_circuit(&c, 0, 5).unwrap().unwrap();
        for &(x, y) in &closed {
            assert!(circ.encloses(Vertex::new(x, y)));
        }
        assert!(circ.encloses(Vertex::ORIGIN));
    }

    #[test]
    fn parity_of_hexagon() {
        let hex = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)].map(|(x, y)| Vertex::new(x, y));
        assert!(winding_parity(&hex, Vertex::ORIGIN));
        assert!(!winding_parity(&hex, Vertex::new(3, 0)));
        assert!(!winding_parity(&hex, Vertex::new(-3, 0)));
        assert!(!winding_parity(&hex, Vertex::new(0, 2)));
    }
}
