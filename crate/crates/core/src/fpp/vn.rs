//! Vertices that can contribute to a cheap crossing of `S(n)`.

use crate::grid::Marks;
use crate::labels::LabelField;
use crate::lattice::{neighbors, Region, Vertex};
use crate::percolation::{max_disjoint_paths, FlowProblem};

use super::{dyadic, FppError};

/// `R(n) = [-2^{n+1}, 2^{n+1}] x [-2^n, 2^n]`.
pub fn r_rect(n: u32) -> Result<Region, FppError> {
    let h = dyadic(n)?;
    Ok(Region::Rect { x0: -2 * h, x1: 2 * h, y0: -h, y1: h })
}

/// `S(n) = [-2^{n+2}, 2^{n+2}] x [-2^n, 2^n]`.
pub fn s_rect(n: u32) -> Result<Region, FppError> {
    let h = dyadic(n)?;
    Ok(Region::Rect { x0: -4 * h, x1: 4 * h, y0: -h, y1: h })
}

/// Vertices reachable from `v` through `member` vertices (including `v`).
fn component(v: Vertex, member: impl Fn(Vertex) -> bool, marks: &mut Marks) -> Vec<Vertex> {
    marks.clear();
    marks.mark(v);
    let mut out = vec![v];
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        i += 1;
        for w in neighbors(u) {
            if member(w) && marks.mark(w) {
                out.push(w);
            }
        }
    }
    out
}

/// Whether `v` belongs to `V_n(p)`:
/// `omega_v` in `(1/2, p]`; two `p`-open paths from `v` to `∂B(v, lhat)` inside
/// `S(n)`, disjoint apart from `v`; and two `1/2`-closed paths from `v` inside
/// `S(n)`, disjoint apart from `v`, one reaching the top side and one the bottom.
pub fn contributing_vertex(labels: &LabelField, n: u32, p: f64, lhat: i32, v: Vertex) -> Result<bool, FppError> {
    let s = s_rect(n)?;
    let mut marks = Marks::new(s.bounds().expect("bounded"));
    contributing_with(labels, &s, p, lhat, v, &mut marks)
}

fn contributing_with(labels: &LabelField, s: &Region, p: f64, lhat: i32, v: Vertex, marks: &mut Marks) -> Result<bool, FppError> {
    let Region::Rect { y0, y1, .. } = *s else { unreachable!() };
    let label = |u: Vertex| labels.get(u).ok_or(FppError::RegionMismatch { inner: s.to_string(), outer: labels.index().region().to_string() });
    let omega = label(v)?;
    if !(omega > 0.5 && omega <= p) {
        return Ok(false);
    }
    let in_s = |u: Vertex| s.contains(u);
    let open = |u: Vertex| in_s(u) && (u.x - v.x).abs().max((u.y - v.y).abs()) <= lhat && labels.get(u).is_some_and(|w| w <= p);
    let nodes = component(v, open, marks);
    let on_window = |u: &Vertex| (u.x - v.x).abs().max((u.y - v.y).abs()) == lhat;
    let sinks: Vec<(Vertex, usize)> = nodes.iter().filter(|u| on_window(u)).map(|&u| (u, 0)).collect();
    if sinks.len() < 2 {
        return Ok(false);
    }
    let problem = FlowProblem { nodes, node_caps: vec![(v, 2)], sources: vec![(v, 2)], sinks, group_caps: vec![2] };
    if max_disjoint_paths(&problem, 2) < 2 {
        return Ok(false);
    }

    let closed = |u: Vertex| in_s(u) && labels.get(u).is_some_and(|w| w > 0.5);
    let nodes = component(v, closed, marks);
    let mut sinks = Vec::new();
    for &u in &nodes {
        if u.y == y1 {
            sinks.push((u, 0));
        }
        if u.y == y0 {
            sinks.push((u, 1));
        }
    }
    let problem = FlowProblem { nodes, node_caps: vec![(v, 2)], sources: vec![(v, 2)], sinks, group_caps: vec![1, 1] };
    Ok(max_disjoint_paths(&problem, 2) == 2)
}

/// `#V_n(p)`: the number of contributing vertices in `R(n)`.
pub fn count_contributing_vertices(labels: &LabelField, n: u32, p: f64, lhat: i32) -> Result<usize, FppError> {
    let h = dyadic(n)?;
    if lhat > h || lhat < 1 {
        return Err(FppError::WindowTooLarge { lhat, n });
    }
    let s = s_rect(n)?;
    for v in s.vertices()? {
        if labels.get(v).is_none() {
            return Err(FppError::RegionMismatch { inner: s.to_string(), outer: labels.index().region().to_string() });
        }
    }
    let mut marks = Marks::new(s.bounds().expect("bounded"));
    let mut count = 0;
    for v in r_rect(n)?.vertices()? {
        if contributing_with(labels, &s, p, lhat, v, &mut marks)? {
            count += 1;
        }
    }
    Ok(count)
}
