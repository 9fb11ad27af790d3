//! Cheapest circuit around the origin inside an annulus.
//!
//! Closed walks around the origin are found as paths in a two-sheeted cover
//! of the annulus: crossing the ray to the right of the origin (edges from
//! `(x, 0)`, `x > 0`, to row 1) switches sheet. A closed walk with odd winding
//! contains a circuit around the origin costing no more, so the cheapest odd
//! walk through some vertex `(x, 0)` is the cheapest circuit. Each cut vertex
//! is tried as a start; its own weight is paid on arrival back.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::lattice::{Region, Vertex, VertexIndex};
use crate::percolation::winding_parity;

use super::{FppError, PathResult, WeightField, WeightSource};

const NONE: u32 = u32::MAX;

#[inline]
fn crosses_ray(a: Vertex, b: Vertex) -> bool {
    let (low, high) = if a.y <= b.y { (a, b) } else { (b, a) };
    low.y == 0 && high.y == 1 && low.x > 0
}

/// Minimum over circuits around the origin in `Ann(m, n)` of the sum of
/// their vertex weights, each vertex counted once.
pub fn min_circuit_time(field: &WeightField, m: i32, n: i32, witness: bool) -> Result<PathResult, FppError> {
    let ann = Region::annulus(m, n)?;
    field.require(&ann)?;
    min_circuit_time_with(field, m, n, witness)
}

pub fn min_circuit_time_with<W: WeightSource + ?Sized>(w: &W, m: i32, n: i32, witness: bool) -> Result<PathResult, FppError> {
    let index = VertexIndex::new(Region::annulus(m, n)?)?;
    let nv = index.len();
    let tau: Vec<f64> = index.vertices().iter().map(|&v| w.weight(v)).collect();
    let adj: Vec<Vec<(u32, bool)>> = (0..nv)
        .map(|i| {
            let v = index.vertex(i);
            index.neighbor_indices(i).map(|j| (j as u32, crosses_ray(v, index.vertex(j)))).collect()
        })
        .collect();

    let mut dist = vec![f64::INFINITY; 2 * nv];
    let mut prev = vec![NONE; 2 * nv];
    let mut gen = vec![0u32; 2 * nv];
    let mut done = vec![0u32; 2 * nv];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    let mut best = f64::INFINITY;
    let mut best_walk: Option<Vec<Vertex>> = None;

    for (round, x) in (m + 1..=n).enumerate() {
        let g = round as u32 + 1;
        let s = index.index_of(Vertex::new(x, 0)).expect("cut vertex in annulus") as u32;
        let (start, goal) = (2 * s, 2 * s + 1);
        heap.clear();
        gen[start as usize] = g;
        dist[start as usize] = 0.0;
        prev[start as usize] = NONE;
        heap.push(Reverse((0f64.to_bits(), start)));
        while let Some(Reverse((_, node))) = heap.pop() {
            let u = node as usize;
            if done[u] == g {
                continue;
            }
            done[u] = g;
            let du = dist[u];
            if du >= best {
                break;
            }
            if node == goal {
                best = du;
                if witness {
                    let mut walk = Vec::new();
                    let mut c = node;
                    while c != NONE {
                        walk.push(index.vertex((c / 2) as usize));
                        c = prev[c as usize];
                    }
                    walk.reverse();
                    walk.pop();
                    best_walk = Some(walk);
                }
                break;
            }
            let (vi, sheet) = (u / 2, u % 2);
            for &(j, flip) in &adj[vi] {
                let t = 2 * j as usize + (sheet ^ flip as usize);
                if done[t] == g {
                    continue;
                }
                let nd = du + tau[j as usize];
                if gen[t] != g || nd < dist[t] {
                    gen[t] = g;
                    dist[t] = nd;
                    prev[t] = node;
                    heap.push(Reverse((nd.to_bits(), t as u32)));
                }
            }
        }
    }
    if best.is_infinite() {
        return Err(FppError::Unreachable);
    }
    Ok(PathResult { value: best, witness: best_walk.map(|w| odd_loop(&w)) })
}

/// The simple loop around the origin inside a closed walk of odd winding.
fn odd_loop(walk: &[Vertex]) -> Vec<Vertex> {
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    let mut path: Vec<Vertex> = Vec::new();
    for &v in walk.iter().chain(std::iter::once(&walk[0])) {
        if let Some(&i) = pos.get(&v) {
            let lp = &path[i..];
            if lp.len() >= 3 && winding_parity(lp, Vertex::ORIGIN) {
                return lp.to_vec();
            }
            for u in path.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, path.len());
            path.push(v);
        }
    }
    unreachable!("odd closed walk contains an odd simple loop")
}
