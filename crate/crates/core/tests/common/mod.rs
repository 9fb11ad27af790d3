#![allow(dead_code)]
//! Brute-force oracles shared by the integration tests. None of them call
//! the search, flow or circuit code of the library.

use std::collections::{HashMap, HashSet, VecDeque};

use critfpp::lattice::Vertex;

pub const DIRS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

pub fn nbrs(v: Vertex) -> impl Iterator<Item = Vertex> {
    DIRS.into_iter().map(move |(dx, dy)| Vertex::new(v.x + dx, v.y + dy))
}

pub fn sup(a: Vertex, b: Vertex) -> i32 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

/// Tiny deterministic generator for test instances.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed ^ 0x5DEE_CE66_D1CE_4E5B)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Positive dyadic weight in `{1/4, 1/2, ..., 2}`; sums stay exact.
    pub fn dyadic(&mut self) -> f64 {
        (1 + self.below(8)) as f64 / 4.0
    }
}

/// Hop distances to `targets` within `allowed`.
fn hops(allowed: &HashSet<Vertex>, targets: &[Vertex]) -> HashMap<Vertex, u32> {
    let mut d = HashMap::new();
    let mut q = VecDeque::new();
    for &t in targets {
        if allowed.contains(&t) && d.insert(t, 0).is_none() {
            q.push_back(t);
        }
    }
    while let Some(v) = q.pop_front() {
        let dv = d[&v];
        for w in nbrs(v) {
            if allowed.contains(&w) && !d.contains_key(&w) {
                d.insert(w, dv + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Minimum over self-avoiding paths inside `allowed` from a vertex of
/// `sources` to a vertex of `targets` of the weights of all vertices but the
/// first. Exhaustive depth-first enumeration, pruned only by a bound that
/// never discards an optimal path (weights are positive).
pub fn saw_min(allowed: &HashSet<Vertex>, weight: &dyn Fn(Vertex) -> f64, sources: &[Vertex], targets: &[Vertex]) -> f64 {
    let target: HashSet<Vertex> = targets.iter().copied().collect();
    let h = hops(allowed, targets);
    let w_min = allowed.iter().map(|&v| weight(v)).fold(f64::INFINITY, f64::min);
    let mut best = f64::INFINITY;
    let mut on = HashSet::new();
    fn go(
        v: Vertex,
        cost: f64,
        ctx: (&HashSet<Vertex>, &dyn Fn(Vertex) -> f64, &HashSet<Vertex>, &HashMap<Vertex, u32>, f64),
        on: &mut HashSet<Vertex>,
        best: &mut f64,
    ) {
        let (allowed, weight, target, h, w_min) = ctx;
        if target.contains(&v) {
            *best = best.min(cost);
            return;
        }
        let Some(&left) = h.get(&v) else { return };
        if cost + left as f64 * w_min >= *best {
            return;
        }
        for w in nbrs(v) {
            if allowed.contains(&w) && !on.contains(&w) {
                on.insert(w);
                go(w, cost + weight(w), ctx, on, best);
                on.remove(&w);
            }
        }
    }
    for &s in sources {
        on.insert(s);
        go(s, 0.0, (allowed, weight, &target, &h, w_min), &mut on, &mut best);
        on.remove(&s);
    }
    best
}

/// Winding number of a closed polygon around the origin, by summing angles.
pub fn winding(poly: &[Vertex]) -> i32 {
    // shift the origin off the lattice so no edge passes through it
    let (ox, oy) = (0.01_f64, 0.003_f64);
    let mut total = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (ax, ay) = (a.x as f64 - ox, a.y as f64 - oy);
        let (bx, by) = (b.x as f64 - ox, b.y as f64 - oy);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    (total / std::f64::consts::TAU).round() as i32
}

/// Cheapest simple cycle of `allowed` winding around the origin, each vertex
/// weighed once. Enumerates cycles through each vertex of the positive x-axis
/// (every such cycle meets it), pruned by the best found so far.
pub fn circuit_min(allowed: &HashSet<Vertex>, weight: &dyn Fn(Vertex) -> f64) -> f64 {
    let mut starts: Vec<Vertex> = allowed.iter().copied().filter(|v| v.y == 0 && v.x > 0).collect();
    starts.sort_by_key(|v| v.x);
    let w_min = allowed.iter().map(|&v| weight(v)).fold(f64::INFINITY, f64::min);
    let mut best = f64::INFINITY;
    for (i, &s) in starts.iter().enumerate() {
        // cycles through an earlier start were already seen
        let banned: HashSet<Vertex> = starts[..i].iter().copied().collect();
        let usable: HashSet<Vertex> = allowed.difference(&banned).copied().collect();
        let h = hops(&usable, &[s]);
        let mut path = vec![s];
        let mut on: HashSet<Vertex> = HashSet::from([s]);
        #[allow(clippy::too_many_arguments)]
        fn go(
            path: &mut Vec<Vertex>,
            on: &mut HashSet<Vertex>,
            cost: f64,
            s: Vertex,
            usable: &HashSet<Vertex>,
            weight: &dyn Fn(Vertex) -> f64,
            h: &HashMap<Vertex, u32>,
            w_min: f64,
            best: &mut f64,
        ) {
            let v = *path.last().unwrap();
            let back = h.get(&v).copied().unwrap_or(u32::MAX);
            if back == u32::MAX || cost + weight(s) + (back.saturating_sub(1)) as f64 * w_min >= *best {
                return;
            }
            if path.len() >= 3 && v.is_adjacent(s) && winding(path) != 0 {
                *best = best.min(cost + weight(s));
            }
            for w in nbrs(v) {
                if usable.contains(&w) && !on.contains(&w) {
                    on.insert(w);
                    path.push(w);
                    go(path, on, cost + weight(w), s, usable, weight, h, w_min, best);
                    path.pop();
                    on.remove(&w);
                }
            }
        }
        go(&mut path, &mut on, 0.0, s, &usable, weight, &h, w_min, &mut best);
    }
    best
}

/// Simple paths from `v` whose other vertices satisfy `ok`, stopping at the
/// first vertex where `stop` holds. Returns the vertex sets (without `v`).
pub fn stopped_paths(v: Vertex, ok: &dyn Fn(Vertex) -> bool, stop: &dyn Fn(Vertex) -> bool) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut path = vec![v];
    fn go(path: &mut Vec<Vertex>, ok: &dyn Fn(Vertex) -> bool, stop: &dyn Fn(Vertex) -> bool, out: &mut Vec<Vec<Vertex>>) {
        let u = *path.last().unwrap();
        for w in nbrs(u) {
            if ok(w) && !path.contains(&w) {
                path.push(w);
                if stop(w) {
                    out.push(path[1..].to_vec());
                } else {
                    go(path, ok, stop, out);
                }
                path.pop();
            }
        }
    }
    go(&mut path, ok, stop, &mut out);
    out
}

/// Two vertex-disjoint paths (apart from `v`) from `v` into `targets_a` and
/// `targets_b` through `member` vertices, by augmenting paths on the
/// vertex-split graph (plain Ford-Fulkerson, unit capacities).
pub fn two_disjoint(v: Vertex, member: &dyn Fn(Vertex) -> bool, in_a: &dyn Fn(Vertex) -> bool, in_b: &dyn Fn(Vertex) -> bool) -> bool {
    // collect the component
    let mut comp = vec![v];
    let mut seen = HashSet::from([v]);
    let mut i = 0;
    while i < comp.len() {
        let u = comp[i];
        i += 1;
        for w in nbrs(u) {
            if member(w) && seen.insert(w) {
                comp.push(w);
            }
        }
    }
    let id: HashMap<Vertex, usize> = comp.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    // nodes: 2i = in, 2i+1 = out, sinks A = 2n, B = 2n+1, T = 2n+2
    let n = comp.len();
    let (na, nb, t) = (2 * n, 2 * n + 1, 2 * n + 2);
    let mut cap: HashMap<(usize, usize), i32> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 3];
    let mut add = |a: usize, b: usize, c: i32, cap: &mut HashMap<(usize, usize), i32>| {
        *cap.entry((a, b)).or_insert(0) += c;
        cap.entry((b, a)).or_insert(0);
        adj[a].push(b);
        adj[b].push(a);
    };
    for (i, &u) in comp.iter().enumerate() {
        add(2 * i, 2 * i + 1, if u == v { 2 } else { 1 }, &mut cap);
        for w in nbrs(u) {
            if let Some(&j) = id.get(&w) {
                add(2 * i + 1, 2 * j, 1, &mut cap);
            }
        }
        if in_a(u) {
            add(2 * i + 1, na, 1, &mut cap);
        }
        if in_b(u) {
            add(2 * i + 1, nb, 1, &mut cap);
        }
    }
    add(na, t, 1, &mut cap);
    add(nb, t, 1, &mut cap);
    let s = 2 * id[&v];
    let mut flow = 0;
    while flow < 2 {
        let mut prev = vec![usize::MAX; 2 * n + 3];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(a) = q.pop_front() {
            for &b in &adj[a] {
                if prev[b] == usize::MAX && cap[&(a, b)] > 0 {
                    prev[b] = a;
                    q.push_back(b);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut b = t;
        while b != s {
            let a = prev[b];
            *cap.get_mut(&(a, b)).unwrap() -= 1;
            *cap.get_mut(&(b, a)).unwrap() += 1;
            b = a;
        }
        flow += 1;
    }
    flow == 2
}

/// Oracle for membership in the contributing set: open arms by enumerating
/// every stopped path in the window, closed arms by augmenting paths.
pub fn contributing_oracle(label: &dyn Fn(Vertex) -> Option<f64>, n: u32, p: f64, lhat: i32, v: Vertex) -> bool {
    let h = 1i32 << n;
    let in_s = |u: Vertex| u.x.abs() <= 4 * h && u.y.abs() <= h;
    let omega = label(v).unwrap();
    if !(omega > 0.5 && omega <= p) {
        return false;
    }
    let open = |u: Vertex| in_s(u) && sup(u, v) <= lhat && label(u).is_some_and(|w| w <= p);
    let paths = stopped_paths(v, &open, &|u| sup(u, v) == lhat);
    let mut two_open = false;
    'outer: for (i, a) in paths.iter().enumerate() {
        for b in &paths[i + 1..] {
            if a.iter().all(|x| !b.contains(x)) {
                two_open = true;
                break 'outer;
            }
        }
    }
    if !two_open {
        return false;
    }
    let closed = |u: Vertex| in_s(u) && label(u).is_some_and(|w| w > 0.5);
    two_disjoint(v, &closed, &|u| u.y == h, &|u| u.y == -h)
}

/// Winding number of a closed polygon around the lattice point `q`.
pub fn winding_about(poly: &[Vertex], q: Vertex) -> i32 {
    let shifted: Vec<Vertex> = poly.iter().map(|v| Vertex::new(v.x - q.x, v.y - q.y)).collect();
    winding(&shifted)
}

/// Every simple cycle of `member` vertices winding around the origin, each
/// once up to rotation and reflection. Gives up (`None`) past `cap` cycles.
pub fn all_circuits(member: &HashSet<Vertex>, cap: usize) -> Option<Vec<Vec<Vertex>>> {
    let mut starts: Vec<Vertex> = member.iter().copied().filter(|v| v.y == 0 && v.x > 0).collect();
    starts.sort_by_key(|v| v.x);
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut out = Vec::new();
    for (i, &s) in starts.iter().enumerate() {
        let usable: HashSet<Vertex> = member.iter().copied().filter(|v| !starts[..i].contains(v)).collect();
        let mut path = vec![s];
        let mut stack: Vec<(Vertex, usize)> = vec![(s, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == 6 {
                stack.pop();
                path.pop();
                continue;
            }
            let (dx, dy) = DIRS[*next];
            *next += 1;
            let w = Vertex::new(v.x + dx, v.y + dy);
            if w == s && path.len() >= 3 && winding(&path) != 0 {
                let mut key = path.clone();
                key.sort_by_key(|u| (u.x, u.y));
                if seen.insert(key) {
                    out.push(path.clone());
                    if out.len() > cap {
                        return None;
                    }
                }
            } else if usable.contains(&w) && !path.contains(&w) {
                path.push(w);
                stack.push((w, 0));
            }
        }
    }
    Some(out)
}
