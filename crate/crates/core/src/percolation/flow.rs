//! Vertex-disjoint paths by unit-capacity max-flow on split vertices.

use std::collections::HashMap;

use crate::lattice::{neighbors, Vertex};

/// A vertex-disjoint paths question on the subgraph induced by `nodes`.
///
/// Every node has capacity 1 unless listed in `node_caps`. Paths start at
/// `sources` (each an edge of capacity 1 from the super-source, or the listed
/// capacity) and end at a node of some sink group; group `g` accepts at most
/// `group_caps[g]` paths.
#[derive(Debug, Clone, Default)]
pub struct FlowProblem {
    pub nodes: Vec<Vertex>,
    pub node_caps: Vec<(Vertex, u32)>,
    pub sources: Vec<(Vertex, u32)>,
    pub sinks: Vec<(Vertex, usize)>,
    pub group_caps: Vec<u32>,
}

struct Edge {
    to: usize,
    cap: u32,
}

struct Net {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Net {
    fn new(n: usize) -> Self {
        Net { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, a: usize, b: usize, cap: u32) {
        self.adj[a].push(self.edges.len());
        self.edges.push(Edge { to: b, cap });
        self.adj[b].push(self.edges.len());
        self.edges.push(Edge { to: a, cap: 0 });
    }

    /// One BFS augmentation by one unit; false when no augmenting path exists.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([s]);
        via[s] = usize::MAX - 1;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &self.adj[u] {
                let w = self.edges[e].to;
                if self.edges[e].cap > 0 && via[w] == usize::MAX {
                    via[w] = e;
                    queue.push_back(w);
                }
            }
        }
        if via[t] == usize::MAX {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = via[v];
            self.edges[e].cap -= 1;
            self.edges[e ^ 1].cap += 1;
            v = self.edges[e ^ 1].to;
        }
        true
    }
}

/// Number of vertex-disjoint paths, capped at `limit`.
pub fn max_disjoint_paths(problem: &FlowProblem, limit: u32) -> u32 {
    let n = problem.nodes.len();
    let pos: HashMap<Vertex, usize> = problem.nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let groups = problem.group_caps.len();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2 + groups);
    let mut caps = vec![1u32; n];
    for &(v, c) in &problem.node_caps {
        if let Some(&i) = pos.get(&v) {
            caps[i] = c;
        }
    }
    for (i, &v) in problem.nodes.iter().enumerate() {
        net.add(2 * i, 2 * i + 1, caps[i]);
        for w in neighbors(v) {
            if let Some(&j) = pos.get(&w) {
                net.add(2 * i + 1, 2 * j, 1);
            }
        }
    }
    for &(v, c) in &problem.sources {
        if let Some(&i) = pos.get(&v) {
            net.add(s, 2 * i, c);
        }
    }
    for &(v, g) in &problem.sinks {
        if let Some(&i) = pos.get(&v) {
            net.add(2 * i + 1, 2 * n + 2 + g, 1);
        }
    }
    for (g, &c) in problem.group_caps.iter().enumerate() {
        net.add(2 * n + 2 + g, t, c);
    }
    let mut flow = 0;
    while flow < limit && net.augment(s, t) {
        flow += 1;
    }
    flow
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_has_one_path_and_strip_has_two() {
        let line: Vec<Vertex> = (0..5).map(|x| Vertex::new(x, 0)).collect();
        let p = FlowProblem {
            nodes: line.clone(),
            sources: vec![(line[0], 5)],
            node_caps: vec![(line[0], 5)],
            sinks: vec![(line[4], 0)],
            group_caps: vec![5],
        };
        assert_eq!(max_disjoint_paths(&p, 10), 1);

        let strip: Vec<Vertex> = (0..5).flat_map(|x| [Vertex::new(x, 0), Vertex::new(x, 1)]).collect();
        let p = FlowProblem {
            nodes: strip,
            sources: vec![(Vertex::new(0, 0), 1), (Vertex::new(0, 1), 1)],
            node_caps: vec![],
            sinks: vec![(Vertex::new(4, 0), 0), (Vertex::new(4, 1), 0)],
            group_caps: vec![2],
        };
        assert_eq!(max_disjoint_paths(&p, 10), 2);
        assert_eq!(max_disjoint_paths(&p, 1), 1);
    }
}
