//! Dinic max-flow on integer capacities, plus the max-closure reduction used
//! by the densest-subgraph routines.

use std::collections::VecDeque;

pub(crate) const INF: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

pub(crate) struct Dinic {
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub(crate) fn new(nodes: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            head: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.head[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.head[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.head[v] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.head[v].len() {
            let a = self.head[v][self.iter[v]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.arcs[a].cap -= d;
                    self.arcs[a ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual network (call after
    /// [`Dinic::max_flow`]).
    pub(crate) fn source_side(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

/// Maximises `weight * |E(S)| - cost * |S|` over vertex sets `S` of the graph
/// given by `n` vertices and `edges`, optionally forcing `forced` into `S`.
/// Returns the optimum and the inclusion-minimal optimal set (without the
/// forced vertex's fixed contribution removed).
pub(crate) fn max_closure(
    n: usize,
    edges: &[(usize, usize)],
    weight: i64,
    cost: i64,
    forced: Option<usize>,
) -> (i64, Vec<usize>) {
    // Nodes: source, sink, one per edge, one per vertex.
    let (s, t) = (0, 1);
    let edge_node = |i: usize| 2 + i;
    let vertex_node = |v: usize| 2 + edges.len() + v;
    let mut net = Dinic::new(2 + edges.len() + n);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_edge(s, edge_node(i), weight);
        net.add_edge(edge_node(i), vertex_node(u), INF);
        net.add_edge(edge_node(i), vertex_node(v), INF);
    }
    for v in 0..n {
        net.add_edge(vertex_node(v), t, cost);
    }
    if let Some(f) = forced {
        net.add_edge(s, vertex_node(f), INF);
    }
    let cut = net.max_flow(s, t);
    let side = net.source_side(s);
    let chosen: Vec<usize> = (0..n).filter(|&v| side[vertex_node(v)]).collect();
    let inside = edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| side[edge_node(i)])
        .count() as i64;
    let value = weight * inside - cost * chosen.len() as i64;
    if forced.is_none() {
        debug_assert_eq!(value, weight * edges.len() as i64 - cut);
    }
    (value, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network_flow() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 3);
        d.add_edge(0, 2, 2);
        d.add_edge(1, 2, 1);
        d.add_edge(1, 3, 2);
        d.add_edge(2, 3, 3);
        assert_eq!(d.max_flow(0, 3), 5);
    }

    #[test]
    fn closure_picks_triangle_over_pendant() {
        // Triangle 0-1-2 plus pendant 2-3; at ratio 1 only the triangle pays.
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let (value, set) = max_closure(4, &edges, 1, 1, None);
        assert_eq!(value, 0);
        assert!(set.is_empty() || set == vec![0, 1, 2] || set == vec![0, 1, 2, 3]);
        // At ratio 5/4 the triangle pays 3 and the whole graph pays 4.
        let (value, set) = max_closure(4, &edges, 5, 4, None);
        assert_eq!(value, 5 * 4 - 4 * 4);
        assert_eq!(set, vec![0, 1, 2, 3]);
        // Forcing the pendant vertex still yields the whole graph.
        let (value, set) = max_closure(4, &edges, 5, 4, Some(3));
        assert_eq!(value, 4);
        assert_eq!(set, vec![0, 1, 2, 3]);
    }
}
