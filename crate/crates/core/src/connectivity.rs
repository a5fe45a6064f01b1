//! Exact vertex-connectivity checks through unit-capacity maximum flow.
//!
//! Intended as a test oracle for graphs up to a couple of thousand vertices.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

/// Size above which callers should expect `is_k_connected` to be slow.
pub const CONNECTIVITY_ORACLE_SOFT_LIMIT: usize = 2000;

/// Residual network of the split-vertex digraph: `x` becomes `2x -> 2x+1`
/// with capacity one, and each undirected edge `uw` becomes
/// `2u+1 -> 2w` and `2w+1 -> 2u`.
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    next: Vec<usize>,
    base_cap: Vec<u8>,
    cap: Vec<u8>,
}

const NIL: usize = usize::MAX;

impl SplitNetwork {
    fn new(g: &Graph) -> Self {
        let nodes = 2 * g.n();
        let arcs = 2 * (g.n() + 2 * g.m());
        let mut net = SplitNetwork {
            head: vec![NIL; nodes],
            to: Vec::with_capacity(arcs),
            next: Vec::with_capacity(arcs),
            base_cap: Vec::with_capacity(arcs),
            cap: Vec::new(),
        };
        for x in 0..g.n() {
            net.add_arc(2 * x, 2 * x + 1);
        }
        for (u, w) in g.edges() {
            net.add_arc(2 * u + 1, 2 * w);
            net.add_arc(2 * w + 1, 2 * u);
        }
        net.cap = net.base_cap.clone();
        net
    }

    /// Arc `e` and its reverse `e ^ 1` are stored adjacently.
    fn add_arc(&mut self, from: usize, to: usize) {
        for (a, b, c) in [(from, to, 1u8), (to, from, 0u8)] {
            self.to.push(b);
            self.base_cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    /// Whether at least `k` internally vertex-disjoint `s`-`t` paths exist.
    fn disjoint_paths_at_least(&mut self, s: Vertex, t: Vertex, k: usize) -> bool {
        self.cap.copy_from_slice(&self.base_cap);
        let (source, sink) = (2 * s + 1, 2 * t);
        let mut pred = vec![NIL; self.head.len()];
        for _ in 0..k {
            pred.iter_mut().for_each(|p| *p = NIL);
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            'bfs: while let Some(x) = queue.pop_front() {
                let mut e = self.head[x];
                while e != NIL {
                    let y = self.to[e];
                    if self.cap[e] > 0 && y != source && pred[y] == NIL {
                        pred[y] = e;
                        if y == sink {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                    e = self.next[e];
                }
            }
            if !reached {
                return false;
            }
            let mut y = sink;
            while y != source {
                let e = pred[y];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                y = self.to[e ^ 1];
            }
        }
        true
    }
}

/// Whether `g` is `k`-connected: more than `k` vertices and no vertex cut of
/// size below `k`.
///
/// Checks the local connectivity of every non-adjacent pair `(v_i, v_j)` with
/// `i < k` and `j > i`. A cut `C` with `|C| < k` misses some `v_i`, `i < k`;
/// taking the smallest such `i`, every vertex separated from `v_i` by `C`
/// has index above `i`, so one of the checked pairs exposes `C`.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    assert!(k >= 1, "connectivity order must be positive");
    let n = g.n();
    if n <= k {
        return false;
    }
    if g.min_degree() < k {
        return false;
    }
    if n > CONNECTIVITY_ORACLE_SOFT_LIMIT {
        log::warn!("is_k_connected on {n} vertices may be slow");
    }
    let mut net = SplitNetwork::new(g);
    for i in 0..k {
        for j in i + 1..n {
            if !g.has_edge(i, j) && !net.disjoint_paths_at_least(i, j, k) {
                return false;
            }
        }
    }
    true
}

/// Exact vertex connectivity by testing increasing `k`. Small graphs only.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let mut k = 0;
    while k + 1 < g.n().max(1) && is_k_connected(g, k + 1) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        assert!(is_k_connected(&Graph::complete(5), 4));
        assert!(!is_k_connected(&Graph::complete(5), 5));
        assert_eq!(vertex_connectivity(&Graph::complete(6)), 5);
    }

    #[test]
    fn cycle_and_star() {
        let c5 = Graph::cycle(5);
        assert!(is_k_connected(&c5, 2));
        assert!(!is_k_connected(&c5, 3));
        assert!(!is_k_connected(&Graph::star(4), 2));
        assert!(is_k_connected(&Graph::star(4), 1));
    }

    #[test]
    fn disconnected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!is_k_connected(&g, 1));
    }
}
