//! Undirected simple graphs in compressed adjacency form.

use crate::error::GraphError;

pub type Vertex = usize;

/// Immutable undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are stored contiguously and sorted ascending, so "the first
/// `k` neighbors of `v`" is a deterministic prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an unordered edge list, rejecting self-loops,
    /// out-of-range endpoints and duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::parameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(GraphError::parameter(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::parameter(format!(
                    "duplicate edge ({}, {})",
                    v.min(w[0]),
                    v.max(w[0])
                )));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// Assumes every list is strictly increasing and the relation symmetric.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let total: usize = adj.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in adj {
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        debug_assert!(total.is_multiple_of(2));
        Self { offsets, targets }
    }

    /// Builds from duplicate-free edges `(u, v)` with `u < v`, listed in
    /// ascending lexicographic order of either `(u, v)` or `(v, u)`. Both
    /// orders emit every vertex's neighbors in ascending order.
    pub(crate) fn from_ordered_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        let g = Self { offsets, targets };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&w| w != v).collect())
            .collect();
        Self::from_sorted_adjacency(adj)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbor list. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn try_neighbors(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.check_vertex(v)?;
        Ok(self.neighbors(v))
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::parameter(format!(
                "vertex {v} out of range for n = {}",
                self.n()
            )))
        }
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Minimum degree; 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(sorted_intersection_len(self.neighbors(u), self.neighbors(v)))
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n() == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (0..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn average_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m() as f64 / self.n() as f64
        }
    }

    /// Edge density `2m / (n (n - 1))`.
    pub fn density(&self) -> f64 {
        let n = self.n() as f64;
        if self.n() < 2 {
            0.0
        } else {
            2.0 * self.m() as f64 / (n * (n - 1.0))
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Re-checks the representation invariants. Used by tests and after
    /// parsing.
    pub fn check_invariants(&self) -> Result<(), String> {
        for v in 0..self.n() {
            let list = self.neighbors(v);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {v} not strictly increasing"));
            }
            for &w in list {
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if w >= self.n() || self.neighbors(w).binary_search(&v).is_err() {
                    return Err(format!("edge ({v}, {w}) not symmetric"));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn sorted_intersection_len(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Vertices of degree strictly below `threshold`, ascending.
pub fn low_degree_set(g: &Graph, threshold: f64) -> Vec<Vertex> {
    (0..g.n())
        .filter(|&v| (g.degree(v) as f64) < threshold)
        .collect()
}

/// Degree threshold `np - factor * sqrt(2 n p' log n)` below which a vertex of
/// `G(n, p)` counts as low-degree. `p' = p (1 - p)` when `with_complement`,
/// otherwise `p' = p`.
pub fn low_degree_threshold(n: usize, p: f64, factor: f64, with_complement: bool) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let var_p = if with_complement { p * (1.0 - p) } else { p };
    nf * p - factor * (2.0 * nf * var_p * nf.ln()).sqrt()
}

/// External neighborhood `N(S)`: vertices outside `set` adjacent to it.
pub fn external_neighborhood(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let mut in_set = vec![false; g.n()];
    for &v in set {
        in_set[v] = true;
    }
    let mut mark = vec![false; g.n()];
    for &v in set {
        for &w in g.neighbors(v) {
            if !in_set[w] {
                mark[w] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| mark[v]).collect()
}

/// Undirected bipartite graph with parts `0..left` and `0..right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        Self {
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn from_edges<I>(left: usize, right: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); left];
        for (a, b) in edges {
            if a >= left || b >= right {
                return Err(GraphError::parameter(format!(
                    "bipartite edge ({a}, {b}) out of range for {left} x {right}"
                )));
            }
            adj[a].push(b);
        }
        for (a, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::parameter(format!(
                    "duplicate bipartite edge ({a}, {})",
                    w[0]
                )));
            }
        }
        Ok(Self { right, adj })
    }

    /// Takes ownership of per-left neighbor lists. Lists are sorted and
    /// deduplicated here.
    pub fn from_adjacency(right: usize, mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            debug_assert!(list.last().is_none_or(|&b| b < right));
        }
        Self { right, adj }
    }

    pub fn complete(left: usize, right: usize) -> Self {
        Self {
            right,
            adj: vec![(0..right).collect(); left],
        }
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn neighbors_of_left(&self, a: usize) -> &[usize] {
        &self.adj[a]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
    }

    /// The same graph with the roles of the parts swapped.
    pub fn transpose(&self) -> Self {
        let mut adj = vec![Vec::new(); self.right];
        for (a, b) in self.edges() {
            adj[b].push(a);
        }
        Self {
            right: self.left(),
            adj,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_degrees() {
        let g = Graph::complete(4);
        assert_eq!(g.m(), 6);
        assert_eq!(g.min_degree(), 3);
        assert_eq!(g.max_degree(), 3);
        assert_eq!(g.common_neighbors(0, 1).unwrap(), 2);
    }

    #[test]
    fn star_degrees() {
        let g = Graph::star(5);
        assert_eq!(g.min_degree(), 1);
        assert_eq!(g.max_degree(), 5);
    }

    #[test]
    fn low_degree_examples() {
        assert!(low_degree_set(&Graph::complete(4), 3.0).is_empty());
        assert_eq!(low_degree_set(&Graph::path(3), 2.0), vec![0, 2]);
    }

    #[test]
    fn out_of_range_vertex_is_parameter_error() {
        let g = Graph::complete(3);
        assert!(matches!(g.try_neighbors(3), Err(GraphError::Parameter(_))));
        assert!(matches!(g.common_neighbors(0, 9), Err(GraphError::Parameter(_))));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn ordered_pairs_match_generic_builder() {
        let pairs = [(0, 1), (0, 3), (1, 2), (2, 3)];
        assert_eq!(
            Graph::from_ordered_pairs(4, &pairs),
            Graph::from_edges(4, pairs).unwrap()
        );
    }

    #[test]
    fn handshake() {
        let g = Graph::cycle(7);
        let sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.m());
    }

    #[test]
    fn bipartite_transpose_roundtrip() {
        let b = BipartiteGraph::from_edges(2, 3, [(0, 2), (1, 0), (1, 2)]).unwrap();
        assert_eq!(b.transpose().transpose(), b);
        assert_eq!(b.transpose().neighbors_of_left(2), &[0, 1]);
    }
}
