use std::collections::VecDeque;
use std::fmt;

use crate::graph::{Graph, Vertex};

use super::partition::{Class, Partition};

/// Retry rounds (each doubling the tree budget) before a set is given up.
const RETRIES: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectFailure {
    pub set: usize,
    /// The linear forest of `S_set + v_set` when the search gave up.
    pub components: Vec<Vec<Vertex>>,
    pub budget: usize,
}

impl fmt::Display for ConnectFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "set {} left in {} components (tree budget {})",
            self.set,
            self.components.len(),
            self.budget
        )
    }
}

impl ConnectFailure {
    /// The reported forest must really be unfinished: at least two
    /// vertex-disjoint paths of `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.n()];
        self.components.len() >= 2
            && self.components.iter().all(|c| {
                !c.is_empty()
                    && c.iter().all(|&v| v < g.n() && !std::mem::replace(&mut seen[v], true))
                    && c.windows(2).all(|w| g.has_edge(w[0], w[1]))
            })
    }
}

struct Search {
    owner: Vec<u8>,
    parent: Vec<Vertex>,
    touched: Vec<Vertex>,
}

impl Search {
    fn new(n: usize) -> Self {
        Self {
            owner: vec![0; n],
            parent: vec![usize::MAX; n],
            touched: Vec::new(),
        }
    }

    fn claim(&mut self, v: Vertex, side: u8, parent: Vertex) {
        self.owner[v] = side;
        self.parent[v] = parent;
        self.touched.push(v);
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.owner[v] = 0;
            self.parent[v] = usize::MAX;
        }
        self.touched.clear();
    }

    fn trace(&self, mut v: Vertex) -> Vec<Vertex> {
        let mut out = vec![v];
        while self.parent[v] != usize::MAX {
            v = self.parent[v];
            out.push(v);
        }
        out
    }

    /// Grows two BFS trees, from `a` and from `b`, through `usable` vertices,
    /// each limited to `budget` grown vertices, and stops at the first edge
    /// between them. Returns the path `a ... b`.
    fn bridge(
        &mut self,
        g: &Graph,
        a: Vertex,
        b: Vertex,
        usable: &[bool],
        budget: usize,
    ) -> Option<Vec<Vertex>> {
        self.reset();
        self.claim(a, 1, usize::MAX);
        self.claim(b, 2, usize::MAX);
        let mut queues = [VecDeque::from([a]), VecDeque::from([b])];
        let mut grown = [0usize; 2];
        let mut result = None;
        'outer: while !queues[0].is_empty() || !queues[1].is_empty() {
            for side in 0..2 {
                let Some(x) = queues[side].pop_front() else { continue };
                let me = side as u8 + 1;
                for &y in g.neighbors(x) {
                    let o = self.owner[y];
                    if o != 0 && o != me {
                        result = Some((x, y, side));
                        break 'outer;
                    }
                    if o == 0 && usable[y] && grown[side] < budget {
                        grown[side] += 1;
                        self.claim(y, me, x);
                        queues[side].push_back(y);
                    }
                }
            }
        }
        let (x, y, side) = result?;
        let (from_a, from_b) = if side == 0 { (x, y) } else { (y, x) };
        let mut path = self.trace(from_a);
        path.reverse();
        path.extend(self.trace(from_b));
        Some(path)
    }
}

/// Joins `S_i + v_i` into one path for every `i`, routing through unused
/// reservoir vertices. Components are merged pairwise: two endpoints grow
/// BFS trees of `ceil(s / (3c))` reservoir vertices each (`c` = current
/// component count) until an edge joins the trees; grown vertices off the
/// resulting path are released. The budget doubles up to twice before the
/// set is reported as unconnectable.
pub fn connect_through_reservoir(
    g: &Graph,
    part: &Partition,
    growth_budget: usize,
) -> Result<Vec<Vec<Vertex>>, ConnectFailure> {
    let mut usable: Vec<bool> = part.class.iter().map(|&c| c == Class::R).collect();
    let mut search = Search::new(g.n());
    let sets = part.sets();
    let mut paths = Vec::with_capacity(part.k());
    for (i, members) in sets.iter().enumerate() {
        let mut comps: Vec<Vec<Vertex>> = std::iter::once(part.branches[i])
            .chain(members.iter().copied())
            .map(|v| vec![v])
            .collect();
        while comps.len() > 1 {
            let base = growth_budget.div_ceil(3 * comps.len()).max(1);
            let joined = (0..=RETRIES).find_map(|attempt| {
                let budget = base << attempt;
                (1..comps.len()).find_map(|j| {
                    for &ea in &ends(&comps[0]) {
                        for &eb in &ends(&comps[j]) {
                            if let Some(p) = search.bridge(g, ea, eb, &usable, budget) {
                                return Some((j, p));
                            }
                        }
                    }
                    None
                })
            });
            let Some((j, bridge)) = joined else {
                return Err(ConnectFailure {
                    set: i,
                    components: comps,
                    budget: base << RETRIES,
                });
            };
            let b = comps.swap_remove(j);
            let a = &mut comps[0];
            let (ea, eb) = (bridge[0], *bridge.last().unwrap());
            if a[0] == ea {
                a.reverse();
            }
            for &v in &bridge[1..bridge.len() - 1] {
                usable[v] = false;
                a.push(v);
            }
            if b[0] == eb {
                a.extend(b);
            } else {
                a.extend(b.into_iter().rev());
            }
        }
        paths.push(comps.pop().expect("one component"));
    }
    Ok(paths)
}

fn ends(path: &[Vertex]) -> Vec<Vertex> {
    if path.len() == 1 {
        vec![path[0]]
    } else {
        vec![path[0], path[path.len() - 1]]
    }
}

/// Checks that path `i` is a path of `g` containing `S_i + v_i` and lying in
/// `S_i ∪ R ∪ {v_i}`, and that paths are pairwise disjoint.
pub fn validate_paths(g: &Graph, part: &Partition, paths: &[Vec<Vertex>]) -> Result<(), String> {
    if paths.len() != part.k() {
        return Err(format!("{} paths for {} sets", paths.len(), part.k()));
    }
    let mut seen = vec![false; g.n()];
    let sets = part.sets();
    for (i, p) in paths.iter().enumerate() {
        for &v in p {
            if v >= g.n() || seen[v] {
                return Err(format!("path {i}: vertex {v} repeated or out of range"));
            }
            seen[v] = true;
            let ok = v == part.branches[i] || part.class[v] == Class::R || part.class[v] == Class::S(i);
            if !ok {
                return Err(format!("path {i}: vertex {v} lies outside S_{i} ∪ R ∪ {{v_{i}}}"));
            }
        }
        if let Some(w) = p.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("path {i}: ({}, {}) is not an edge", w[0], w[1]));
        }
        if !p.contains(&part.branches[i]) || sets[i].iter().any(|v| !p.contains(v)) {
            return Err(format!("path {i} misses part of S_{i} + v_{i}"));
        }
    }
    Ok(())
}
