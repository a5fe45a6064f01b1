//! Bipartite matchings, Hall violators and disjoint star packings.

use std::collections::VecDeque;

use crate::graph::{BipartiteGraph, Graph, Vertex};

const NIL: usize = usize::MAX;

/// A set of vertex-disjoint edges `(left, right)`, sorted by left id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Re-checks that the pairs form a matching of `b`.
    pub fn validate(&self, b: &BipartiteGraph) -> Result<(), String> {
        let mut left_used = vec![false; b.left()];
        let mut right_used = vec![false; b.right()];
        for &(x, y) in &self.pairs {
            if x >= b.left() || y >= b.right() || !b.has_edge(x, y) {
                return Err(format!("({x}, {y}) is not an edge"));
            }
            if std::mem::replace(&mut left_used[x], true) {
                return Err(format!("left vertex {x} matched twice"));
            }
            if std::mem::replace(&mut right_used[y], true) {
                return Err(format!("right vertex {y} matched twice"));
            }
        }
        Ok(())
    }

    /// Whether every vertex on `side` is covered.
    pub fn saturates(&self, b: &BipartiteGraph, side: Side) -> bool {
        let size = match side {
            Side::Left => b.left(),
            Side::Right => b.right(),
        };
        self.len() == size
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A set `A0` on one side whose neighborhood is smaller than itself, which
/// rules out any matching saturating that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolator {
    pub side: Side,
    pub set: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

impl HallViolator {
    pub fn deficiency(&self) -> usize {
        self.set.len().saturating_sub(self.neighborhood.len())
    }

    /// Recomputes the neighborhood of `set` in `b` and checks both that it is
    /// the claimed one and that it is too small.
    pub fn validate(&self, b: &BipartiteGraph) -> bool {
        let oriented;
        let g = match self.side {
            Side::Left => b,
            Side::Right => {
                oriented = b.transpose();
                &oriented
            }
        };
        let mut set = self.set.clone();
        set.sort_unstable();
        set.dedup();
        if set.len() != self.set.len() || set.iter().any(|&a| a >= g.left()) {
            return false;
        }
        let mut nb: Vec<usize> = set
            .iter()
            .flat_map(|&a| g.neighbors_of_left(a).iter().copied())
            .collect();
        nb.sort_unstable();
        nb.dedup();
        let mut claimed = self.neighborhood.clone();
        claimed.sort_unstable();
        nb == claimed && nb.len() < set.len()
    }
}

struct HopcroftKarp<'a> {
    b: &'a BipartiteGraph,
    mate_left: Vec<usize>,
    mate_right: Vec<usize>,
    dist: Vec<usize>,
    cursor: Vec<usize>,
}

impl<'a> HopcroftKarp<'a> {
    fn run(b: &'a BipartiteGraph) -> Self {
        let mut hk = HopcroftKarp {
            b,
            mate_left: vec![NIL; b.left()],
            mate_right: vec![NIL; b.right()],
            dist: vec![NIL; b.left()],
            cursor: vec![0; b.left()],
        };
        // Greedy warm start; neighbors are scanned in ascending order.
        for a in 0..b.left() {
            if let Some(&y) = b
                .neighbors_of_left(a)
                .iter()
                .find(|&&y| hk.mate_right[y] == NIL)
            {
                hk.mate_left[a] = y;
                hk.mate_right[y] = a;
            }
        }
        while hk.layer() {
            hk.cursor.iter_mut().for_each(|c| *c = 0);
            for a in 0..b.left() {
                if hk.mate_left[a] == NIL {
                    hk.augment_from(a);
                }
            }
        }
        hk
    }

    /// BFS layering from the free left vertices. Returns whether some free
    /// right vertex is reachable.
    fn layer(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for a in 0..self.b.left() {
            if self.mate_left[a] == NIL {
                self.dist[a] = 0;
                queue.push_back(a);
            } else {
                self.dist[a] = NIL;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &y in self.b.neighbors_of_left(a) {
                let next = self.mate_right[y];
                if next == NIL {
                    found = true;
                } else if self.dist[next] == NIL {
                    self.dist[next] = self.dist[a] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    }

    /// Iterative layered DFS looking for one augmenting path from `root`.
    fn augment_from(&mut self, root: usize) -> bool {
        let mut stack = vec![root];
        let mut via: Vec<usize> = Vec::new();
        while let Some(&a) = stack.last() {
            let adj = self.b.neighbors_of_left(a);
            if self.cursor[a] == adj.len() {
                self.dist[a] = NIL;
                stack.pop();
                via.pop();
                continue;
            }
            let y = adj[self.cursor[a]];
            self.cursor[a] += 1;
            let next = self.mate_right[y];
            if next == NIL {
                via.push(y);
                for (&a, &y) in stack.iter().zip(&via) {
                    self.mate_left[a] = y;
                    self.mate_right[y] = a;
                }
                return true;
            }
            if self.dist[next] != NIL && self.dist[next] == self.dist[a] + 1 {
                stack.push(next);
                via.push(y);
            }
        }
        false
    }

    fn matching(&self) -> Matching {
        Matching {
            pairs: self
                .mate_left
                .iter()
                .enumerate()
                .filter(|&(_, &y)| y != NIL)
                .map(|(a, &y)| (a, y))
                .collect(),
        }
    }

    /// Alternating-reachability set of the first unmatched left vertex.
    fn left_violator(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let start = self.mate_left.iter().position(|&y| y == NIL)?;
        let mut seen_left = vec![false; self.b.left()];
        let mut seen_right = vec![false; self.b.right()];
        let mut queue = VecDeque::from([start]);
        seen_left[start] = true;
        while let Some(a) = queue.pop_front() {
            for &y in self.b.neighbors_of_left(a) {
                if !seen_right[y] {
                    seen_right[y] = true;
                    let next = self.mate_right[y];
                    debug_assert!(next != NIL, "augmenting path left after HK");
                    if next != NIL && !seen_left[next] {
                        seen_left[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        let pick = |seen: &[bool]| seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect();
        Some((pick(&seen_left), pick(&seen_right)))
    }
}

/// Maximum-cardinality matching (Hopcroft-Karp). Deterministic for a fixed
/// input.
pub fn max_matching(b: &BipartiteGraph) -> Matching {
    HopcroftKarp::run(b).matching()
}

/// Either a matching covering every vertex of `side`, or a Hall violator on
/// that side.
pub fn saturating_or_violator(b: &BipartiteGraph, side: Side) -> Result<Matching, HallViolator> {
    match side {
        Side::Left => {
            let hk = HopcroftKarp::run(b);
            match hk.left_violator() {
                None => Ok(hk.matching()),
                Some((set, neighborhood)) => Err(HallViolator {
                    side,
                    set,
                    neighborhood,
                }),
            }
        }
        Side::Right => {
            let t = b.transpose();
            let hk = HopcroftKarp::run(&t);
            match hk.left_violator() {
                None => {
                    let mut pairs: Vec<_> =
                        hk.matching().pairs.into_iter().map(|(y, x)| (x, y)).collect();
                    pairs.sort_unstable();
                    Ok(Matching { pairs })
                }
                Some((set, neighborhood)) => Err(HallViolator {
                    side,
                    set,
                    neighborhood,
                }),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: Vertex,
    pub leaves: Vec<Vertex>,
}

/// Centers that cannot jointly receive enough pool leaves: their combined pool
/// neighborhood is smaller than `star_size * |centers|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deficiency {
    pub centers: Vec<Vertex>,
    pub pool_neighborhood: Vec<Vertex>,
}

impl Deficiency {
    pub fn validate(&self, g: &Graph, leaf_pool: &[Vertex], star_size: usize) -> bool {
        let mut in_pool = vec![false; g.n()];
        leaf_pool.iter().for_each(|&v| in_pool[v] = true);
        let mut nb: Vec<Vertex> = self
            .centers
            .iter()
            .flat_map(|&c| g.neighbors(c).iter().copied().filter(|&w| in_pool[w]))
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb == self.pool_neighborhood && nb.len() < star_size * self.centers.len()
    }
}

/// Vertex-disjoint stars, one per center, each with `star_size` leaves taken
/// from `leaf_pool`. Solved as a bipartite matching between `star_size` copies
/// of every center and the pool.
///
/// Panics if `centers` and `leaf_pool` intersect.
pub fn disjoint_star_packing(
    g: &Graph,
    centers: &[Vertex],
    leaf_pool: &[Vertex],
    star_size: usize,
) -> Result<Vec<Star>, Deficiency> {
    let mut pool_index = vec![NIL; g.n()];
    for (i, &v) in leaf_pool.iter().enumerate() {
        pool_index[v] = i;
    }
    assert!(
        centers.iter().all(|&c| pool_index[c] == NIL),
        "centers and leaf pool must be disjoint"
    );
    let mut adj = Vec::with_capacity(centers.len() * star_size);
    for &c in centers {
        let nb: Vec<usize> = g
            .neighbors(c)
            .iter()
            .filter(|&&w| pool_index[w] != NIL)
            .map(|&w| pool_index[w])
            .collect();
        for _ in 0..star_size {
            adj.push(nb.clone());
        }
    }
    let b = BipartiteGraph::from_adjacency(leaf_pool.len(), adj);
    match saturating_or_violator(&b, Side::Left) {
        Ok(m) => {
            let mut stars: Vec<Star> = centers
                .iter()
                .map(|&center| Star {
                    center,
                    leaves: Vec::with_capacity(star_size),
                })
                .collect();
            for &(copy, leaf) in m.pairs() {
                stars[copy / star_size].leaves.push(leaf_pool[leaf]);
            }
            Ok(stars)
        }
        Err(v) => {
            let mut deficient: Vec<Vertex> = v.set.iter().map(|&copy| centers[copy / star_size]).collect();
            deficient.dedup();
            let mut pool_neighborhood: Vec<Vertex> =
                v.neighborhood.iter().map(|&i| leaf_pool[i]).collect();
            pool_neighborhood.sort_unstable();
            Err(Deficiency {
                centers: deficient,
                pool_neighborhood,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_complete() {
        assert!(max_matching(&BipartiteGraph::new(0, 0)).is_empty());
        assert!(max_matching(&BipartiteGraph::new(3, 4)).is_empty());
        assert_eq!(max_matching(&BipartiteGraph::complete(3, 3)).len(), 3);
    }

    #[test]
    fn needs_augmentation() {
        let b = BipartiteGraph::from_edges(4, 4, [(0, 0), (0, 1), (1, 1), (2, 2), (3, 2), (3, 3)])
            .unwrap();
        let m = max_matching(&b);
        assert_eq!(m.len(), 4);
        m.validate(&b).unwrap();
    }

    #[test]
    fn saturating_left() {
        let b = BipartiteGraph::complete(2, 5);
        let m = saturating_or_violator(&b, Side::Left).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.saturates(&b, Side::Left));
    }

    #[test]
    fn pigeonhole_violator() {
        let b = BipartiteGraph::complete(2, 1);
        let v = saturating_or_violator(&b, Side::Left).unwrap_err();
        assert_eq!(v.set, vec![0, 1]);
        assert_eq!(v.neighborhood, vec![0]);
        assert!(v.validate(&b));
    }

    #[test]
    fn right_side() {
        let b = BipartiteGraph::complete(1, 2);
        let v = saturating_or_violator(&b, Side::Right).unwrap_err();
        assert_eq!(v.side, Side::Right);
        assert!(v.validate(&b));
        let b = BipartiteGraph::from_edges(3, 2, [(0, 1), (2, 0)]).unwrap();
        let m = saturating_or_violator(&b, Side::Right).unwrap();
        m.validate(&b).unwrap();
        assert!(m.saturates(&b, Side::Right));
    }

    #[test]
    fn star_packing_basics() {
        let g = Graph::star(5);
        assert!(disjoint_star_packing(&g, &[], &[1, 2], 3).unwrap().is_empty());
        let stars = disjoint_star_packing(&g, &[0], &[1, 2, 3, 4, 5], 5).unwrap();
        assert_eq!(stars, vec![Star { center: 0, leaves: vec![1, 2, 3, 4, 5] }]);
        let d = disjoint_star_packing(&g, &[0], &[1, 2, 3], 4).unwrap_err();
        assert_eq!(d.centers, vec![0]);
        assert!(d.validate(&g, &[1, 2, 3], 4));
    }
}
