//! Brute-force oracles shared by the integration tests. None of these call
//! into the library algorithms they are used to check.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use ist_forge::graph::BipartiteGraph;
use ist_forge::ist::{RootedTree, SpanningTreeFamily, TreeCollection};
use ist_forge::{Graph, SeededRng, Vertex};

/// Maximum matching size by dynamic programming over subsets of the right
/// side: `best[mask]` is the largest matching of the left prefix using only
/// right vertices in `mask`.
pub fn brute_matching(b: &BipartiteGraph) -> usize {
    let r = b.right();
    let full = 1usize << r;
    let mut reach = vec![false; full];
    reach[0] = true;
    let mut best = 0;
    for a in 0..b.left() {
        let mut next = reach.clone();
        for mask in 0..full {
            if !reach[mask] {
                continue;
            }
            for &y in b.neighbors_of_left(a) {
                if mask & (1 << y) == 0 {
                    next[mask | (1 << y)] = true;
                }
            }
        }
        reach = next;
    }
    for (mask, &ok) in reach.iter().enumerate() {
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Minimum vertex cover size by enumerating all subsets of both sides.
pub fn brute_vertex_cover(b: &BipartiteGraph) -> usize {
    let (l, r) = (b.left(), b.right());
    let mut best = l + r;
    for lm in 0u32..(1 << l) {
        for rm in 0u32..(1 << r) {
            let covers = b
                .edges()
                .all(|(a, y)| lm & (1 << a) != 0 || rm & (1 << y) != 0);
            if covers {
                best = best.min((lm.count_ones() + rm.count_ones()) as usize);
            }
        }
    }
    best
}

fn connected_without(g: &Graph, removed: u32) -> bool {
    let n = g.n();
    let Some(start) = (0..n).find(|&v| removed & (1 << v) == 0) else {
        return true;
    };
    let mut seen = removed | (1 << start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if seen & (1 << w) == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen.count_ones() as usize == n
}

/// Vertex connectivity by enumerating every vertex subset as a candidate cut.
/// Complete graphs get `n - 1`.
pub fn brute_connectivity(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 16);
    let mut best = n.saturating_sub(1);
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < best && n - size >= 2 && !connected_without(g, mask) {
            best = size;
        }
    }
    best
}

/// Whether the sets `lists[0], lists[1], ...` admit distinct representatives.
pub fn has_sdr(lists: &[Vec<Vertex>]) -> bool {
    fn go(lists: &[Vec<Vertex>], used: &mut HashSet<Vertex>) -> bool {
        let Some((first, rest)) = lists.split_first() else {
            return true;
        };
        for &u in first {
            if used.insert(u) {
                if go(rest, used) {
                    return true;
                }
                used.remove(&u);
            }
        }
        false
    }
    let mut sorted: Vec<Vec<Vertex>> = lists.to_vec();
    sorted.sort_by_key(|l| l.len());
    go(&sorted, &mut HashSet::new())
}

/// Vertex sets of the trees, root included.
pub fn tree_sets(tc: &TreeCollection) -> Vec<HashSet<Vertex>> {
    tc.trees
        .iter()
        .map(|t| {
            let mut s: HashSet<Vertex> = t.edges().iter().map(|&(c, _)| c).collect();
            s.insert(tc.root);
            s
        })
        .collect()
}

/// The smallest vertex at which the collection is not nice, straight from
/// the definition, or `None` if it is nice.
pub fn brute_first_non_nice(g: &Graph, tc: &TreeCollection) -> Option<Vertex> {
    let sets = tree_sets(tc);
    let used: HashSet<Vertex> = sets.iter().flatten().copied().collect();
    for v in 0..g.n() {
        let mut lists = Vec::new();
        for s in &sets {
            let touches = s.contains(&v) || g.neighbors(v).iter().any(|w| s.contains(w));
            if touches {
                continue;
            }
            let cands: Vec<Vertex> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|u| !used.contains(u))
                .filter(|&u| g.neighbors(u).iter().any(|w| s.contains(w)))
                .collect();
            lists.push(cands);
        }
        if !has_sdr(&lists) {
            return Some(v);
        }
    }
    None
}

/// Root-to-`v` path in a parent array, or `None` if the walk fails to reach
/// the root within `n` steps or uses a missing parent.
pub fn walk(parents: &[Option<Vertex>], root: Vertex, v: Vertex) -> Option<Vec<Vertex>> {
    let mut path = vec![v];
    let mut x = v;
    while x != root {
        x = (*parents.get(x)?)?;
        path.push(x);
        if path.len() > parents.len() {
            return None;
        }
    }
    path.reverse();
    Some(path)
}

/// Independence checked by materializing every path as a set and testing
/// all pairs.
pub fn brute_independent(g: &Graph, fam: &SpanningTreeFamily) -> bool {
    let n = g.n();
    let r = fam.root;
    if r >= n {
        return false;
    }
    for p in &fam.parents {
        if p.len() != n || p[r].is_some() {
            return false;
        }
        for (v, &parent) in p.iter().enumerate() {
            if v == r {
                continue;
            }
            match parent {
                Some(u) if u < n && g.has_edge(u, v) => {}
                _ => return false,
            }
        }
    }
    for v in 0..n {
        if v == r {
            continue;
        }
        let mut interiors = Vec::new();
        for p in &fam.parents {
            let Some(path) = walk(p, r, v) else {
                return false;
            };
            interiors.push(path[1..path.len() - 1].iter().copied().collect::<HashSet<_>>());
        }
        for i in 0..interiors.len() {
            for j in i + 1..interiors.len() {
                if !interiors[i].is_disjoint(&interiors[j]) {
                    return false;
                }
            }
        }
    }
    true
}

/// A random collection: `k` random root neighbors as branches, each grown by
/// a few random attachments of still-free vertices.
pub fn random_collection(g: &Graph, root: Vertex, k: usize, growth: usize, rng: &mut SeededRng) -> TreeCollection {
    let mut nb = g.neighbors(root).to_vec();
    nb.shuffle(rng);
    nb.truncate(k);
    let mut used = vec![false; g.n()];
    used[root] = true;
    nb.iter().for_each(|&v| used[v] = true);
    let mut trees: Vec<Vec<(Vertex, Vertex)>> = nb.iter().map(|&v| vec![(v, root)]).collect();
    for _ in 0..growth {
        if trees.is_empty() {
            break;
        }
        let i = rng.random_range(0..trees.len());
        let (anchor, _) = trees[i][rng.random_range(0..trees[i].len())];
        let free: Vec<Vertex> = g.neighbors(anchor).iter().copied().filter(|&w| !used[w]).collect();
        if let Some(&w) = free.get(rng.random_range(0..free.len().max(1))) {
            used[w] = true;
            trees[i].push((w, anchor));
        }
    }
    TreeCollection::new(root, trees.into_iter().map(RootedTree::from_edges).collect())
}

/// `k` random spanning trees of the component of `root`, grown by randomized
/// search; unrelated to each other, so usually not independent.
pub fn random_family(g: &Graph, root: Vertex, k: usize, rng: &mut SeededRng) -> SpanningTreeFamily {
    let n = g.n();
    let mut parents = Vec::with_capacity(k);
    for _ in 0..k {
        let mut p = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut frontier = vec![root];
        while !frontier.is_empty() {
            let at = rng.random_range(0..frontier.len());
            let x = frontier.swap_remove(at);
            let mut nb = g.neighbors(x).to_vec();
            nb.shuffle(rng);
            for w in nb {
                if !seen[w] {
                    seen[w] = true;
                    p[w] = Some(x);
                    frontier.push(w);
                }
            }
        }
        parents.push(p);
    }
    SpanningTreeFamily { root, parents }
}
