//! Random graph models: binomial `G(n, p)`, binomial bipartite `G(a, b, p)`
//! and uniform-ish random `d`-regular graphs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::GraphError;
use crate::graph::{BipartiteGraph, Graph, Vertex};
use crate::rng::SeededRng;

/// Restarts allowed in [`gen_random_regular`] before giving up.
pub const REGULAR_MAX_ATTEMPTS: usize = 200;

fn check_probability(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::Parameter(format!("probability {p} outside [0, 1]")))
    }
}

/// Visits the indices `0..total` that survive independent `p`-coin flips, by
/// sampling the geometric gaps between successes. Expected cost is
/// `O(1 + p * total)`.
fn geometric_skips(total: u64, p: f64, rng: &mut SeededRng, mut visit: impl FnMut(u64)) {
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(visit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut idx: i128 = -1;
    loop {
        let r: f64 = rng.random();
        let gap = ((1.0 - r).ln() / log_q).floor();
        // A gap this large always overshoots; avoid float->int overflow.
        if gap >= total as f64 {
            return;
        }
        idx += 1 + gap as i128;
        if idx >= total as i128 {
            return;
        }
        visit(idx as u64);
    }
}

/// Binomial random graph `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, rng: &mut SeededRng) -> Result<Graph, GraphError> {
    check_probability(p)?;
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut pairs: Vec<(Vertex, Vertex)> =
        Vec::with_capacity(((total as f64) * p * 1.05) as usize + 16);
    // Pair index t enumerates (w, v), w < v, ordered by v then w. Successive
    // hits only move forward, so decoding walks v monotonically.
    let mut v: usize = 1;
    let mut base: u64 = 0;
    geometric_skips(total, p, rng, |t| {
        while t >= base + v as u64 {
            base += v as u64;
            v += 1;
        }
        pairs.push(((t - base) as usize, v));
    });
    Ok(Graph::from_ordered_pairs(n, &pairs))
}

/// Binomial random bipartite graph with parts of size `a` and `b`.
pub fn gen_bipartite_gnp(
    a: usize,
    b: usize,
    p: f64,
    rng: &mut SeededRng,
) -> Result<BipartiteGraph, GraphError> {
    check_probability(p)?;
    let mut adj = vec![Vec::new(); a];
    if b > 0 {
        geometric_skips((a as u64) * (b as u64), p, rng, |t| {
            adj[(t / b as u64) as usize].push((t % b as u64) as usize);
        });
    }
    Ok(BipartiteGraph::from_adjacency(b, adj))
}

/// Random simple `d`-regular graph from the pairing model.
///
/// Stubs are paired up by a random shuffle; pairs that would form a loop or a
/// repeated edge are rejected and their stubs returned to the pool, which is
/// reshuffled until it is empty. If the leftover stubs admit no valid pair the
/// attempt restarts from scratch, at most [`REGULAR_MAX_ATTEMPTS`] times.
pub fn gen_random_regular(n: usize, d: usize, rng: &mut SeededRng) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::Parameter(format!(
            "n * d must be even (n = {n}, d = {d})"
        )));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(GraphError::Parameter(format!(
            "degree {d} must be below n = {n}"
        )));
    }
    for _ in 0..REGULAR_MAX_ATTEMPTS {
        if let Some(adj) = try_pairing(n, d, rng) {
            let adj = adj
                .into_iter()
                .map(|mut l| {
                    l.sort_unstable();
                    l
                })
                .collect();
            return Ok(Graph::from_sorted_adjacency(adj));
        }
    }
    Err(GraphError::Generation(format!(
        "no simple {d}-regular graph on {n} vertices after {REGULAR_MAX_ATTEMPTS} attempts"
    )))
}

fn try_pairing(n: usize, d: usize, rng: &mut SeededRng) -> Option<Vec<Vec<Vertex>>> {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: BTreeMap<Vertex, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            } else {
                *leftover.entry(u).or_default() += 1;
                *leftover.entry(v).or_default() += 1;
            }
        }
        if !pairable(&adj, &leftover) {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c))
            .collect();
    }
    Some(adj)
}

/// Whether some two distinct leftover vertices are still non-adjacent.
fn pairable(adj: &[Vec<Vertex>], leftover: &BTreeMap<Vertex, usize>) -> bool {
    if leftover.is_empty() {
        return true;
    }
    let keys: Vec<Vertex> = leftover.keys().copied().collect();
    keys.iter().enumerate().any(|(i, &u)| {
        keys[i + 1..].iter().any(|&v| !adj[u].contains(&v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_trivial_cases() {
        let mut rng = SeededRng::new(1);
        assert_eq!(gen_gnp(1, 0.7, &mut rng).unwrap().m(), 0);
        assert_eq!(gen_gnp(4, 1.0, &mut rng).unwrap(), Graph::complete(4));
        assert_eq!(gen_gnp(10, 0.0, &mut rng).unwrap().m(), 0);
        assert!(matches!(
            gen_gnp(5, 1.5, &mut rng),
            Err(GraphError::Parameter(_))
        ));
        assert!(gen_gnp(5, -0.1, &mut rng).is_err());
    }

    #[test]
    fn gnp_is_simple_and_deterministic() {
        let a = gen_gnp(300, 0.05, &mut SeededRng::new(9)).unwrap();
        let b = gen_gnp(300, 0.05, &mut SeededRng::new(9)).unwrap();
        assert_eq!(a, b);
        a.check_invariants().unwrap();
        assert_ne!(a, gen_gnp(300, 0.05, &mut SeededRng::new(10)).unwrap());
    }

    #[test]
    fn bipartite_trivial_cases() {
        let mut rng = SeededRng::new(3);
        assert_eq!(gen_bipartite_gnp(3, 0, 0.9, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(gen_bipartite_gnp(2, 2, 1.0, &mut rng).unwrap().edge_count(), 4);
    }

    #[test]
    fn regular_small_cases() {
        let mut rng = SeededRng::new(5);
        assert_eq!(gen_random_regular(4, 3, &mut rng).unwrap(), Graph::complete(4));
        let g = gen_random_regular(6, 2, &mut rng).unwrap();
        assert!((0..6).all(|v| g.degree(v) == 2));
        g.check_invariants().unwrap();
    }

    #[test]
    fn regular_parameter_errors() {
        let mut rng = SeededRng::new(5);
        assert!(matches!(
            gen_random_regular(5, 3, &mut rng),
            Err(GraphError::Parameter(_))
        ));
        assert!(matches!(
            gen_random_regular(100, 101, &mut rng),
            Err(GraphError::Parameter(_))
        ));
    }

    #[test]
    fn regular_moderate_degree() {
        let g = gen_random_regular(500, 20, &mut SeededRng::new(11)).unwrap();
        assert_eq!(g.regular_degree(), Some(20));
        g.check_invariants().unwrap();
    }
}
