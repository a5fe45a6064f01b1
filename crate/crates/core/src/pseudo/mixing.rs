use rand::seq::index::sample;
use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::rng::SeededRng;

/// Number of ordered pairs `(a, b)` with `a` in `a_set`, `b` in `b_set` and
/// `ab` an edge. Edges inside `A ∩ B` count twice.
pub fn edges_between(g: &Graph, a_set: &[Vertex], b_set: &[Vertex]) -> usize {
    let mut in_b = vec![false; g.n()];
    b_set.iter().for_each(|&v| in_b[v] = true);
    a_set
        .iter()
        .map(|&a| g.neighbors(a).iter().filter(|&&w| in_b[w]).count())
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `|e(A,B) - |A||B|d/n| / (lambda sqrt(|A||B|))` seen.
    pub max_ratio: f64,
    /// Sizes of the first violating pair.
    pub first_violation: Option<(usize, usize)>,
}

/// `|e(A,B) - |A||B|d/n| <= lambda sqrt(|A||B|)` up to rounding.
pub fn mixing_holds(g: &Graph, lambda: f64, a_set: &[Vertex], b_set: &[Vertex]) -> (bool, f64) {
    let e = edges_between(g, a_set, b_set) as f64;
    let (a, b) = (a_set.len() as f64, b_set.len() as f64);
    let expected = a * b * g.average_degree() / g.n() as f64;
    let bound = lambda * (a * b).sqrt();
    let dev = (e - expected).abs();
    let ratio = if bound > 0.0 { dev / bound } else if dev > 0.0 { f64::INFINITY } else { 0.0 };
    (dev <= bound + 1e-9 * (1.0 + expected), ratio)
}

/// Samples `trials` pairs of random vertex sets of uniformly random sizes
/// (independently, so they may overlap) and checks the mixing inequality.
pub fn mixing_audit(g: &Graph, lambda: f64, trials: usize, rng: &mut SeededRng) -> AuditReport {
    let n = g.n();
    let mut report = AuditReport {
        trials,
        violations: 0,
        max_ratio: 0.0,
        first_violation: None,
    };
    if n == 0 {
        return report;
    }
    for _ in 0..trials {
        let a = random_subset(n, rng);
        let b = random_subset(n, rng);
        let (ok, ratio) = mixing_holds(g, lambda, &a, &b);
        report.max_ratio = report.max_ratio.max(ratio);
        if !ok {
            report.violations += 1;
            report.first_violation.get_or_insert((a.len(), b.len()));
        }
    }
    report
}

fn random_subset(n: usize, rng: &mut SeededRng) -> Vec<Vertex> {
    let size = rng.random_range(1..=n);
    sample(rng, n, size).into_vec()
}

/// Samples disjoint `X`, `Y` with both sizes just above `lambda n / d` and
/// counts the pairs with no edge between them.
pub fn crossing_spot_check(g: &Graph, lambda: f64, trials: usize, rng: &mut SeededRng) -> usize {
    let n = g.n();
    let d = g.average_degree();
    let size = (lambda * n as f64 / d).floor() as usize + 1;
    if d == 0.0 || 2 * size > n {
        return 0;
    }
    (0..trials)
        .filter(|_| {
            let both = sample(rng, n, 2 * size).into_vec();
            edges_between(g, &both[..size], &both[size..]) == 0
        })
        .count()
}
