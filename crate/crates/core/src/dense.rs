//! Depth-one trees on the root's first `k` neighbors.

use crate::build::{certify, check_root, BuildFailure, BuildOutcome};
use crate::graph::{Graph, Vertex};
use crate::ist::TreeCollection;

/// Takes `K` = the first `k` neighbors of `r` (ascending ids), sets
/// `S_i = {r, K[i]}` and certifies niceness.
///
/// A vertex `v` with `d(v) >= k` always has `|K \ N(v)| <= |N(v) \ K|`; the
/// vertices where this fails (`d(v) < k`) are reported in the diagnostics.
pub fn build_dense(g: &Graph, r: Vertex, k: usize) -> Result<BuildOutcome, BuildFailure> {
    check_root(g, r, k)?;
    let branches = &g.neighbors(r)[..k];
    let mut in_k = vec![false; g.n()];
    branches.iter().for_each(|&v| in_k[v] = true);
    let mut short = Vec::new();
    for v in 0..g.n() {
        if v == r {
            continue;
        }
        let common = g.neighbors(v).iter().filter(|&&w| in_k[w]).count();
        let missing = k - common;
        let extra = g.degree(v) - common;
        if missing > extra {
            short.push(v);
        }
    }
    let mut diagnostics = Vec::new();
    if !short.is_empty() {
        diagnostics.push(format!(
            "{} vertices with |K \\ N(v)| > |N(v) \\ K| (first: {})",
            short.len(),
            short[0]
        ));
    }
    certify(g, TreeCollection::stars(r, branches), diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::FailStage;
    use crate::generators::gen_gnp;
    use crate::ist::verify_independent;
    use crate::rng::SeededRng;

    #[test]
    fn complete_graph() {
        let g = Graph::complete(8);
        let out = build_dense(&g, 0, 7).unwrap();
        assert!(out.diagnostics.is_empty());
        let fam = out.assemble(&g).unwrap();
        assert_eq!(fam.len(), 7);
        assert!(verify_independent(&g, &fam).passed());
    }

    #[test]
    fn k_above_root_degree() {
        let g = Graph::star(3);
        let e = build_dense(&g, 1, 2).unwrap_err();
        assert_eq!(e.stage(), FailStage::QSelection);
    }

    #[test]
    fn deficient_vertex_is_named() {
        // Root 0 with branches 1, 2; vertex 4 only sees 3, which is the sole
        // free neighbor for both trees.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let e = build_dense(&g, 0, 2).unwrap_err();
        assert_eq!(e.stage(), FailStage::Niceness);
        assert!(e.validate(&g));
        match e {
            BuildFailure::Niceness { failure, .. } => assert_eq!(failure.vertex, 4),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn deterministic() {
        let g = gen_gnp(120, 0.4, &mut SeededRng::new(3)).unwrap();
        let k = g.min_degree();
        let a = build_dense(&g, 5, k).unwrap();
        let b = build_dense(&g, 5, k).unwrap();
        assert_eq!(a.collection, b.collection);
        assert_eq!(a.witness, b.witness);
        assert!(verify_independent(&g, &a.assemble(&g).unwrap()).passed());
    }
}
