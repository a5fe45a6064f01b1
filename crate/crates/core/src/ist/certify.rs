use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{BipartiteGraph, Graph, Vertex};
use crate::matching::{saturating_or_violator, Side};

use super::collection::{Membership, TreeCollection};
use super::IstError;

/// Indices `i` such that `v` is neither in `S_i` nor adjacent to it.
pub fn index_set(g: &Graph, tc: &TreeCollection, v: Vertex) -> Vec<usize> {
    let membership = Membership::new(g, tc);
    let mut touched = vec![false; tc.len()];
    mark_touched(g, &membership, tc.root, v, &mut touched);
    (0..tc.len()).filter(|&i| !touched[i]).collect()
}

/// Marks the trees that contain `v` or a neighbor of `v`. Returns `false` if
/// `v` is the root or adjacent to it, in which case every tree is touched.
fn mark_touched(
    g: &Graph,
    membership: &Membership,
    root: Vertex,
    v: Vertex,
    touched: &mut [bool],
) -> bool {
    if v == root || g.has_edge(v, root) {
        touched.iter_mut().for_each(|t| *t = true);
        return false;
    }
    if let Some(i) = membership.tree_of(v) {
        touched[i] = true;
    }
    for &w in g.neighbors(v) {
        if let Some(i) = membership.tree_of(w) {
            touched[i] = true;
        }
    }
    true
}

/// For every vertex `v` and every `i` in its index set, a connector `u_i`
/// outside all trees with `v - u_i - S_i` a two-edge path. Connectors are
/// distinct for a fixed `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NicenessWitness {
    connectors: Vec<Vec<(usize, Vertex)>>,
}

impl NicenessWitness {
    /// `connectors[v]` lists `(tree index, connector)` pairs sorted by index.
    pub fn from_connectors(mut connectors: Vec<Vec<(usize, Vertex)>>) -> Self {
        connectors.iter_mut().for_each(|c| c.sort_unstable());
        Self { connectors }
    }

    pub fn vertex_count(&self) -> usize {
        self.connectors.len()
    }

    pub fn entries(&self, v: Vertex) -> &[(usize, Vertex)] {
        &self.connectors[v]
    }

    pub fn connector(&self, v: Vertex, i: usize) -> Option<Vertex> {
        let e = &self.connectors[v];
        e.binary_search_by_key(&i, |&(j, _)| j).ok().map(|p| e[p].1)
    }

    /// Total number of `(v, i)` assignments.
    pub fn total(&self) -> usize {
        self.connectors.iter().map(Vec::len).sum()
    }

    /// Re-checks the witness against the definition without the matching
    /// machinery: index sets recomputed per vertex, connectors distinct, free,
    /// adjacent to `v` and to the right tree.
    pub fn validate(&self, g: &Graph, tc: &TreeCollection) -> Result<(), String> {
        if self.connectors.len() != g.n() {
            return Err(format!(
                "witness covers {} vertices, graph has {}",
                self.connectors.len(),
                g.n()
            ));
        }
        let membership = Membership::new(g, tc);
        let tree_vertices: Vec<Vec<Vertex>> = tc
            .trees
            .iter()
            .map(|t| std::iter::once(tc.root).chain(t.non_root_vertices()).collect())
            .collect();
        for v in 0..g.n() {
            let expected = index_set_with(g, tc, &membership, v);
            let entries = &self.connectors[v];
            let got: Vec<usize> = entries.iter().map(|&(i, _)| i).collect();
            if got != expected {
                return Err(format!("vertex {v}: witness indices {got:?} != I(v) {expected:?}"));
            }
            let mut used: Vec<Vertex> = entries.iter().map(|&(_, u)| u).collect();
            used.sort_unstable();
            if used.windows(2).any(|w| w[0] == w[1]) {
                return Err(format!("vertex {v}: connectors not distinct"));
            }
            for &(i, u) in entries {
                if !membership.is_free(u) {
                    return Err(format!("vertex {v}: connector {u} lies in a tree"));
                }
                if !g.has_edge(v, u) {
                    return Err(format!("vertex {v}: connector {u} not adjacent"));
                }
                if !tree_vertices[i].iter().any(|&w| g.has_edge(u, w)) {
                    return Err(format!("vertex {v}: connector {u} misses tree {i}"));
                }
            }
        }
        Ok(())
    }
}

fn index_set_with(g: &Graph, tc: &TreeCollection, membership: &Membership, v: Vertex) -> Vec<usize> {
    let mut touched = vec![false; tc.len()];
    mark_touched(g, membership, tc.root, v, &mut touched);
    (0..tc.len()).filter(|&i| !touched[i]).collect()
}

/// The first vertex whose auxiliary matching fails, with a Hall violator:
/// tree indices whose candidate connectors are too few.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NicenessFailure {
    pub vertex: Vertex,
    pub indices: Vec<usize>,
    pub connectors: Vec<Vertex>,
}

impl NicenessFailure {
    /// Recomputes, directly from the graph, the free neighbors of `vertex`
    /// adjacent to any of the failing trees and checks there are too few.
    pub fn validate(&self, g: &Graph, tc: &TreeCollection) -> bool {
        let v = self.vertex;
        if v >= g.n() {
            return false;
        }
        let index = index_set(g, tc, v);
        if self.indices.iter().any(|i| index.binary_search(i).is_err()) {
            return false;
        }
        let membership = Membership::new(g, tc);
        let mut nb: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| membership.is_free(u))
            .filter(|&u| {
                self.indices.iter().any(|&i| {
                    g.has_edge(u, tc.root)
                        || tc.trees[i].non_root_vertices().any(|w| g.has_edge(u, w))
                })
            })
            .collect();
        nb.sort_unstable();
        let mut claimed = self.connectors.clone();
        claimed.sort_unstable();
        nb == claimed && nb.len() < self.indices.len()
    }
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Invalid(#[from] IstError),
    #[error("collection is not nice at vertex {}: {} trees share {} connectors", .0.vertex, .0.indices.len(), .0.connectors.len())]
    NotNice(NicenessFailure),
}

struct Scratch {
    touched: Vec<bool>,
    position: Vec<usize>,
}

const NIL: usize = usize::MAX;
const CHUNK: usize = 1024;

/// Certifies that `tc` is nice by solving, for every vertex `v`, a bipartite
/// matching between the index set `I(v)` and the free neighbors of `v`, with
/// `(i, u)` an edge when `u` is adjacent to `S_i`.
///
/// Vertices are processed independently (in parallel); the reported failure
/// is the one with the smallest vertex id.
pub fn certify_nice(g: &Graph, tc: &TreeCollection) -> Result<NicenessWitness, CertifyError> {
    tc.validate(g)?;
    let membership = Membership::new(g, tc);
    let mut root_adjacent = vec![false; g.n()];
    for &w in g.neighbors(tc.root) {
        root_adjacent[w] = true;
    }
    let k = tc.len();
    let mut connectors = Vec::with_capacity(g.n());
    // Chunks keep the parallelism while stopping soon after the first failure.
    for start in (0..g.n()).step_by(CHUNK) {
        let end = (start + CHUNK).min(g.n());
        let results: Vec<Result<Vec<(usize, Vertex)>, NicenessFailure>> = (start..end)
            .into_par_iter()
            .map_init(
                || Scratch {
                    touched: vec![false; k],
                    position: vec![NIL; k],
                },
                |scratch, v| certify_vertex(g, tc, &membership, &root_adjacent, v, scratch),
            )
            .collect();
        for r in results {
            match r {
                Ok(c) => connectors.push(c),
                Err(f) => return Err(CertifyError::NotNice(f)),
            }
        }
    }
    Ok(NicenessWitness { connectors })
}

fn certify_vertex(
    g: &Graph,
    tc: &TreeCollection,
    membership: &Membership,
    root_adjacent: &[bool],
    v: Vertex,
    scratch: &mut Scratch,
) -> Result<Vec<(usize, Vertex)>, NicenessFailure> {
    if v == tc.root || root_adjacent[v] {
        return Ok(Vec::new());
    }
    let touched = &mut scratch.touched;
    touched.iter_mut().for_each(|t| *t = false);
    mark_touched(g, membership, tc.root, v, touched);
    let indices: Vec<usize> = (0..touched.len()).filter(|&i| !touched[i]).collect();
    if indices.is_empty() {
        return Ok(Vec::new());
    }
    for (p, &i) in indices.iter().enumerate() {
        scratch.position[i] = p;
    }
    let candidates: Vec<Vertex> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| membership.is_free(u))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); indices.len()];
    for (c, &u) in candidates.iter().enumerate() {
        if root_adjacent[u] {
            // u - r is an edge and r lies in every tree.
            adj.iter_mut().for_each(|l| l.push(c));
            continue;
        }
        for &x in g.neighbors(u) {
            if let Some(i) = membership.tree_of(x) {
                if !touched[i] {
                    adj[scratch.position[i]].push(c);
                }
            }
        }
    }
    let h = BipartiteGraph::from_adjacency(candidates.len(), adj);
    match saturating_or_violator(&h, Side::Left) {
        Ok(m) => Ok(m
            .pairs()
            .iter()
            .map(|&(p, c)| (indices[p], candidates[c]))
            .collect()),
        Err(violator) => Err(NicenessFailure {
            vertex: v,
            indices: violator.set.iter().map(|&p| indices[p]).collect(),
            connectors: violator.neighborhood.iter().map(|&c| candidates[c]).collect(),
        }),
    }
}
