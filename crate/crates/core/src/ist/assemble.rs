use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};

use super::certify::NicenessWitness;
use super::collection::{Membership, TreeCollection};
use super::IstError;

/// `k` spanning trees of a common root, as parent arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTreeFamily {
    pub root: Vertex,
    pub parents: Vec<Vec<Option<Vertex>>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    root: usize,
    parents: Vec<Vec<i64>>,
}

impl SpanningTreeFamily {
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn parent(&self, tree: usize, v: Vertex) -> Option<Vertex> {
        self.parents[tree][v]
    }

    /// JSON object `{"root": r, "parents": [[...], ...]}` with `-1` marking
    /// the root.
    pub fn to_json(&self) -> String {
        let wire = FamilyJson {
            root: self.root,
            parents: self
                .parents
                .iter()
                .map(|p| p.iter().map(|x| x.map_or(-1, |v| v as i64)).collect())
                .collect(),
        };
        serde_json::to_string(&wire).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IstError> {
        let wire: FamilyJson = serde_json::from_str(text)?;
        let parents = wire
            .parents
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.into_iter()
                    .map(|x| match x {
                        -1 => Ok(None),
                        x if x >= 0 => Ok(Some(x as usize)),
                        x => Err(IstError::Format(format!("tree {i}: bad parent {x}"))),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            root: wire.root,
            parents,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), IstError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, IstError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Extends a nice collection to spanning trees.
///
/// Phase one attaches every vertex of `N(S_i)` as a leaf to its smallest-id
/// neighbor in `S_i`. Phase two attaches every remaining `v` to its connector
/// `u_i`, which phase one already placed in `T_i`.
pub fn assemble(
    g: &Graph,
    tc: &TreeCollection,
    witness: &NicenessWitness,
) -> Result<SpanningTreeFamily, IstError> {
    tc.validate(g)?;
    let n = g.n();
    let k = tc.len();
    let root = tc.root;
    if witness.vertex_count() != n {
        return Err(IstError::Integrity(format!(
            "witness covers {} vertices, graph has {n}",
            witness.vertex_count()
        )));
    }
    let membership = Membership::new(g, tc);
    let mut parents: Vec<Vec<Option<Vertex>>> = vec![vec![None; n]; k];
    for (i, tree) in tc.trees.iter().enumerate() {
        for &(child, parent) in tree.edges() {
            parents[i][child] = Some(parent);
        }
    }
    // Phase one: neighbors are scanned in ascending order, so the first hit
    // per tree is the smallest-id neighbor in that tree.
    for x in 0..n {
        if x == root {
            continue;
        }
        for &w in g.neighbors(x) {
            if w == root {
                for p in parents.iter_mut() {
                    if p[x].is_none() {
                        p[x] = Some(root);
                    }
                }
            } else if let Some(i) = membership.tree_of(w) {
                if parents[i][x].is_none() {
                    parents[i][x] = Some(w);
                }
            }
        }
    }
    // Phase two: validate every assignment against the phase-one state
    // before writing any of them.
    let mut late = Vec::with_capacity(witness.total());
    for v in 0..n {
        for &(i, u) in witness.entries(v) {
            if i >= k || u >= n {
                return Err(IstError::Integrity(format!("vertex {v}: entry ({i}, {u}) out of range")));
            }
            if parents[i][v].is_some() || v == root {
                return Err(IstError::Integrity(format!(
                    "vertex {v} already reaches tree {i} without a connector"
                )));
            }
            if !membership.is_free(u) || parents[i][u].is_none() {
                return Err(IstError::Integrity(format!(
                    "vertex {v}: connector {u} is not a free neighbor of tree {i}"
                )));
            }
            if !g.has_edge(v, u) {
                return Err(IstError::Integrity(format!("({v}, {u}) is not an edge")));
            }
            late.push((i, v, u));
        }
    }
    for (i, v, u) in late {
        parents[i][v] = Some(u);
    }
    for (i, p) in parents.iter().enumerate() {
        if let Some(v) = (0..n).find(|&v| v != root && p[v].is_none()) {
            return Err(IstError::Integrity(format!("vertex {v} not covered by tree {i}")));
        }
    }
    Ok(SpanningTreeFamily { root, parents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ist::certify_nice;

    #[test]
    fn k4_stars() {
        let g = Graph::complete(4);
        let tc = TreeCollection::stars(0, &[1, 2, 3]);
        let w = certify_nice(&g, &tc).unwrap();
        let fam = assemble(&g, &tc, &w).unwrap();
        assert_eq!(fam.len(), 3);
        for i in 0..3 {
            assert_eq!(fam.parent(i, i + 1), Some(0));
        }
        // Vertex 2 hangs from the root in tree 0 (smallest neighbor of 2 in
        // {0, 1} is 0).
        assert_eq!(fam.parent(0, 2), Some(0));
    }

    #[test]
    fn singleton_graph() {
        let g = Graph::empty(1);
        let tc = TreeCollection::new(0, vec![]);
        let w = certify_nice(&g, &tc).unwrap();
        let fam = assemble(&g, &tc, &w).unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn json_roundtrip_and_sentinel() {
        let g = Graph::complete(3);
        let tc = TreeCollection::stars(0, &[1, 2]);
        let fam = assemble(&g, &tc, &certify_nice(&g, &tc).unwrap()).unwrap();
        let text = fam.to_json();
        assert_eq!(text, r#"{"root":0,"parents":[[-1,0,0],[-1,0,0]]}"#);
        assert_eq!(SpanningTreeFamily::from_json(&text).unwrap(), fam);
        assert!(SpanningTreeFamily::from_json(r#"{"root":0,"parents":[[-2]]}"#).is_err());
    }

    #[test]
    fn inconsistent_witness_is_rejected() {
        let g = Graph::cycle(6);
        let tc = TreeCollection::stars(0, &[1, 5]);
        let mut c = vec![Vec::new(); 6];
        c[3] = vec![(0, 4), (1, 2)];
        let w = NicenessWitness::from_connectors(c);
        assert!(matches!(assemble(&g, &tc, &w), Err(IstError::Integrity(_))));
    }
}
