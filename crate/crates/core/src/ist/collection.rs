use crate::graph::{Graph, Vertex};

use super::IstError;

/// A tree hanging from the collection root, stored as `(child, parent)`
/// edges in an order where every parent appears before its children.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootedTree {
    edges: Vec<(Vertex, Vertex)>,
}

impl RootedTree {
    /// The edge `(child, parent)` list must list parents before children.
    pub fn from_edges(edges: Vec<(Vertex, Vertex)>) -> Self {
        Self { edges }
    }

    /// The path `root - path[0] - path[1] - ...`.
    pub fn from_path(root: Vertex, path: &[Vertex]) -> Self {
        let mut edges = Vec::with_capacity(path.len());
        let mut prev = root;
        for &v in path {
            edges.push((v, prev));
            prev = v;
        }
        Self { edges }
    }

    /// A path attached to the root through `entry`, which may sit anywhere on
    /// the path.
    pub fn from_path_with_entry(root: Vertex, path: &[Vertex], entry: Vertex) -> Self {
        let at = path
            .iter()
            .position(|&v| v == entry)
            .expect("entry must lie on the path");
        let mut edges = vec![(entry, root)];
        edges.extend((at + 1..path.len()).map(|j| (path[j], path[j - 1])));
        edges.extend((0..at).rev().map(|j| (path[j], path[j + 1])));
        Self { edges }
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Vertices other than the root, in insertion order.
    pub fn non_root_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.edges.iter().map(|&(c, _)| c)
    }

    /// Number of vertices including the root.
    pub fn size(&self) -> usize {
        self.edges.len() + 1
    }

    /// The first vertex attached directly to the root.
    pub fn entry(&self, root: Vertex) -> Option<Vertex> {
        self.edges.iter().find(|&&(_, p)| p == root).map(|&(c, _)| c)
    }
}

/// Trees `S_1, ..., S_k` sharing the root `r` and otherwise vertex-disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCollection {
    pub root: Vertex,
    pub trees: Vec<RootedTree>,
}

impl TreeCollection {
    pub fn new(root: Vertex, trees: Vec<RootedTree>) -> Self {
        Self { root, trees }
    }

    /// Depth-one trees `{r, v_i}`.
    pub fn stars(root: Vertex, branches: &[Vertex]) -> Self {
        Self {
            root,
            trees: branches
                .iter()
                .map(|&v| RootedTree::from_edges(vec![(v, root)]))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Checks that every tree is a tree of `g` containing the root and that
    /// distinct trees meet only at the root.
    pub fn validate(&self, g: &Graph) -> Result<(), IstError> {
        let err = |m: String| Err(IstError::Invariant(m));
        if self.root >= g.n() {
            return err(format!("root {} out of range", self.root));
        }
        let mut owner = vec![usize::MAX; g.n()];
        for (i, tree) in self.trees.iter().enumerate() {
            for &(child, parent) in tree.edges() {
                if child >= g.n() || parent >= g.n() {
                    return err(format!("tree {i}: vertex out of range"));
                }
                if parent != self.root && owner[parent] != i {
                    return err(format!(
                        "tree {i}: parent {parent} of {child} not yet in the tree"
                    ));
                }
                if child == self.root {
                    return err(format!("tree {i}: root listed as a child"));
                }
                if owner[child] != usize::MAX {
                    return if owner[child] == i {
                        err(format!("tree {i}: vertex {child} appears twice"))
                    } else {
                        err(format!("trees {} and {i} share vertex {child}", owner[child]))
                    };
                }
                if !g.has_edge(child, parent) {
                    return err(format!("tree {i}: ({parent}, {child}) is not an edge"));
                }
                owner[child] = i;
            }
        }
        Ok(())
    }
}

/// Which tree, if any, each vertex belongs to.
#[derive(Clone, Debug)]
pub struct Membership {
    owner: Vec<usize>,
    root: Vertex,
}

impl Membership {
    const FREE: usize = usize::MAX;

    pub fn new(g: &Graph, tc: &TreeCollection) -> Self {
        let mut owner = vec![Self::FREE; g.n()];
        for (i, tree) in tc.trees.iter().enumerate() {
            for v in tree.non_root_vertices() {
                owner[v] = i;
            }
        }
        Self {
            owner,
            root: tc.root,
        }
    }

    /// Tree index of a non-root tree vertex.
    #[inline]
    pub fn tree_of(&self, v: Vertex) -> Option<usize> {
        let o = self.owner[v];
        (o != Self::FREE).then_some(o)
    }

    /// Whether `v` lies outside every tree (the root lies in all of them).
    #[inline]
    pub fn is_free(&self, v: Vertex) -> bool {
        v != self.root && self.owner[v] == Self::FREE
    }
}
