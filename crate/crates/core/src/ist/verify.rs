use std::fmt;

use crate::graph::{Graph, Vertex};

use super::assemble::SpanningTreeFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    RootHasParent { tree: usize },
    MissingParent { tree: usize, vertex: Vertex },
    NotAnEdge { tree: usize, child: Vertex, parent: Vertex },
    Cycle { tree: usize, vertex: Vertex },
    /// The `root`-`vertex` paths of trees `first` and `second` both pass
    /// through `shared`.
    SharedVertex { vertex: Vertex, first: usize, second: usize, shared: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(m) => write!(f, "malformed family: {m}"),
            Violation::RootHasParent { tree } => write!(f, "tree {tree}: root has a parent"),
            Violation::MissingParent { tree, vertex } => {
                write!(f, "tree {tree}: vertex {vertex} has no parent")
            }
            Violation::NotAnEdge { tree, child, parent } => {
                write!(f, "tree {tree}: ({parent}, {child}) is not an edge")
            }
            Violation::Cycle { tree, vertex } => {
                write!(f, "tree {tree}: vertex {vertex} does not reach the root")
            }
            Violation::SharedVertex { vertex, first, second, shared } => write!(
                f,
                "vertex {vertex}: paths in trees {first} and {second} share {shared}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub trees: usize,
    pub violation: Option<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every parent array is a spanning tree of `g` and that for
/// every vertex the root paths in different trees are internally disjoint.
///
/// Reports the first counterexample, scanning trees in order and vertices
/// ascending.
pub fn verify_independent(g: &Graph, fam: &SpanningTreeFamily) -> VerifyReport {
    let report = |violation| VerifyReport {
        trees: fam.len(),
        violation,
    };
    let n = g.n();
    let root = fam.root;
    if root >= n {
        return report(Some(Violation::Shape(format!("root {root} out of range"))));
    }
    for (i, p) in fam.parents.iter().enumerate() {
        if p.len() != n {
            return report(Some(Violation::Shape(format!(
                "tree {i} has {} entries, graph has {n} vertices",
                p.len()
            ))));
        }
        if let Some(v) = check_spanning_tree(g, root, p, i) {
            return report(Some(v));
        }
    }
    // Walk each tree's path from v's parent up to the root, stamping
    // internal vertices with (v, tree).
    let mut stamp = vec![usize::MAX; n];
    let mut owner = vec![0usize; n];
    for v in 0..n {
        if v == root {
            continue;
        }
        for (i, p) in fam.parents.iter().enumerate() {
            let mut x = p[v].expect("checked spanning");
            while x != root {
                if stamp[x] == v {
                    return report(Some(Violation::SharedVertex {
                        vertex: v,
                        first: owner[x],
                        second: i,
                        shared: x,
                    }));
                }
                stamp[x] = v;
                owner[x] = i;
                x = p[x].expect("checked spanning");
            }
        }
    }
    report(None)
}

fn check_spanning_tree(
    g: &Graph,
    root: Vertex,
    parent: &[Option<Vertex>],
    tree: usize,
) -> Option<Violation> {
    if parent[root].is_some() {
        return Some(Violation::RootHasParent { tree });
    }
    for (v, p) in parent.iter().enumerate() {
        if v == root {
            continue;
        }
        match *p {
            None => return Some(Violation::MissingParent { tree, vertex: v }),
            Some(u) if u >= g.n() || !g.has_edge(u, v) => {
                return Some(Violation::NotAnEdge { tree, child: v, parent: u })
            }
            _ => {}
        }
    }
    // 0 = unknown, 1 = on the current walk, 2 = reaches the root.
    let mut state = vec![0u8; g.n()];
    state[root] = 2;
    let mut walk = Vec::new();
    for v in 0..g.n() {
        let mut x = v;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            x = parent[x].expect("checked above");
        }
        if state[x] == 1 {
            return Some(Violation::Cycle { tree, vertex: v });
        }
        for y in walk.drain(..) {
            state[y] = 2;
        }
    }
    None
}

/// The path from the root to `v` in tree `tree`, root first.
pub fn tree_path(fam: &SpanningTreeFamily, tree: usize, v: Vertex) -> Vec<Vertex> {
    let mut path = vec![v];
    let mut x = v;
    while let Some(p) = fam.parents[tree][x] {
        path.push(p);
        x = p;
        assert!(path.len() <= fam.parents[tree].len(), "parent cycle");
    }
    path.reverse();
    path
}
