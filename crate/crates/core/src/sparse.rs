//! Sparse regime: branch set `Q` away from low-degree vertices, vertex-disjoint
//! paths grown by repeated matchings, and niceness certification.

use serde::{Deserialize, Serialize};

use crate::build::{certify, check_root, BuildFailure, BuildOutcome};
use crate::graph::{external_neighborhood, low_degree_set, low_degree_threshold, BipartiteGraph, Graph, Vertex};
use crate::ist::{IstError, RootedTree, TreeCollection};
use crate::matching::{saturating_or_violator, Side};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct SparseParams {
    /// Coefficient of the square-root term in the low-degree threshold.
    pub low_degree_factor: f64,
    /// `c` in `ceil(c log n / (n p^2))`.
    pub path_len_factor: f64,
    /// `D` in the cap `floor(n / (D k))`.
    pub path_len_cap_divisor: f64,
    /// Edge probability; estimated as `2m / (n (n - 1))` when absent.
    pub p_estimate: Option<f64>,
    /// Use `p (1 - p)` instead of `p` under the square root of the threshold.
    pub degree_complement: bool,
}

impl Default for SparseParams {
    fn default() -> Self {
        Self {
            low_degree_factor: 0.9,
            path_len_factor: 5.0,
            path_len_cap_divisor: 100.0,
            p_estimate: None,
            degree_complement: false,
        }
    }
}

impl SparseParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be positive, got {x}"))
            }
        };
        positive("lowDegreeFactor", self.low_degree_factor)?;
        positive("pathLenFactor", self.path_len_factor)?;
        positive("pathLenCapDivisor", self.path_len_cap_divisor)?;
        if let Some(p) = self.p_estimate {
            if !(p > 0.0 && p <= 1.0) {
                return Err(format!("pEstimate must lie in (0, 1], got {p}"));
            }
        }
        Ok(())
    }

    /// `min(ceil(c log n / (n p^2)), floor(n / (D k)))`, at least 1.
    pub fn path_length(&self, n: usize, p: f64, k: usize) -> usize {
        let nf = n as f64;
        let raw = (self.path_len_factor * nf.ln() / (nf * p * p)).ceil();
        let cap = (nf / (self.path_len_cap_divisor * k.max(1) as f64)).floor();
        let len = raw.min(cap);
        if len.is_finite() && len >= 1.0 {
            len as usize
        } else {
            1
        }
    }
}

/// Vertex-disjoint paths, `paths[i][0]` being the start `r_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSystem {
    pub paths: Vec<Vec<Vertex>>,
}

impl PathSystem {
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.paths.iter().flatten().copied()
    }

    /// Disjointness, adjacency along each path, `len + 1` vertices per path,
    /// starts equal to `starts` and no forbidden vertex used.
    pub fn validate(
        &self,
        g: &Graph,
        starts: &[Vertex],
        len: usize,
        forbidden: &[Vertex],
    ) -> Result<(), String> {
        if self.paths.len() != starts.len() {
            return Err(format!("{} paths for {} starts", self.paths.len(), starts.len()));
        }
        let mut seen = vec![false; g.n()];
        forbidden.iter().for_each(|&v| seen[v] = true);
        for (i, path) in self.paths.iter().enumerate() {
            if path.len() != len + 1 {
                return Err(format!("path {i} has {} vertices, expected {}", path.len(), len + 1));
            }
            if path[0] != starts[i] {
                return Err(format!("path {i} starts at {}, expected {}", path[0], starts[i]));
            }
            for &v in path {
                if v >= g.n() || seen[v] {
                    return Err(format!("path {i}: vertex {v} repeated, forbidden or out of range"));
                }
                seen[v] = true;
            }
            if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
                return Err(format!("path {i}: ({}, {}) is not an edge", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// A round whose endpoints could not all be extended. `frontier` are path
/// endpoints whose combined set of available neighbors, `neighborhood`, is
/// smaller than the frontier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthFailure {
    /// 1-based round index.
    pub round: usize,
    pub partial: Vec<Vec<Vertex>>,
    pub forbidden: Vec<Vertex>,
    pub frontier: Vec<Vertex>,
    pub neighborhood: Vec<Vertex>,
}

impl GrowthFailure {
    /// Recomputes the available vertices from `forbidden` and the partial
    /// paths, then the frontier's neighborhood among them.
    pub fn validate(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut blocked = vec![false; n];
        for &v in self.forbidden.iter().chain(self.partial.iter().flatten()) {
            if v >= n {
                return false;
            }
            blocked[v] = true;
        }
        let ends: Vec<Vertex> = self.partial.iter().filter_map(|p| p.last().copied()).collect();
        if self.frontier.is_empty() || self.frontier.iter().any(|v| !ends.contains(v)) {
            return false;
        }
        let mut nb: Vec<Vertex> = self
            .frontier
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| !blocked[w])
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb == self.neighborhood && nb.len() < self.frontier.len()
    }
}

/// Grows one path per vertex of `q` for `len` rounds. Round `j` matches every
/// current endpoint to a distinct unused, non-forbidden neighbor.
///
/// Panics if `q` repeats a vertex or meets `forbidden`.
pub fn grow_path_system(
    g: &Graph,
    q: &[Vertex],
    len: usize,
    forbidden: &[Vertex],
) -> Result<PathSystem, GrowthFailure> {
    let n = g.n();
    let mut blocked = vec![false; n];
    forbidden.iter().for_each(|&v| blocked[v] = true);
    for &v in q {
        assert!(!blocked[v], "start vertex {v} is forbidden or repeated");
        blocked[v] = true;
    }
    let mut paths: Vec<Vec<Vertex>> = q.iter().map(|&v| vec![v]).collect();
    let mut slot = vec![usize::MAX; n];
    for round in 1..=len {
        let mut candidates: Vec<Vertex> = Vec::new();
        let mut adj = Vec::with_capacity(paths.len());
        for path in &paths {
            let end = *path.last().expect("paths are nonempty");
            let mut row = Vec::new();
            for &w in g.neighbors(end) {
                if blocked[w] {
                    continue;
                }
                if slot[w] == usize::MAX {
                    slot[w] = candidates.len();
                    candidates.push(w);
                }
                row.push(slot[w]);
            }
            adj.push(row);
        }
        candidates.iter().for_each(|&w| slot[w] = usize::MAX);
        let h = BipartiteGraph::from_adjacency(candidates.len(), adj);
        match saturating_or_violator(&h, Side::Left) {
            Ok(m) => {
                for &(i, c) in m.pairs() {
                    let w = candidates[c];
                    blocked[w] = true;
                    paths[i].push(w);
                }
            }
            Err(v) => {
                let mut frontier: Vec<Vertex> =
                    v.set.iter().map(|&i| *paths[i].last().unwrap()).collect();
                frontier.sort_unstable();
                let mut neighborhood: Vec<Vertex> =
                    v.neighborhood.iter().map(|&c| candidates[c]).collect();
                neighborhood.sort_unstable();
                return Err(GrowthFailure {
                    round,
                    partial: paths,
                    forbidden: forbidden.to_vec(),
                    frontier,
                    neighborhood,
                });
            }
        }
    }
    Ok(PathSystem { paths })
}

/// Branch set, path length and the inputs the path system was grown from.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePlan {
    pub p_hat: f64,
    pub low_degree: Vec<Vertex>,
    pub branches: Vec<Vertex>,
    pub path_len: usize,
    pub forbidden: Vec<Vertex>,
    /// Branches taken from `S ∪ N(S)` because too few other neighbors exist.
    pub fallback: usize,
}

pub fn plan_sparse(g: &Graph, r: Vertex, k: usize, params: &SparseParams) -> SparsePlan {
    let n = g.n();
    let p_hat = params.p_estimate.unwrap_or_else(|| g.density());
    let threshold = low_degree_threshold(n, p_hat, params.low_degree_factor, params.degree_complement);
    let low_degree = low_degree_set(g, threshold);
    let mut excluded = vec![false; n];
    for v in low_degree.iter().copied().chain(external_neighborhood(g, &low_degree)) {
        excluded[v] = true;
    }
    let r_low = low_degree.binary_search(&r).is_ok();
    let mut branches: Vec<Vertex>;
    let mut fallback = 0;
    if r_low {
        branches = g.neighbors(r)[..k].to_vec();
    } else {
        branches = g.neighbors(r).iter().copied().filter(|&v| !excluded[v]).take(k).collect();
        if branches.len() < k {
            fallback = k - branches.len();
            branches.extend(g.neighbors(r).iter().copied().filter(|&v| excluded[v]).take(fallback));
            branches.sort_unstable();
        }
    }
    let mut forbid = excluded;
    forbid[r] = true;
    for &q in &branches {
        forbid[q] = false;
    }
    let forbidden = (0..n).filter(|&v| forbid[v]).collect();
    SparsePlan {
        p_hat,
        low_degree,
        path_len: params.path_length(n, p_hat, k),
        branches,
        forbidden,
        fallback,
    }
}

/// Builds `k` path-shaped trees `r - r_i - ...` and certifies niceness.
pub fn build_sparse(
    g: &Graph,
    r: Vertex,
    k: usize,
    params: &SparseParams,
) -> Result<BuildOutcome, BuildFailure> {
    params.validate().map_err(BuildFailure::Parameter)?;
    check_root(g, r, k)?;
    if k == 0 {
        return certify(g, TreeCollection::new(r, Vec::new()), Vec::new());
    }
    let plan = plan_sparse(g, r, k, params);
    let mut diagnostics = vec![format!(
        "p_hat={:.6} |S|={} path_len={}",
        plan.p_hat,
        plan.low_degree.len(),
        plan.path_len
    )];
    if plan.fallback > 0 {
        diagnostics.push(format!(
            "only {} neighbors of the root avoid S and N(S); {} branches taken from there",
            k - plan.fallback,
            plan.fallback
        ));
    }
    let system = grow_path_system(g, &plan.branches, plan.path_len, &plan.forbidden)
        .map_err(BuildFailure::PathGrowth)?;
    system
        .validate(g, &plan.branches, plan.path_len, &plan.forbidden)
        .map_err(|m| BuildFailure::Invalid(IstError::Integrity(m)))?;
    let trees = system
        .paths
        .iter()
        .map(|p| RootedTree::from_path(r, p))
        .collect();
    certify(g, TreeCollection::new(r, trees), diagnostics)
}
