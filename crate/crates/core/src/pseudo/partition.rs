use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::graph::{sorted_intersection_len, BipartiteGraph, Graph, Vertex};
use crate::matching::{saturating_or_violator, Side};
use crate::rng::SeededRng;

use super::IndexRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Root,
    Branch(usize),
    U,
    R,
    S(usize),
}

/// Numeric parameters of one partition attempt, with all defaults resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionRules {
    pub set_probability: f64,
    pub reservoir_probability: f64,
    pub set_size_cap: f64,
    pub reservoir_degree: f64,
    pub max_rounds: usize,
    pub resample_radius: usize,
    pub growth_budget: usize,
    pub index_rule: IndexRule,
    pub prefilter_threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub root: Vertex,
    pub branches: Vec<Vertex>,
    pub class: Vec<Class>,
    /// `connectors[v]`: `(i, u_i)` for every index of `v`, sorted by `i`.
    pub connectors: Vec<Vec<(usize, Vertex)>>,
    pub rounds: usize,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.branches.len()
    }

    pub fn count(&self, c: Class) -> usize {
        self.class.iter().filter(|&&x| x == c).count()
    }

    /// Members of every `S_i`, ascending.
    pub fn sets(&self) -> Vec<Vec<Vertex>> {
        let mut sets = vec![Vec::new(); self.k()];
        for (v, c) in self.class.iter().enumerate() {
            if let Class::S(i) = *c {
                sets[i].push(v);
            }
        }
        sets
    }

    /// Re-checks every partition property with straightforward set code,
    /// independent of the sampler.
    pub fn validate(&self, g: &Graph, rules: &PartitionRules) -> Result<(), String> {
        let n = g.n();
        if self.class.len() != n || self.connectors.len() != n {
            return Err("partition does not cover the graph".into());
        }
        let k = self.k();
        if self.class[self.root] != Class::Root {
            return Err(format!("root {} not labelled as root", self.root));
        }
        for (i, &b) in self.branches.iter().enumerate() {
            if !g.has_edge(self.root, b) || self.class[b] != Class::Branch(i) {
                return Err(format!("branch {i} ({b}) mislabelled or not adjacent to the root"));
            }
        }
        for (v, &c) in self.class.iter().enumerate() {
            let ok = match c {
                Class::Root => v == self.root,
                Class::Branch(i) => self.branches.get(i) == Some(&v),
                Class::U | Class::R => true,
                Class::S(i) => i < k,
            };
            if !ok {
                return Err(format!("vertex {v} has invalid class {c:?}"));
            }
        }
        let sets = self.sets();
        for (i, s) in sets.iter().enumerate() {
            if s.len() as f64 > rules.set_size_cap {
                return Err(format!("|S_{i}| = {} exceeds {}", s.len(), rules.set_size_cap));
            }
        }
        let any_set = sets.iter().any(|s| !s.is_empty());
        for v in 0..n {
            if let Some(viol) = reference_reservoir(g, self, rules, v, any_set) {
                return Err(viol.to_string());
            }
            let expected = reference_index_set(g, self, rules.index_rule, v);
            let entries = &self.connectors[v];
            let got: BTreeSet<usize> = entries.iter().map(|&(i, _)| i).collect();
            if got != expected || got.len() != entries.len() {
                return Err(format!("vertex {v}: connector indices {got:?} != {expected:?}"));
            }
            let used: BTreeSet<Vertex> = entries.iter().map(|&(_, u)| u).collect();
            if used.len() != entries.len() {
                return Err(format!("vertex {v}: connectors not distinct"));
            }
            for &(i, u) in entries {
                if !reference_candidate(g, self, rules, v, u) {
                    return Err(format!("vertex {v}: {u} is not an admissible connector"));
                }
                if !reference_sees(g, self, rules.index_rule, u, i) {
                    return Err(format!("vertex {v}: connector {u} misses S_{i}"));
                }
            }
        }
        Ok(())
    }
}

fn reference_index_set(g: &Graph, p: &Partition, rule: IndexRule, v: Vertex) -> BTreeSet<usize> {
    let nb: BTreeSet<Vertex> = g.neighbors(v).iter().copied().collect();
    match rule {
        IndexRule::Claim => (0..p.k())
            .filter(|&i| p.branches[i] != v && !nb.contains(&p.branches[i]))
            .collect(),
        IndexRule::Definition => {
            if v == p.root || nb.contains(&p.root) {
                return BTreeSet::new();
            }
            (0..p.k())
                .filter(|&i| {
                    let owns = |x: Vertex| p.class[x] == Class::S(i) || p.class[x] == Class::Branch(i);
                    !owns(v) && !nb.iter().any(|&w| owns(w))
                })
                .collect()
        }
    }
}

fn reference_candidate(g: &Graph, p: &Partition, rules: &PartitionRules, v: Vertex, u: Vertex) -> bool {
    if p.class[u] != Class::U || !g.has_edge(v, u) {
        return false;
    }
    match rules.prefilter_threshold {
        None => true,
        Some(t) => {
            let outside = g
                .neighbors(u)
                .iter()
                .filter(|&&x| x != p.root && !p.branches.contains(&x) && !g.has_edge(v, x))
                .count();
            outside as f64 >= t
        }
    }
}

fn reference_sees(g: &Graph, p: &Partition, rule: IndexRule, u: Vertex, i: usize) -> bool {
    g.neighbors(u).iter().any(|&x| match rule {
        IndexRule::Claim => p.class[x] == Class::S(i),
        IndexRule::Definition => {
            p.class[x] == Class::S(i) || p.class[x] == Class::Branch(i) || x == p.root
        }
    })
}

fn reference_reservoir(
    g: &Graph,
    p: &Partition,
    rules: &PartitionRules,
    v: Vertex,
    any_set: bool,
) -> Option<PartitionViolation> {
    if !any_set || v == p.root {
        return None;
    }
    let count = g.neighbors(v).iter().filter(|&&w| p.class[w] == Class::R).count();
    (count as f64 + 1e-9 < rules.reservoir_degree).then_some(PartitionViolation::Reservoir {
        vertex: v,
        count,
        required: rules.reservoir_degree,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PartitionViolation {
    /// The parameters rule out every partition.
    Infeasible(String),
    Oversized { set: usize, size: usize, cap: f64 },
    Reservoir { vertex: Vertex, count: usize, required: f64 },
    /// Hall violator of the connector matching at `vertex`: the indices have
    /// only `connectors` as admissible candidates.
    Matching {
        vertex: Vertex,
        indices: Vec<usize>,
        connectors: Vec<Vertex>,
    },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::Infeasible(m) => write!(f, "infeasible parameters: {m}"),
            PartitionViolation::Oversized { set, size, cap } => {
                write!(f, "|S_{set}| = {size} exceeds cap {cap:.3}")
            }
            PartitionViolation::Reservoir { vertex, count, required } => {
                write!(f, "vertex {vertex} has {count} reservoir neighbors, needs {required:.3}")
            }
            PartitionViolation::Matching { vertex, indices, connectors } => write!(
                f,
                "vertex {vertex}: {} indices share {} connectors",
                indices.len(),
                connectors.len()
            ),
        }
    }
}

const REPORTED_VIOLATIONS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionFailure {
    pub rounds: usize,
    pub total_violations: usize,
    /// The first few violations of the final round.
    pub violations: Vec<PartitionViolation>,
    pub rules: PartitionRules,
    pub partition: Partition,
}

impl fmt::Display for PartitionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated events after {} rounds",
            self.total_violations, self.rounds
        )?;
        if let Some(v) = self.violations.first() {
            write!(f, " (first: {v})")?;
        }
        Ok(())
    }
}

impl PartitionFailure {
    /// Re-checks each reported violation against the final partition.
    pub fn validate(&self, g: &Graph) -> bool {
        let p = &self.partition;
        if p.class.len() != g.n() || self.violations.is_empty() {
            return false;
        }
        let sets = p.sets();
        let any_set = sets.iter().any(|s| !s.is_empty());
        self.violations.iter().all(|viol| match viol {
            PartitionViolation::Infeasible(_) => true,
            PartitionViolation::Oversized { set, size, cap } => {
                sets.get(*set).map(Vec::len) == Some(*size) && *size as f64 > *cap
            }
            PartitionViolation::Reservoir { vertex, .. } => {
                reference_reservoir(g, p, &self.rules, *vertex, any_set).as_ref() == Some(viol)
            }
            PartitionViolation::Matching { vertex, indices, connectors } => {
                let index = reference_index_set(g, p, self.rules.index_rule, *vertex);
                if indices.is_empty() || indices.iter().any(|i| !index.contains(i)) {
                    return false;
                }
                let seen: BTreeSet<Vertex> = g
                    .neighbors(*vertex)
                    .iter()
                    .copied()
                    .filter(|&u| reference_candidate(g, p, &self.rules, *vertex, u))
                    .filter(|&u| {
                        indices
                            .iter()
                            .any(|&i| reference_sees(g, p, self.rules.index_rule, u, i))
                    })
                    .collect();
                seen.len() < indices.len() && seen == connectors.iter().copied().collect()
            }
        })
    }
}

struct Scratch {
    excluded: Vec<bool>,
    position: Vec<usize>,
}

struct Evaluator<'a> {
    g: &'a Graph,
    root: Vertex,
    root_adjacent: Vec<bool>,
    in_core: Vec<bool>,
    rules: &'a PartitionRules,
    k: usize,
}

impl Evaluator<'_> {
    fn index_set(&self, class: &[Class], v: Vertex, excluded: &mut [bool]) -> Vec<usize> {
        excluded.iter_mut().for_each(|x| *x = false);
        match self.rules.index_rule {
            IndexRule::Claim => {
                if let Class::Branch(i) = class[v] {
                    excluded[i] = true;
                }
                for &w in self.g.neighbors(v) {
                    if let Class::Branch(i) = class[w] {
                        excluded[i] = true;
                    }
                }
            }
            IndexRule::Definition => {
                if v == self.root || self.root_adjacent[v] {
                    return Vec::new();
                }
                for &w in std::iter::once(&v).chain(self.g.neighbors(v)) {
                    if let Class::Branch(i) | Class::S(i) = class[w] {
                        excluded[i] = true;
                    }
                }
            }
        }
        (0..self.k).filter(|&i| !excluded[i]).collect()
    }

    fn admissible(&self, class: &[Class], v: Vertex, u: Vertex) -> bool {
        if class[u] != Class::U {
            return false;
        }
        match self.rules.prefilter_threshold {
            None => true,
            Some(t) => {
                let nu = self.g.neighbors(u);
                let shared = sorted_intersection_len(nu, self.g.neighbors(v));
                let core = nu.iter().filter(|&&x| self.in_core[x] && !self.g.has_edge(v, x)).count();
                (nu.len() - shared - core) as f64 >= t
            }
        }
    }

    fn check_vertex(
        &self,
        class: &[Class],
        any_set: bool,
        v: Vertex,
        scratch: &mut Scratch,
    ) -> Result<Vec<(usize, Vertex)>, PartitionViolation> {
        let indices = self.index_set(class, v, &mut scratch.excluded);
        let mut connectors = Vec::new();
        if !indices.is_empty() {
            for (p, &i) in indices.iter().enumerate() {
                scratch.position[i] = p;
            }
            let candidates: Vec<Vertex> = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.admissible(class, v, u))
                .collect();
            let definition = self.rules.index_rule == IndexRule::Definition;
            let mut adj = vec![Vec::new(); indices.len()];
            for (c, &u) in candidates.iter().enumerate() {
                if definition && self.root_adjacent[u] {
                    adj.iter_mut().for_each(|l| l.push(c));
                    continue;
                }
                for &x in self.g.neighbors(u) {
                    let hit = match class[x] {
                        Class::S(i) => Some(i),
                        Class::Branch(i) if definition => Some(i),
                        _ => None,
                    };
                    if let Some(i) = hit {
                        if !scratch.excluded[i] {
                            adj[scratch.position[i]].push(c);
                        }
                    }
                }
            }
            let h = BipartiteGraph::from_adjacency(candidates.len(), adj);
            match saturating_or_violator(&h, Side::Left) {
                Ok(m) => {
                    connectors = m
                        .pairs()
                        .iter()
                        .map(|&(p, c)| (indices[p], candidates[c]))
                        .collect();
                    connectors.sort_unstable();
                }
                Err(viol) => {
                    let mut idx: Vec<usize> = viol.set.iter().map(|&p| indices[p]).collect();
                    idx.sort_unstable();
                    let mut con: Vec<Vertex> =
                        viol.neighborhood.iter().map(|&c| candidates[c]).collect();
                    con.sort_unstable();
                    return Err(PartitionViolation::Matching {
                        vertex: v,
                        indices: idx,
                        connectors: con,
                    });
                }
            }
        }
        if any_set && v != self.root {
            let count = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| class[w] == Class::R)
                .count();
            if (count as f64) + 1e-9 < self.rules.reservoir_degree {
                return Err(PartitionViolation::Reservoir {
                    vertex: v,
                    count,
                    required: self.rules.reservoir_degree,
                });
            }
        }
        Ok(connectors)
    }
}

fn draw(rng: &mut SeededRng, k: usize, set_probability: f64, reservoir_probability: f64) -> Class {
    let x: f64 = rng.random();
    let sets = set_probability * k as f64;
    if x < sets {
        Class::S(((x / set_probability) as usize).min(k - 1))
    } else if x < sets + reservoir_probability {
        Class::R
    } else {
        Class::U
    }
}

/// Samples classes for `V \ ({r} ∪ L)` and resamples violated events until
/// none remain: a vertex event (connector matching or reservoir degree)
/// resamples the ball of radius two around the vertex, a size event resamples
/// the members of the oversized set. Each round resamples a maximal family of
/// violated events with disjoint variables.
#[allow(clippy::result_large_err)]
pub fn sample_partition(
    g: &Graph,
    r: Vertex,
    branches: &[Vertex],
    rules: &PartitionRules,
    rng: &mut SeededRng,
) -> Result<Partition, PartitionFailure> {
    let n = g.n();
    let k = branches.len();
    let mut class = vec![Class::U; n];
    class[r] = Class::Root;
    for (i, &b) in branches.iter().enumerate() {
        assert!(g.has_edge(r, b), "branch {b} is not a neighbor of the root");
        assert_eq!(class[b], Class::U, "branch {b} repeated");
        class[b] = Class::Branch(i);
    }
    let free: Vec<Vertex> = (0..n).filter(|&v| class[v] == Class::U).collect();
    let sets_forced_empty = rules.set_size_cap < 1.0 || rules.set_probability == 0.0;
    let set_probability = if sets_forced_empty { 0.0 } else { rules.set_probability };
    for &v in &free {
        class[v] = draw(rng, k, set_probability, rules.reservoir_probability);
    }
    let mut root_adjacent = vec![false; n];
    g.neighbors(r).iter().for_each(|&w| root_adjacent[w] = true);
    let mut in_core = vec![false; n];
    in_core[r] = true;
    branches.iter().for_each(|&b| in_core[b] = true);
    let eval = Evaluator {
        g,
        root: r,
        root_adjacent,
        in_core,
        rules,
        k,
    };
    let snapshot = |class: Vec<Class>, connectors, rounds| Partition {
        root: r,
        branches: branches.to_vec(),
        class,
        connectors,
        rounds,
    };
    if sets_forced_empty && rules.index_rule == IndexRule::Claim {
        let mut excluded = vec![false; k];
        if let Some(v) = (0..n).find(|&v| !eval.index_set(&class, v, &mut excluded).is_empty()) {
            let reason = format!(
                "set size cap {:.3e} and set probability {:.3e} leave every S_i empty, \
                 but vertex {v} needs connectors into them",
                rules.set_size_cap, rules.set_probability
            );
            return Err(PartitionFailure {
                rounds: 0,
                total_violations: 1,
                violations: vec![PartitionViolation::Infeasible(reason)],
                rules: rules.clone(),
                partition: snapshot(class, vec![Vec::new(); n], 0),
            });
        }
    }
    let mut stamp = vec![usize::MAX; n];
    let mut ball = Vec::new();
    for round in 0..=rules.max_rounds {
        let mut sizes = vec![0usize; k];
        for c in &class {
            if let Class::S(i) = *c {
                sizes[i] += 1;
            }
        }
        let any_set = sizes.iter().any(|&s| s > 0);
        let results: Vec<Result<Vec<(usize, Vertex)>, PartitionViolation>> = (0..n)
            .into_par_iter()
            .map_init(
                || Scratch {
                    excluded: vec![false; k],
                    position: vec![0; k],
                },
                |scratch, v| eval.check_vertex(&class, any_set, v, scratch),
            )
            .collect();
        let mut violations: Vec<PartitionViolation> =
            results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
        violations.extend(sizes.iter().enumerate().filter_map(|(i, &size)| {
            (size as f64 > rules.set_size_cap).then_some(PartitionViolation::Oversized {
                set: i,
                size,
                cap: rules.set_size_cap,
            })
        }));
        if violations.is_empty() {
            let connectors = results.into_iter().map(|r| r.expect("no violations")).collect();
            return Ok(snapshot(class, connectors, round));
        }
        if round == rules.max_rounds {
            let total = violations.len();
            violations.truncate(REPORTED_VIOLATIONS);
            return Err(PartitionFailure {
                rounds: round,
                total_violations: total,
                violations,
                rules: rules.clone(),
                partition: snapshot(class, vec![Vec::new(); n], round),
            });
        }
        let mut locked = vec![false; n];
        for (e, viol) in violations.iter().enumerate() {
            ball.clear();
            match viol {
                PartitionViolation::Oversized { set, .. } => {
                    ball.extend((0..n).filter(|&v| class[v] == Class::S(*set)));
                }
                PartitionViolation::Reservoir { vertex, .. }
                | PartitionViolation::Matching { vertex, .. } => {
                    collect_ball(g, *vertex, rules.resample_radius, e, &mut stamp, &mut ball);
                    ball.retain(|&x| x != r && !matches!(class[x], Class::Branch(_)));
                    ball.sort_unstable();
                }
                PartitionViolation::Infeasible(_) => unreachable!(),
            }
            if ball.iter().any(|&x| locked[x]) {
                continue;
            }
            for &x in &ball {
                locked[x] = true;
                class[x] = draw(rng, k, set_probability, rules.reservoir_probability);
            }
        }
        // Stamps are keyed by event index, which restarts every round.
        stamp.iter_mut().for_each(|s| *s = usize::MAX);
    }
    unreachable!("the final round returns")
}

fn collect_ball(
    g: &Graph,
    v: Vertex,
    radius: usize,
    mark: usize,
    stamp: &mut [usize],
    out: &mut Vec<Vertex>,
) {
    stamp[v] = mark;
    out.push(v);
    let mut ring = 0..1;
    for _ in 0..radius {
        let next = out.len();
        for j in ring {
            let w = out[j];
            for &x in g.neighbors(w) {
                if stamp[x] != mark {
                    stamp[x] = mark;
                    out.push(x);
                }
            }
        }
        ring = next..out.len();
    }
}
