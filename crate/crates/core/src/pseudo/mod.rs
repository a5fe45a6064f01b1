//! Regular graphs with a spectral gap: random partition with local
//! resampling, reservoir connection, and assembly of the trees.

mod connect;
mod mixing;
mod partition;
mod spectral;

pub use connect::{connect_through_reservoir, validate_paths, ConnectFailure};
pub use mixing::{crossing_spot_check, edges_between, mixing_audit, mixing_holds, AuditReport};
pub use partition::{
    sample_partition, Class, Partition, PartitionFailure, PartitionRules, PartitionViolation,
};
pub use spectral::{spectral_profile, SpectralProfile, DENSE_EIGEN_LIMIT};

use serde::{Deserialize, Serialize};

use crate::build::{check_root, BuildFailure, BuildOutcome};
use crate::graph::{Graph, Vertex};
use crate::ist::{index_set, IstError, NicenessWitness, RootedTree, TreeCollection};
use crate::rng::SeededRng;

/// Which vertices `v` must find a connector for tree `i` during partitioning.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexRule {
    /// Every `i` with `v` not adjacent to (and distinct from) the branch `v_i`;
    /// connectors must see `S_i`.
    #[default]
    Claim,
    /// Every `i` with `v` outside and not adjacent to `S_i + v_i + r`;
    /// connectors may see `S_i`, `v_i` or `r`.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct PseudoParams {
    /// User-facing epsilon; class probabilities use `epsilon / 10`.
    pub epsilon: f64,
    /// Probability of each `S_i`; default `e^11 / (d ln d)` with `e = epsilon / 10`.
    pub set_probability: Option<f64>,
    /// Probability of the reservoir; default `e / 100`.
    pub reservoir_probability: Option<f64>,
    /// Upper bound on `|S_i|`; default `e^10 n / (d ln d)`.
    pub set_size_cap: Option<f64>,
    /// Required reservoir neighbors per vertex; default `e^3 d`.
    pub reservoir_degree: Option<f64>,
    /// Default `50 n`.
    pub max_resample_rounds: Option<usize>,
    /// Radius of the ball resampled around a vertex whose event fails.
    pub resample_radius: usize,
    /// Total growth budget `s`; default `ceil(epsilon n / 4)`.
    pub growth_budget: Option<usize>,
    pub index_rule: IndexRule,
    /// Only use connectors with at least `e d` neighbors outside
    /// `N(v) ∪ L ∪ {r}`.
    pub prefilter_connectors: bool,
    /// Compute the spectral profile and report it in the diagnostics.
    pub spectral_diagnostics: bool,
}

impl Default for PseudoParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            set_probability: None,
            reservoir_probability: None,
            set_size_cap: None,
            reservoir_degree: None,
            max_resample_rounds: None,
            resample_radius: 2,
            growth_budget: None,
            index_rule: IndexRule::Claim,
            prefilter_connectors: false,
            spectral_diagnostics: true,
        }
    }
}

impl PseudoParams {
    /// `ceil((1 - epsilon) d)`, guarding against `0.95 * 50 = 47.50000001`.
    pub fn target_k(&self, d: usize) -> usize {
        ((1.0 - self.epsilon) * d as f64 - 1e-9).ceil().max(0.0) as usize
    }

    /// Resolves defaults against a graph with `n` vertices, degree `d` and
    /// `k` branches.
    pub fn rules(&self, n: usize, d: usize, k: usize) -> Result<PartitionRules, String> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        let e = self.epsilon / 10.0;
        let df = d as f64;
        let d_log_d = if d >= 2 { df * df.ln() } else { 1.0 };
        let set_probability = self.set_probability.unwrap_or(e.powi(11) / d_log_d);
        let reservoir_probability = self.reservoir_probability.unwrap_or(e / 100.0);
        if set_probability < 0.0 || reservoir_probability < 0.0 {
            return Err("class probabilities must be nonnegative".into());
        }
        if set_probability * k as f64 + reservoir_probability > 1.0 + 1e-12 {
            return Err(format!(
                "class probabilities sum to {} > 1",
                set_probability * k as f64 + reservoir_probability
            ));
        }
        let rounds = self.max_resample_rounds.unwrap_or(50 * n);
        let budget = self
            .growth_budget
            .unwrap_or(((self.epsilon * n as f64) / 4.0).ceil() as usize);
        if budget == 0 {
            return Err("growth budget must be positive".into());
        }
        Ok(PartitionRules {
            set_probability,
            reservoir_probability,
            set_size_cap: self.set_size_cap.unwrap_or(e.powi(10) * n as f64 / d_log_d),
            reservoir_degree: self.reservoir_degree.unwrap_or(e.powi(3) * df),
            max_rounds: rounds,
            resample_radius: self.resample_radius,
            growth_budget: budget,
            index_rule: self.index_rule,
            prefilter_threshold: self.prefilter_connectors.then_some(e * df),
        })
    }
}

/// Diagnostic lines recording that the independent validators passed.
pub const PARTITION_CHECKED: &str = "partition validator passed";
pub const CONNECTION_CHECKED: &str = "connection validator passed";

/// Takes the first `k` neighbors of `r` as branches, samples a partition,
/// connects every `S_i + v_i` through the reservoir into a path `P_i` and
/// returns the trees `P_i + r v_i` with the partition's connectors as the
/// witness.
pub fn build_pseudorandom(
    g: &Graph,
    r: Vertex,
    k: usize,
    params: &PseudoParams,
    rng: &mut SeededRng,
) -> Result<BuildOutcome, BuildFailure> {
    check_root(g, r, k)?;
    let mut diagnostics = Vec::new();
    let d = match g.regular_degree() {
        Some(d) => d,
        None => {
            diagnostics.push(format!(
                "graph is not regular (degrees {}..{}); using the maximum degree",
                g.min_degree(),
                g.max_degree()
            ));
            g.max_degree()
        }
    };
    let rules = params.rules(g.n(), d, k).map_err(BuildFailure::Parameter)?;
    if params.spectral_diagnostics {
        let p = spectral_profile(g);
        diagnostics.push(format!("lambda={:.4} d/lambda={:.3}", p.lambda, p.ratio));
    }
    let branches = g.neighbors(r)[..k].to_vec();
    let partition =
        sample_partition(g, r, &branches, &rules, rng).map_err(|f| BuildFailure::Partition(Box::new(f)))?;
    diagnostics.push(format!(
        "partition after {} rounds: |U|={} |R|={} |S|={}",
        partition.rounds,
        partition.count(Class::U),
        partition.count(Class::R),
        partition.sets().iter().map(Vec::len).sum::<usize>()
    ));
    let integrity = |m: String| BuildFailure::Invalid(IstError::Integrity(m));
    partition.validate(g, &rules).map_err(integrity)?;
    diagnostics.push(PARTITION_CHECKED.to_string());
    let paths = connect_through_reservoir(g, &partition, rules.growth_budget)
        .map_err(BuildFailure::Connection)?;
    validate_paths(g, &partition, &paths).map_err(integrity)?;
    diagnostics.push(CONNECTION_CHECKED.to_string());
    let trees = paths
        .iter()
        .zip(&branches)
        .map(|(p, &v)| RootedTree::from_path_with_entry(r, p, v))
        .collect();
    let collection = TreeCollection::new(r, trees);
    collection.validate(g)?;
    let connectors = (0..g.n())
        .map(|v| {
            let keep = index_set(g, &collection, v);
            partition.connectors[v]
                .iter()
                .copied()
                .filter(|(i, _)| keep.binary_search(i).is_ok())
                .collect()
        })
        .collect();
    let witness = NicenessWitness::from_connectors(connectors);
    witness
        .validate(g, &collection)
        .map_err(integrity)?;
    Ok(BuildOutcome {
        collection,
        witness,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ist::verify_independent;

    #[test]
    fn k_convention() {
        let p = PseudoParams { epsilon: 0.05, ..Default::default() };
        assert_eq!(p.target_k(50), 48);
        let p = PseudoParams { epsilon: 0.2, ..Default::default() };
        assert_eq!(p.target_k(50), 40);
    }

    #[test]
    fn formula_defaults_have_tiny_sets() {
        let rules = PseudoParams { epsilon: 0.05, ..Default::default() }
            .rules(2000, 50, 48)
            .unwrap();
        assert!(rules.set_size_cap < 1.0);
        assert!(rules.set_probability < 1e-20);
        assert_eq!(rules.growth_budget, 25);
        assert_eq!(rules.max_rounds, 100_000);
    }

    #[test]
    fn complete_graph_builds() {
        let g = Graph::complete(30);
        let params = PseudoParams::default();
        let k = params.target_k(29);
        let out = build_pseudorandom(&g, 0, k, &params, &mut SeededRng::new(4)).unwrap();
        let fam = out.assemble(&g).unwrap();
        assert_eq!(fam.len(), k);
        assert!(verify_independent(&g, &fam).passed());
    }

    #[test]
    fn bad_epsilon() {
        let g = Graph::complete(6);
        let params = PseudoParams { epsilon: 1.5, ..Default::default() };
        let e = build_pseudorandom(&g, 0, 2, &params, &mut SeededRng::new(0)).unwrap_err();
        assert!(matches!(e, BuildFailure::Parameter(_)));
    }
}
