use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::pseudo::PseudoParams;
use crate::sparse::SparseParams;

use super::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Gnp,
    Regular,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoChoice {
    Dense,
    Sparse,
    Pseudo,
    Auto,
}

/// How many trees to ask for: `"delta"`, `"epsilon"` (`ceil((1 - eps) delta)`
/// with the pseudorandom epsilon) or `{"fixed": k}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KPolicy {
    #[default]
    Delta,
    Epsilon,
    Fixed(usize),
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    #[serde(default)]
    pub n: Vec<usize>,
    /// Edge probabilities for `gnp`.
    #[serde(default)]
    pub p: Vec<f64>,
    /// Alternative to `p`: factors `c` with `p = c ln n / n`.
    #[serde(default)]
    pub p_log_factor: Vec<f64>,
    /// Degrees for `regular`.
    #[serde(default)]
    pub d: Vec<usize>,
    #[serde(default)]
    pub graph_file: Option<PathBuf>,
    #[serde(default = "one")]
    pub roots_per_graph: usize,
    pub seeds_per_cell: usize,
    pub algo: AlgoChoice,
    #[serde(default)]
    pub k_policy: KPolicy,
    #[serde(default)]
    pub sparse: SparseParams,
    #[serde(default)]
    pub pseudo: PseudoParams,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    /// When false the `elapsed_ms` column is written as 0, which makes the
    /// CSV a pure function of the config.
    #[serde(default = "yes")]
    pub record_elapsed: bool,
}

/// One grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Gnp { n: usize, p: f64 },
    Regular { n: usize, d: usize },
    File,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.seeds_per_cell == 0 {
            return fail("seedsPerCell must be at least 1");
        }
        if self.roots_per_graph == 0 {
            return fail("rootsPerGraph must be at least 1");
        }
        if self.workers == 0 {
            return fail("workers must be at least 1");
        }
        match self.model {
            Model::Gnp => {
                if self.n.is_empty() {
                    return fail("n grid is empty");
                }
                if self.p.is_empty() == self.p_log_factor.is_empty() {
                    return fail("gnp needs exactly one nonempty grid of p or pLogFactor");
                }
                if self.p.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return fail("p must lie in [0, 1]");
                }
                for &c in &self.p_log_factor {
                    for &n in &self.n {
                        let p = log_probability(n, c);
                        if !(0.0..=1.0).contains(&p) {
                            return Err(HarnessError::Config(format!(
                                "pLogFactor {c} gives p = {p} at n = {n}"
                            )));
                        }
                    }
                }
            }
            Model::Regular => {
                if self.n.is_empty() || self.d.is_empty() {
                    return fail("regular needs nonempty n and d grids");
                }
                for &n in &self.n {
                    for &d in &self.d {
                        if d >= n || (n * d) % 2 == 1 {
                            return Err(HarnessError::Config(format!(
                                "no simple {d}-regular graph on {n} vertices"
                            )));
                        }
                    }
                }
            }
            Model::File => {
                if self.graph_file.is_none() {
                    return fail("file model needs graphFile");
                }
            }
        }
        if self.model != Model::File && self.n.iter().any(|&n| n < self.roots_per_graph) {
            return fail("rootsPerGraph exceeds the number of vertices");
        }
        self.sparse.validate().map_err(HarnessError::Config)?;
        if !(self.pseudo.epsilon > 0.0 && self.pseudo.epsilon < 1.0) {
            return fail("pseudo.epsilon must lie in (0, 1)");
        }
        Ok(())
    }

    /// Grid points in run order.
    pub fn cells(&self) -> Vec<Cell> {
        match self.model {
            Model::Gnp => self
                .n
                .iter()
                .flat_map(|&n| {
                    let ps: Vec<f64> = if self.p.is_empty() {
                        self.p_log_factor.iter().map(|&c| log_probability(n, c)).collect()
                    } else {
                        self.p.clone()
                    };
                    ps.into_iter().map(move |p| Cell::Gnp { n, p })
                })
                .collect(),
            Model::Regular => self
                .n
                .iter()
                .flat_map(|&n| self.d.iter().map(move |&d| Cell::Regular { n, d }))
                .collect(),
            Model::File => vec![Cell::File],
        }
    }
}

/// `c ln n / n`.
pub fn log_probability(n: usize, c: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    c * (n as f64).ln() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_json(
            r#"{"model": "gnp", "n": [50], "p": [0.3, 0.5], "seedsPerCell": 2, "algo": "dense"}"#,
        )
        .unwrap();
        assert_eq!(cfg.cells().len(), 2);
        assert_eq!(cfg.k_policy, KPolicy::Delta);
        assert!(cfg.record_elapsed);
        assert_eq!(cfg.workers, 1);
    }

    #[test]
    fn k_policy_forms() {
        let f: KPolicy = serde_json::from_str(r#"{"fixed": 47}"#).unwrap();
        assert_eq!(f, KPolicy::Fixed(47));
        let e: KPolicy = serde_json::from_str(r#""epsilon""#).unwrap();
        assert_eq!(e, KPolicy::Epsilon);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"model": "gnp", "n": [], "p": [0.3], "seedsPerCell": 1, "algo": "dense"}"#,
            r#"{"model": "gnp", "n": [10], "p": [1.3], "seedsPerCell": 1, "algo": "dense"}"#,
            r#"{"model": "gnp", "n": [10], "p": [0.3], "seedsPerCell": 0, "algo": "dense"}"#,
            r#"{"model": "regular", "n": [9], "d": [3], "seedsPerCell": 1, "algo": "pseudo"}"#,
            r#"{"model": "file", "seedsPerCell": 1, "algo": "auto"}"#,
            r#"{"model": "gnp", "n": [10], "p": [0.3], "seedsPerCell": 1, "algo": "dense", "typo": 1}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn log_factor_cells() {
        let cfg = ExperimentConfig::from_json(
            r#"{"model": "gnp", "n": [1000], "pLogFactor": [30], "seedsPerCell": 1, "algo": "sparse"}"#,
        )
        .unwrap();
        match cfg.cells()[0] {
            Cell::Gnp { n, p } => {
                assert_eq!(n, 1000);
                assert!((p - 30.0 * 1000f64.ln() / 1000.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }
}
