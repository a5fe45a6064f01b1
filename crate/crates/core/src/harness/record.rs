use serde::Serialize;

use crate::build::{Algo, FailStage};

pub const CSV_HEADER: &str = "run_id,algo,n,p_or_d,seed,root,k_target,built,verified,fail_stage,elapsed_ms,delta_G,kappa_lower_bound_certified";

/// One construction attempt.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub run_id: usize,
    #[serde(serialize_with = "algo_name")]
    pub algo: Algo,
    pub n: usize,
    pub p_or_d: f64,
    pub seed: u64,
    pub root: usize,
    pub k_target: usize,
    pub built: bool,
    pub verified: bool,
    #[serde(serialize_with = "stage_name")]
    pub fail_stage: Option<FailStage>,
    pub elapsed_ms: u64,
    #[serde(rename = "delta_G")]
    pub delta_g: usize,
    pub kappa_lower_bound_certified: usize,
    /// Whether the failure certificate re-validated (failures only).
    #[serde(skip)]
    pub certificate_valid: Option<bool>,
}

fn algo_name<S: serde::Serializer>(a: &Algo, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(a.as_str())
}

fn stage_name<S: serde::Serializer>(f: &Option<FailStage>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.map_or("", FailStage::as_str))
}

impl ExperimentRecord {
    /// `verified => built`, `fail_stage` set exactly when not built, and the
    /// certified bound equal to `k_target` exactly when verified.
    pub fn check(&self) -> Result<(), String> {
        if self.verified && !self.built {
            return Err("verified but not built".into());
        }
        if self.fail_stage.is_some() == self.built {
            return Err("fail_stage must be set exactly when the build failed".into());
        }
        let expected = if self.verified { self.k_target } else { 0 };
        if self.kappa_lower_bound_certified != expected {
            return Err("certified bound disagrees with verification".into());
        }
        Ok(())
    }
}
