//! Shared result and failure types for the three constructors.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::ist::{
    assemble, certify_nice, CertifyError, IstError, NicenessFailure, NicenessWitness,
    SpanningTreeFamily, TreeCollection,
};
use crate::pseudo::{build_pseudorandom, ConnectFailure, PartitionFailure, PseudoParams};
use crate::rng::SeededRng;
use crate::sparse::{build_sparse, GrowthFailure, SparseParams};

/// A concrete constructor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Dense,
    Sparse,
    Pseudo,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Dense => "dense",
            Algo::Sparse => "sparse",
            Algo::Pseudo => "pseudo",
        }
    }

    /// Runs the constructor. `rng` is only consumed by the pseudorandom one.
    pub fn build(
        self,
        g: &Graph,
        r: Vertex,
        k: usize,
        sparse: &SparseParams,
        pseudo: &PseudoParams,
        rng: &mut SeededRng,
    ) -> Result<BuildOutcome, BuildFailure> {
        match self {
            Algo::Dense => crate::dense::build_dense(g, r, k),
            Algo::Sparse => build_sparse(g, r, k, sparse),
            Algo::Pseudo => build_pseudorandom(g, r, k, pseudo, rng),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pipeline stage at which a construction attempt stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailStage {
    QSelection,
    PathGrowth,
    Niceness,
    Partition,
    Connection,
    Other,
}

impl FailStage {
    pub fn as_str(self) -> &'static str {
        match self {
            FailStage::QSelection => "Q-selection",
            FailStage::PathGrowth => "path-growth",
            FailStage::Niceness => "niceness",
            FailStage::Partition => "partition",
            FailStage::Connection => "connection",
            FailStage::Other => "other",
        }
    }
}

impl fmt::Display for FailStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum BuildFailure {
    #[error("root {root} has degree {degree} < k = {k}")]
    RootDegree { root: Vertex, degree: usize, k: usize },
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("path growth failed in round {}: {} endpoints see {} free vertices", .0.round, .0.frontier.len(), .0.neighborhood.len())]
    PathGrowth(GrowthFailure),
    #[error("collection is not nice at vertex {}", .failure.vertex)]
    Niceness {
        collection: TreeCollection,
        failure: NicenessFailure,
    },
    #[error("partition sampling failed: {0}")]
    Partition(Box<PartitionFailure>),
    #[error("reservoir connection failed: {0}")]
    Connection(ConnectFailure),
    #[error(transparent)]
    Invalid(#[from] IstError),
}

impl BuildFailure {
    pub fn stage(&self) -> FailStage {
        match self {
            BuildFailure::RootDegree { .. } => FailStage::QSelection,
            BuildFailure::PathGrowth(_) => FailStage::PathGrowth,
            BuildFailure::Niceness { .. } => FailStage::Niceness,
            BuildFailure::Partition(_) => FailStage::Partition,
            BuildFailure::Connection(_) => FailStage::Connection,
            BuildFailure::Parameter(_) | BuildFailure::Invalid(_) => FailStage::Other,
        }
    }

    /// Re-checks the attached certificate against `g` from scratch. Failures
    /// without a certificate (parameter errors) return `true` when the stated
    /// fact holds.
    pub fn validate(&self, g: &Graph) -> bool {
        match self {
            BuildFailure::RootDegree { root, degree, k } => {
                *root < g.n() && g.degree(*root) == *degree && degree < k
            }
            BuildFailure::Parameter(_) | BuildFailure::Invalid(_) => true,
            BuildFailure::PathGrowth(f) => f.validate(g),
            BuildFailure::Niceness { collection, failure } => failure.validate(g, collection),
            BuildFailure::Partition(f) => f.validate(g),
            BuildFailure::Connection(f) => f.validate(g),
        }
    }

    pub(crate) fn from_certify(collection: TreeCollection, e: CertifyError) -> Self {
        match e {
            CertifyError::Invalid(e) => BuildFailure::Invalid(e),
            CertifyError::NotNice(failure) => BuildFailure::Niceness { collection, failure },
        }
    }
}

/// A nice collection with its witness, ready for [`assemble`].
#[derive(Clone, Debug)]
pub struct BuildOutcome {
    pub collection: TreeCollection,
    pub witness: NicenessWitness,
    pub diagnostics: Vec<String>,
}

impl BuildOutcome {
    pub fn assemble(&self, g: &Graph) -> Result<SpanningTreeFamily, IstError> {
        assemble(g, &self.collection, &self.witness)
    }
}

/// Checks `1 <= k <= d(r)` (`k = 0` is accepted as the vacuous case).
pub(crate) fn check_root(g: &Graph, r: Vertex, k: usize) -> Result<(), BuildFailure> {
    if r >= g.n() {
        return Err(BuildFailure::Parameter(format!(
            "root {r} out of range for {} vertices",
            g.n()
        )));
    }
    if g.degree(r) < k {
        return Err(BuildFailure::RootDegree {
            root: r,
            degree: g.degree(r),
            k,
        });
    }
    Ok(())
}

pub(crate) fn certify(
    g: &Graph,
    collection: TreeCollection,
    diagnostics: Vec<String>,
) -> Result<BuildOutcome, BuildFailure> {
    match certify_nice(g, &collection) {
        Ok(witness) => Ok(BuildOutcome {
            collection,
            witness,
            diagnostics,
        }),
        Err(e) => Err(BuildFailure::from_certify(collection, e)),
    }
}
