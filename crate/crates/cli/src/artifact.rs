use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const ARTIFACT_FORMAT: &str = "cshape-run/1";

/// Settings a run was made with, echoed into its artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub algorithm: String,
    pub clusters: usize,
    pub fuzzifier: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub init: String,
    pub sbd_convention: String,
}

/// Everything a single clustering run produced, minus timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub format: String,
    pub dataset: String,
    pub config: ConfigEcho,
    /// Cluster of each series, numbered from 1.
    pub labels: Vec<usize>,
    /// `c x n` memberships for fuzzy algorithms.
    pub memberships: Option<Vec<Vec<f64>>>,
    /// `c x p` prototypes.
    pub centroids: Vec<Vec<f64>>,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub empty_cluster_events: usize,
}

impl RunArtifact {
    pub fn from_result(
        dataset: &str,
        config: ConfigEcho,
        result: &cshape::ClusterResultF64,
    ) -> Self {
        Self {
            format: ARTIFACT_FORMAT.to_string(),
            dataset: dataset.to_string(),
            config,
            labels: result.crisp.labels().iter().map(|l| l + 1).collect(),
            memberships: result.fuzzy.as_ref().map(|u| {
                u.memberships()
                    .outer_iter()
                    .map(|row| row.to_vec())
                    .collect()
            }),
            centroids: result
                .prototypes
                .centroids
                .iter()
                .map(|c| c.as_slice().to_vec())
                .collect(),
            objective_trace: result.objective_trace.clone(),
            iterations: result.iterations,
            converged: result.converged,
            empty_cluster_events: result.empty_cluster_events,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> CliResult<Self> {
        let artifact: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("run artifact: {e}")))?;
        if artifact.format != ARTIFACT_FORMAT {
            return Err(CliError::Parse(format!(
                "unsupported artifact format {:?}",
                artifact.format
            )));
        }
        Ok(artifact)
    }
}
