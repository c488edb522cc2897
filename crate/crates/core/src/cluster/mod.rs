//! Alternating-optimization clusterers: HCM/FCM, k-Shape, FCS+ and FCS++.
//!
//! Every run records the objective `J_m(U, V) = sum_ik u_ik^m D_ik` after
//! each iteration, where `D` holds squared dissimilarities: squared
//! Euclidean distance, or the SBD value itself (read as a squared
//! distance) unless [`SbdConvention::Unsquared`] is selected. Only the
//! Euclidean runs are guaranteed to produce a non-increasing trace.

mod config;
mod engine;
mod fcm;
mod fcs;
mod init;
mod kshape;

use std::fmt;
use std::str::FromStr;

pub use config::{ClusterConfig, DistanceKind, Init, SbdConvention};
pub use engine::DistanceEngine;
pub use fcm::{fcm, hcm};
pub use fcs::{fcs_plus, fcs_plus_plus};
pub use kshape::kshape;

use crate::error::{Error, Result};
use crate::partition::{CrispPartition, FuzzyPartition};
use crate::prototype::PrototypeSet;
use crate::scalar::Scalar;
use crate::series::Dataset;

/// Output of one clustering run.
#[derive(Debug, Clone)]
pub struct ClusterResult<T> {
    pub crisp: CrispPartition,
    /// Terminal fuzzy partition before hardening (FCM, FCS+, FCS++).
    pub fuzzy: Option<FuzzyPartition<T>>,
    pub prototypes: PrototypeSet<T>,
    /// Objective value after each iteration; one entry per iteration.
    pub objective_trace: Vec<T>,
    pub iterations: usize,
    /// Wall-clock seconds spent inside the clusterer.
    pub elapsed_seconds: f64,
    /// How many times a cluster came up empty and kept its old centroid.
    pub empty_cluster_events: usize,
    /// Whether the stopping rule fired before `max_iter`.
    pub converged: bool,
}

/// The clustering algorithms exposed by the library and CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Hcm,
    Fcm,
    KShape,
    FcsPlus,
    FcsPlusPlus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Hcm,
        Algorithm::Fcm,
        Algorithm::KShape,
        Algorithm::FcsPlus,
        Algorithm::FcsPlusPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hcm => "hcm",
            Algorithm::Fcm => "fcm",
            Algorithm::KShape => "kshape",
            Algorithm::FcsPlus => "fcs+",
            Algorithm::FcsPlusPlus => "fcs++",
        }
    }

    /// Runs the algorithm. `hcm` forces `m = 1`; `hcm` and `fcm` use the
    /// Euclidean distance whatever `cfg.distance` says.
    pub fn run<T: Scalar>(
        self,
        data: &Dataset<T>,
        cfg: &ClusterConfig<T>,
    ) -> Result<ClusterResult<T>> {
        match self {
            Algorithm::Hcm => hcm(data, cfg),
            Algorithm::Fcm => {
                let cfg = cfg.clone().with_distance(DistanceKind::Euclidean);
                fcm(data, &cfg)
            }
            Algorithm::KShape => kshape(data, cfg),
            Algorithm::FcsPlus => fcs_plus(data, cfg),
            Algorithm::FcsPlusPlus => fcs_plus_plus(data, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}
