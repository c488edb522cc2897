//! The fuzzy shape-based clusterers.
//!
//! FCS+ is the FCM loop with SBD as the model norm and mean prototypes; it
//! keeps the terminal fuzzy partition and reports its hardening. FCS++
//! computes fuzzy memberships from SBD, hardens them, and refines each
//! crisp cluster by shape extraction, stopping when the centroid matrix
//! moves less than `epsilon` in Frobenius norm.

use std::time::Instant;

use super::config::{ClusterConfig, DistanceKind};
use super::engine::{crisp_objective, DistanceEngine};
use super::fcm::fcm;
use super::init::{start, Start};
use super::kshape::refine;
use super::ClusterResult;
use crate::error::Result;
use crate::partition::{fuzzy_memberships, harden, CrispPartition};
use crate::prototype::{PrototypeKind, PrototypeSet};
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

pub fn fcs_plus<T: Scalar>(data: &Dataset<T>, cfg: &ClusterConfig<T>) -> Result<ClusterResult<T>> {
    cfg.require_fuzzy()?;
    let cfg = cfg.clone().with_distance(DistanceKind::Sbd);
    fcm(data, &cfg)
}

pub fn fcs_plus_plus<T: Scalar>(
    data: &Dataset<T>,
    cfg: &ClusterConfig<T>,
) -> Result<ClusterResult<T>> {
    cfg.validate(data, false)?;
    cfg.require_fuzzy()?;
    let timer = Instant::now();
    let series = data.series();
    let p = data.series_len();
    let c = cfg.clusters;
    let m = cfg.fuzzifier;
    let engine = DistanceEngine::new(data, DistanceKind::Sbd, cfg.convention)?;

    let mut events = 0;
    let mut centroids = match start(data, cfg, &engine)? {
        Start::Prototypes(v) => v,
        Start::Labels(labels) => {
            let zeros = vec![TimeSeries::zeros(p); c];
            let (v, empty) = refine(engine.plan(), series, &labels, &zeros)?;
            events += empty;
            v
        }
    };

    let mut d = engine.matrix(&centroids)?;
    let mut trace = Vec::new();
    let mut err = T::infinity();
    let mut fuzzy = None;
    let mut labels = Vec::new();
    while trace.len() < cfg.max_iter && err > cfg.epsilon {
        let u = fuzzy_memberships(&d, m)?;
        let crisp = harden(&u);
        labels = crisp.labels().to_vec();
        fuzzy = Some(u);

        let (next, empty) = refine(engine.plan(), series, &labels, &centroids)?;
        events += empty;
        err = frobenius(&next, &centroids);
        centroids = next;
        d = engine.matrix(&centroids)?;
        trace.push(crisp_objective(&labels, &d));
    }

    Ok(ClusterResult {
        crisp: CrispPartition::new(labels, c)?,
        fuzzy,
        prototypes: PrototypeSet {
            centroids,
            kind: PrototypeKind::ShapeExtracted,
        },
        iterations: trace.len(),
        converged: err <= cfg.epsilon,
        objective_trace: trace,
        elapsed_seconds: timer.elapsed().as_secs_f64(),
        empty_cluster_events: events,
    })
}

fn frobenius<T: Scalar>(a: &[TimeSeries<T>], b: &[TimeSeries<T>]) -> T {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(&u, &v)| (u - v) * (u - v)))
        .sum::<T>()
        .sqrt()
}
