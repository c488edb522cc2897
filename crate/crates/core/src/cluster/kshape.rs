//! k-Shape: nearest-prototype assignment under SBD alternating with
//! shape-extraction refinement, until the label vector repeats.

use std::time::Instant;

use super::config::{ClusterConfig, DistanceKind};
use super::engine::{crisp_objective, DistanceEngine};
use super::init::{members_of, start, Start};
use super::ClusterResult;
use crate::error::{Error, Result};
use crate::partition::{nearest_prototype, CrispPartition};
use crate::prototype::{shape_extract_detailed, PrototypeKind, PrototypeSet};
use crate::sbd::SbdPlan;
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

pub fn kshape<T: Scalar>(data: &Dataset<T>, cfg: &ClusterConfig<T>) -> Result<ClusterResult<T>> {
    cfg.validate(data, true)?;
    let timer = Instant::now();
    let series = data.series();
    let p = data.series_len();
    let c = cfg.clusters;
    let engine = DistanceEngine::new(data, DistanceKind::Sbd, cfg.convention)?;

    let (mut centroids, mut labels) = match start(data, cfg, &engine)? {
        Start::Prototypes(v) => {
            let d = engine.matrix(&v)?;
            let labels = nearest_prototype(&d).labels().to_vec();
            (v, labels)
        }
        Start::Labels(labels) => (vec![TimeSeries::zeros(p); c], labels),
    };

    let mut trace = Vec::new();
    let mut events = 0;
    let mut converged = false;
    while trace.len() < cfg.max_iter {
        let previous = labels.clone();
        let (next, empty) = refine(engine.plan(), series, &labels, &centroids)?;
        centroids = next;
        events += empty;
        let d = engine.matrix(&centroids)?;
        labels = nearest_prototype(&d).labels().to_vec();
        trace.push(crisp_objective(&labels, &d));
        if labels == previous {
            converged = true;
            break;
        }
    }

    Ok(ClusterResult {
        crisp: CrispPartition::new(labels, c)?,
        fuzzy: None,
        prototypes: PrototypeSet {
            centroids,
            kind: PrototypeKind::ShapeExtracted,
        },
        iterations: trace.len(),
        objective_trace: trace,
        elapsed_seconds: timer.elapsed().as_secs_f64(),
        empty_cluster_events: events,
        converged,
    })
}

/// One shape-extraction pass over all clusters. Empty clusters keep their
/// previous centroid; the second value counts them.
pub(crate) fn refine<T: Scalar>(
    plan: &SbdPlan<T>,
    series: &[TimeSeries<T>],
    labels: &[usize],
    centroids: &[TimeSeries<T>],
) -> Result<(Vec<TimeSeries<T>>, usize)> {
    let mut empty = 0;
    let mut out = Vec::with_capacity(centroids.len());
    for (j, reference) in centroids.iter().enumerate() {
        let members = members_of(series, labels, j);
        match shape_extract_detailed(plan, &members, reference) {
            Ok(extraction) => out.push(extraction.centroid),
            Err(Error::EmptyCluster) => {
                empty += 1;
                out.push(reference.clone());
            }
            Err(e) => return Err(e),
        }
    }
    Ok((out, empty))
}
