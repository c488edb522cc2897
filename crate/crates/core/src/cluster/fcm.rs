//! Alternating optimization through the FCM (`m > 1`) or HCM (`m = 1`)
//! necessary conditions, stopping when `|J_t - J_{t-1}| <= epsilon`.

use std::time::Instant;

use ndarray::Array2;

use super::config::{ClusterConfig, DistanceKind};
use super::engine::{objective, DistanceEngine};
use super::init::{members_of, start, Start};
use super::ClusterResult;
use crate::error::Result;
use crate::partition::{
    fuzzy_memberships, harden, nearest_prototype, CrispPartition, FuzzyPartition,
};
use crate::prototype::{mean_prototype, PrototypeKind, PrototypeSet};
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

/// Hard c-means: [`fcm`] with `m = 1` and Euclidean distance.
pub fn hcm<T: Scalar>(data: &Dataset<T>, cfg: &ClusterConfig<T>) -> Result<ClusterResult<T>> {
    let cfg = cfg
        .clone()
        .with_fuzzifier(T::one())
        .with_distance(DistanceKind::Euclidean);
    fcm(data, &cfg)
}

/// FCM/HCM with mean prototypes and the distance named in `cfg.distance`.
/// With SBD and `m > 1` this is FCS+.
pub fn fcm<T: Scalar>(data: &Dataset<T>, cfg: &ClusterConfig<T>) -> Result<ClusterResult<T>> {
    cfg.validate(data, false)?;
    let timer = Instant::now();
    let m = cfg.fuzzifier;
    let crisp_mode = m == T::one();
    let series = data.series();
    let engine = DistanceEngine::new(data, cfg.distance, cfg.convention)?;

    let mut events = 0;
    let mut v = match start(data, cfg, &engine)? {
        Start::Prototypes(v) => v,
        Start::Labels(labels) => {
            let p = data.series_len();
            (0..cfg.clusters)
                .map(|j| {
                    let members = members_of(series, &labels, j);
                    let ones = vec![T::one(); members.len()];
                    mean_prototype(&members, &ones).unwrap_or_else(|_| TimeSeries::zeros(p))
                })
                .collect()
        }
    };

    let memberships = |d: &Array2<T>| -> Result<Array2<T>> {
        if crisp_mode {
            Ok(nearest_prototype(d).to_matrix())
        } else {
            Ok(fuzzy_memberships(d, m)?.memberships().clone())
        }
    };

    let mut d = engine.matrix(&v)?;
    let mut u = memberships(&d)?;
    let mut j_prev = objective(&u, &d, m);
    let mut trace = Vec::new();
    let mut err = T::infinity();
    let all: Vec<&TimeSeries<T>> = series.iter().collect();

    while trace.len() < cfg.max_iter && err > cfg.epsilon {
        u = memberships(&d)?;
        let next = (0..cfg.clusters)
            .map(|i| {
                let weights: Vec<T> = u
                    .row(i)
                    .iter()
                    .map(|&w| if w.is_zero() { w } else { w.powf(m) })
                    .collect();
                mean_prototype(&all, &weights)
            })
            .collect::<Vec<_>>();
        for (i, proto) in next.into_iter().enumerate() {
            match proto {
                Ok(p) => v[i] = p,
                Err(_) => events += 1,
            }
        }
        d = engine.matrix(&v)?;
        let j = objective(&u, &d, m);
        trace.push(j);
        err = (j - j_prev).abs();
        j_prev = j;
    }

    let (crisp, fuzzy) = if crisp_mode {
        (CrispPartition::new(labels_of(&u), cfg.clusters)?, None)
    } else {
        let fp = FuzzyPartition::new(u, T::tolerance(1e-10))?;
        (harden(&fp), Some(fp))
    };
    Ok(ClusterResult {
        crisp,
        fuzzy,
        prototypes: PrototypeSet {
            centroids: v,
            kind: PrototypeKind::Mean,
        },
        iterations: trace.len(),
        converged: err <= cfg.epsilon,
        objective_trace: trace,
        elapsed_seconds: timer.elapsed().as_secs_f64(),
        empty_cluster_events: events,
    })
}

fn labels_of<T: Scalar>(u: &Array2<T>) -> Vec<usize> {
    u.columns()
        .into_iter()
        .map(|col| col.iter().position(|v| !v.is_zero()).unwrap_or(0))
        .collect()
}
