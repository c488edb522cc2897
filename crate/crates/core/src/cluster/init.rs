use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ClusterConfig, Init};
use super::engine::DistanceEngine;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

/// Where a run starts from.
pub(crate) enum Start<T> {
    Prototypes(Vec<TimeSeries<T>>),
    Labels(Vec<usize>),
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn start<T: Scalar>(
    data: &Dataset<T>,
    cfg: &ClusterConfig<T>,
    engine: &DistanceEngine<'_, T>,
) -> Result<Start<T>> {
    let mut rng = rng(cfg.seed);
    let n = data.len();
    let c = cfg.clusters;
    Ok(match &cfg.init {
        Init::SamplePrototypes => Start::Prototypes(
            sample(&mut rng, n, c)
                .into_iter()
                .map(|i| data.series()[i].clone())
                .collect(),
        ),
        Init::RandomAssignment => Start::Labels((0..n).map(|_| rng.gen_range(0..c)).collect()),
        Init::Given(protos) => Start::Prototypes(protos.clone()),
        Init::SpreadPrototypes => Start::Prototypes(
            spread(&mut rng, engine, c)?
                .into_iter()
                .map(|i| data.series()[i].clone())
                .collect(),
        ),
    })
}

/// Indices of `c` distinct series: the first uniform, each next one drawn
/// with probability proportional to its dissimilarity to the nearest pick.
fn spread<T: Scalar>(
    rng: &mut ChaCha8Rng,
    engine: &DistanceEngine<'_, T>,
    c: usize,
) -> Result<Vec<usize>> {
    let n = engine.len();
    let mut picks = vec![rng.gen_range(0..n)];
    let mut nearest = vec![T::infinity(); n];
    while picks.len() < c {
        let last = engine.series(*picks.last().unwrap()).clone();
        let d = engine.matrix(std::slice::from_ref(&last))?;
        for (best, &v) in nearest.iter_mut().zip(d.row(0)) {
            *best = best.min(v.max(T::zero()));
        }
        for &i in &picks {
            nearest[i] = T::zero();
        }
        let total: T = nearest.iter().copied().sum();
        let next = if total > T::zero() {
            let mut target = T::lit(rng.gen::<f64>()) * total;
            let mut chosen = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w > T::zero() {
                    chosen = Some(i);
                    if target < w {
                        break;
                    }
                    target = target - w;
                }
            }
            chosen.expect("positive total has a positive weight")
        } else {
            let rest: Vec<usize> = (0..n).filter(|i| !picks.contains(i)).collect();
            rest[rng.gen_range(0..rest.len())]
        };
        picks.push(next);
    }
    Ok(picks)
}

/// Members of cluster `j` under `labels`.
pub(crate) fn members_of<'a, T>(
    data: &'a [TimeSeries<T>],
    labels: &[usize],
    j: usize,
) -> Vec<&'a TimeSeries<T>> {
    data.iter()
        .zip(labels)
        .filter_map(|(x, &l)| (l == j).then_some(x))
        .collect()
}
