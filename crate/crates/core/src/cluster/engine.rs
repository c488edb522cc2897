use ndarray::Array2;
use rayon::prelude::*;

use super::config::{DistanceKind, SbdConvention};
use crate::error::Result;
use crate::sbd::{SbdPlan, Spectrum};
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

/// Computes `c x n` squared-dissimilarity matrices between centroids and a
/// fixed dataset, caching the data spectra for SBD.
pub struct DistanceEngine<'a, T: Scalar> {
    data: &'a [TimeSeries<T>],
    kind: DistanceKind,
    convention: SbdConvention,
    plan: SbdPlan<T>,
    spectra: Vec<Spectrum<T>>,
}

impl<'a, T: Scalar> DistanceEngine<'a, T> {
    pub fn new(
        data: &'a Dataset<T>,
        kind: DistanceKind,
        convention: SbdConvention,
    ) -> Result<Self> {
        let plan = SbdPlan::new(data.series_len());
        let spectra = match kind {
            DistanceKind::Sbd => data
                .series()
                .par_iter()
                .map(|x| plan.spectrum(x))
                .collect::<Result<Vec<_>>>()?,
            DistanceKind::Euclidean => Vec::new(),
        };
        Ok(Self {
            data: data.series(),
            kind,
            convention,
            plan,
            spectra,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn series(&self, k: usize) -> &TimeSeries<T> {
        &self.data[k]
    }

    pub fn plan(&self) -> &SbdPlan<T> {
        &self.plan
    }

    pub fn matrix(&self, centroids: &[TimeSeries<T>]) -> Result<Array2<T>> {
        let c = centroids.len();
        let n = self.data.len();
        let columns: Vec<Vec<T>> = match self.kind {
            DistanceKind::Euclidean => self
                .data
                .par_iter()
                .map(|x| centroids.iter().map(|v| squared_euclidean(x, v)).collect())
                .collect(),
            DistanceKind::Sbd => {
                let cs = centroids
                    .iter()
                    .map(|v| self.plan.spectrum(v))
                    .collect::<Result<Vec<_>>>()?;
                self.spectra
                    .par_iter()
                    .map(|sx| {
                        cs.iter()
                            .map(|sv| {
                                let d = self.plan.distance_spectra(sv, sx).0;
                                match self.convention {
                                    SbdConvention::Squared => d,
                                    SbdConvention::Unsquared => d * d,
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        Ok(Array2::from_shape_fn((c, n), |(i, k)| columns[k][i]))
    }
}

pub(crate) fn squared_euclidean<T: Scalar>(x: &TimeSeries<T>, v: &TimeSeries<T>) -> T {
    x.iter()
        .zip(v.iter())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum()
}

/// `sum_ik u_ik^m d_ik`.
pub(crate) fn objective<T: Scalar>(u: &Array2<T>, d: &Array2<T>, m: T) -> T {
    u.iter()
        .zip(d.iter())
        .map(|(&uik, &dik)| {
            if uik.is_zero() {
                T::zero()
            } else {
                uik.powf(m) * dik
            }
        })
        .sum()
}

/// Objective of a crisp labelling: each object's distance to its own cluster.
pub(crate) fn crisp_objective<T: Scalar>(labels: &[usize], d: &Array2<T>) -> T {
    labels.iter().enumerate().map(|(k, &l)| d[[l, k]]).sum()
}
