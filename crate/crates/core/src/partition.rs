//! Fuzzy and crisp c-partitions of `n` objects.
//!
//! Distance matrices handed to this module are `c x n` (row = cluster,
//! column = object) and hold squared dissimilarities. The membership update
//! therefore raises distance ratios to `1/(m-1)`, which is the usual
//! `2/(m-1)` on unsquared norms. Ties in every argmin/argmax go to the
//! lowest cluster index.

use ndarray::{Array2, ArrayView1, Axis};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `c x n` membership matrix with entries in `[0, 1]` and unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartition<T> {
    memberships: Array2<T>,
}

impl<T: Scalar> FuzzyPartition<T> {
    /// Wraps a membership matrix after checking the column-sum and range
    /// constraints (to `tolerance`). Row sums are not required to be
    /// positive here; see [`FuzzyPartition::is_valid`].
    pub fn new(memberships: Array2<T>, tolerance: T) -> Result<Self> {
        for (k, col) in memberships.axis_iter(Axis(1)).enumerate() {
            if col
                .iter()
                .any(|&u| !(u >= -tolerance && u <= T::one() + tolerance))
            {
                return Err(Error::InvalidParameter(format!(
                    "membership outside [0, 1] in column {k}"
                )));
            }
            let s: T = col.sum();
            if (s - T::one()).abs() > tolerance {
                return Err(Error::InvalidParameter(format!(
                    "column {k} sums to {s}, not 1"
                )));
            }
        }
        Ok(Self { memberships })
    }

    pub fn from_crisp(crisp: &CrispPartition) -> Self {
        Self {
            memberships: crisp.to_matrix(),
        }
    }

    pub fn memberships(&self) -> &Array2<T> {
        &self.memberships
    }

    pub fn clusters(&self) -> usize {
        self.memberships.nrows()
    }

    pub fn objects(&self) -> usize {
        self.memberships.ncols()
    }

    pub fn column(&self, k: usize) -> ArrayView1<'_, T> {
        self.memberships.column(k)
    }

    /// All partition constraints: entries in `[0, 1]`, column sums 1 within
    /// `tolerance`, every row sum strictly positive.
    pub fn is_valid(&self, tolerance: T) -> bool {
        let cols_ok = self.memberships.axis_iter(Axis(1)).all(|col| {
            col.iter().all(|&u| u >= T::zero() && u <= T::one())
                && (col.sum() - T::one()).abs() <= tolerance
        });
        let rows_ok = self
            .memberships
            .axis_iter(Axis(0))
            .all(|row| row.sum() > T::zero());
        cols_ok && rows_ok
    }
}

/// Hard partition stored as one zero-based cluster index per object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrispPartition {
    labels: Vec<usize>,
    clusters: usize,
}

impl CrispPartition {
    pub fn new(labels: Vec<usize>, clusters: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= clusters) {
            return Err(Error::InvalidParameter(format!(
                "label {bad} out of range for {clusters} clusters"
            )));
        }
        Ok(Self { labels, clusters })
    }

    /// Builds a partition whose cluster count is `max(label) + 1`.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let clusters = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self { labels, clusters }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.clusters];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Every cluster has at least one member.
    pub fn is_non_degenerate(&self) -> bool {
        self.cluster_sizes().iter().all(|&s| s > 0)
    }

    /// Indices of the objects in cluster `j`.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(k, &l)| (l == j).then_some(k))
            .collect()
    }

    /// The equivalent 0/1 matrix in `M_hcn`.
    pub fn to_matrix<T: Scalar>(&self) -> Array2<T> {
        let mut u = Array2::zeros((self.clusters, self.labels.len()));
        for (k, &l) in self.labels.iter().enumerate() {
            u[[l, k]] = T::one();
        }
        u
    }
}

fn check_distances<T: Scalar>(distances: &Array2<T>) -> Result<()> {
    if distances.nrows() == 0 {
        return Err(Error::InvalidParameter("no clusters".into()));
    }
    if distances
        .iter()
        .any(|&d| !(d >= T::zero()) || !d.is_finite())
    {
        return Err(Error::InvalidParameter(
            "distances must be finite and nonnegative".into(),
        ));
    }
    Ok(())
}

/// Fuzzy membership update for squared dissimilarities and fuzzifier `m > 1`.
///
/// A column with `z >= 1` zero distances gives `1/z` to each of those
/// clusters and 0 elsewhere.
pub fn fuzzy_memberships<T: Scalar>(distances: &Array2<T>, m: T) -> Result<FuzzyPartition<T>> {
    if !(m > T::one()) || !m.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fuzzifier must exceed 1, got {m}"
        )));
    }
    check_distances(distances)?;
    let exponent = T::one() / (m - T::one());
    let (c, n) = distances.dim();
    let mut u = Array2::zeros((c, n));
    for k in 0..n {
        let col = distances.column(k);
        let zeros = col.iter().filter(|d| d.is_zero()).count();
        if zeros > 0 {
            let share = T::one() / T::from_usize_lossy(zeros);
            for i in 0..c {
                if col[i].is_zero() {
                    u[[i, k]] = share;
                }
            }
            continue;
        }
        for i in 0..c {
            let di = col[i];
            let denom: T = col.iter().map(|&dj| (di / dj).powf(exponent)).sum();
            u[[i, k]] = T::one() / denom;
        }
        let total: T = u.column(k).sum();
        u.column_mut(k).mapv_inplace(|v| v / total);
    }
    Ok(FuzzyPartition { memberships: u })
}

/// Labels each object with its nearest prototype.
pub fn nearest_prototype<T: Scalar>(distances: &Array2<T>) -> CrispPartition {
    let labels = distances
        .axis_iter(Axis(1))
        .map(|col| argmin(col.iter().copied()))
        .collect();
    CrispPartition {
        labels,
        clusters: distances.nrows(),
    }
}

/// Maximum-membership hardening.
pub fn harden<T: Scalar>(u: &FuzzyPartition<T>) -> CrispPartition {
    harden_matrix(&u.memberships)
}

/// Column-wise argmax of any `c x n` score matrix, lowest index on ties.
pub fn harden_matrix<T: Scalar>(scores: &Array2<T>) -> CrispPartition {
    let labels = scores
        .axis_iter(Axis(1))
        .map(|col| argmax(col.iter().copied()))
        .collect();
    CrispPartition {
        labels,
        clusters: scores.nrows(),
    }
}

fn argmin<T: Scalar>(values: impl Iterator<Item = T>) -> usize {
    let mut best = (0, T::infinity());
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn argmax<T: Scalar>(values: impl Iterator<Item = T>) -> usize {
    let mut best = (0, T::neg_infinity());
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
