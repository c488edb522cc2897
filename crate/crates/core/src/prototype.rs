//! Cluster centroids: shape extraction and weighted means.
//!
//! Shape extraction aligns every member to a reference with SBD, stacks the
//! aligned rows into `X'`, and returns the dominant eigenvector of
//! `M = Q^T (X'^T X') Q` with `Q = I - (1/p) 11^T`. Since `X' Q` is `X'` with
//! each row centred, `M = Y^T Y` for the row-centred matrix `Y`; the solver
//! applies `M` through `Y` when the cluster has fewer members than samples.
//!
//! The members loop runs against one fixed reference (the cluster's current
//! centroid). The extracted vector is z-normalized and its sign fixed to the
//! one closer in SBD to the reference, or, when the reference is all zeros,
//! the one with nonnegative inner product with the first member.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::sbd::SbdPlan;
use crate::scalar::Scalar;
use crate::series::{z_normalize, TimeSeries};

/// Tolerance on the distance between successive unit iterates.
pub const POWER_TOLERANCE: f64 = 1e-10;
/// Step cap for power iteration.
pub const POWER_MAX_STEPS: usize = 10_000;

/// Centroid kind carried by a [`PrototypeSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrototypeKind {
    Mean,
    ShapeExtracted,
}

/// The `c` centroids of a clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSet<T> {
    pub centroids: Vec<TimeSeries<T>>,
    pub kind: PrototypeKind,
}

impl<T: Scalar> PrototypeSet<T> {
    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    /// Frobenius norm of the difference between two centroid matrices.
    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.centroids
            .iter()
            .zip(&other.centroids)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(&u, &v)| (u - v) * (u - v)))
            .sum::<T>()
            .sqrt()
    }
}

/// The Rayleigh-quotient problem built from SBD-aligned cluster members.
#[derive(Debug, Clone)]
pub struct RayleighProblem<T> {
    aligned: Array2<T>,
    centred: Array2<T>,
}

/// Top eigenpair found by power iteration.
#[derive(Debug, Clone)]
pub struct Eigenpair<T> {
    pub value: T,
    /// Unit-norm eigenvector.
    pub vector: Array1<T>,
    pub steps: usize,
    pub converged: bool,
}

impl<T: Scalar> RayleighProblem<T> {
    /// Stacks aligned member rows (all of length `p`).
    pub fn from_aligned(rows: &[TimeSeries<T>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyCluster)?;
        let p = first.len();
        let mut aligned = Array2::zeros((rows.len(), p));
        for (mut dst, row) in aligned.axis_iter_mut(Axis(0)).zip(rows) {
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            dst.assign(&Array1::from(row.as_slice().to_vec()));
        }
        let mut centred = aligned.clone();
        for mut row in centred.axis_iter_mut(Axis(0)) {
            let mu = row.sum() / T::from_usize_lossy(p);
            row.mapv_inplace(|v| v - mu);
        }
        Ok(Self { aligned, centred })
    }

    pub fn series_len(&self) -> usize {
        self.aligned.ncols()
    }

    /// `S = X'^T X'`.
    pub fn s(&self) -> Array2<T> {
        self.aligned.t().dot(&self.aligned)
    }

    /// The centring matrix `Q = I - (1/p) 11^T`.
    pub fn q(&self) -> Array2<T> {
        let p = self.series_len();
        let off = T::one() / T::from_usize_lossy(p);
        Array2::from_shape_fn((p, p), |(i, j)| if i == j { T::one() - off } else { -off })
    }

    /// `M = Q^T S Q`, formed as `Y^T Y` with `Y` the row-centred members.
    pub fn m(&self) -> Array2<T> {
        self.centred.t().dot(&self.centred)
    }

    pub fn rayleigh_quotient(&self, v: &Array1<T>) -> T {
        let vv = v.dot(v);
        if vv.is_zero() {
            return T::zero();
        }
        let yv = self.centred.dot(v);
        yv.dot(&yv) / vv
    }

    /// Dominant eigenpair of `M` by power iteration. `M` is positive
    /// semidefinite, so the largest-magnitude eigenvalue is the largest one.
    pub fn dominant_eigenpair(&self, tolerance: f64, max_steps: usize) -> Eigenpair<T> {
        let p = self.series_len();
        let explicit = (self.centred.nrows() >= p).then(|| self.m());
        let apply = |v: &Array1<T>| -> Array1<T> {
            match &explicit {
                Some(m) => m.dot(v),
                None => self.centred.t().dot(&self.centred.dot(v)),
            }
        };
        let tol = T::tolerance(tolerance);

        let mut v = self.start_vector();
        let mut w = apply(&v);
        let mut norm = w.dot(&w).sqrt();
        if norm.is_zero() {
            return Eigenpair {
                value: T::zero(),
                vector: v,
                steps: 0,
                converged: true,
            };
        }
        w.mapv_inplace(|x| x / norm);
        v = w;
        let mut steps = 1;
        let mut converged = false;
        while steps < max_steps {
            let mut next = apply(&v);
            norm = next.dot(&next).sqrt();
            if norm.is_zero() {
                converged = true;
                break;
            }
            next.mapv_inplace(|x| x / norm);
            let delta = (&next - &v).mapv(|x| x * x).sum().sqrt();
            v = next;
            steps += 1;
            if delta < tol {
                converged = true;
                break;
            }
        }
        let value = self.rayleigh_quotient(&v);
        Eigenpair {
            value,
            vector: v,
            steps,
            converged,
        }
    }

    /// Sum of centred rows plus a small fixed non-degenerate probe, so the
    /// start is never orthogonal to the whole dominant eigenspace by accident.
    fn start_vector(&self) -> Array1<T> {
        let p = self.series_len();
        let sum = self.centred.sum_axis(Axis(0));
        let scale = sum.iter().fold(T::zero(), |a, v| a.max(v.abs()));
        let scale = if scale.is_zero() { T::one() } else { scale };
        let probe_weight = scale * T::lit(1e-3);
        let mut v = Array1::from_shape_fn(p, |j| {
            let t = T::from_usize_lossy(j);
            sum[j] + probe_weight * (t * T::lit(1.618_033_988_75) + T::lit(0.3)).sin()
        });
        let n = v.dot(&v).sqrt();
        v.mapv_inplace(|x| x / n);
        v
    }
}

/// Full record of one shape extraction, for inspection and testing.
#[derive(Debug, Clone)]
pub struct ShapeExtraction<T> {
    pub centroid: TimeSeries<T>,
    pub problem: RayleighProblem<T>,
    pub eigenpair: Eigenpair<T>,
    pub aligned: Vec<TimeSeries<T>>,
}

/// Shape-extracted centroid of `members`, aligned against `reference`.
///
/// Fails with [`Error::EmptyCluster`] when there are no members; callers
/// decide what an empty cluster means for them.
pub fn shape_extract<T: Scalar>(
    members: &[&TimeSeries<T>],
    reference: &TimeSeries<T>,
) -> Result<TimeSeries<T>> {
    let plan = SbdPlan::new(reference.len());
    shape_extract_detailed(&plan, members, reference).map(|s| s.centroid)
}

pub fn shape_extract_detailed<T: Scalar>(
    plan: &SbdPlan<T>,
    members: &[&TimeSeries<T>],
    reference: &TimeSeries<T>,
) -> Result<ShapeExtraction<T>> {
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let p = reference.len();
    if let Some(bad) = members.iter().find(|m| m.len() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: bad.len(),
        });
    }

    let aligned: Vec<TimeSeries<T>> = if reference.is_zero() {
        members.iter().map(|&m| m.clone()).collect()
    } else {
        let sref = plan.spectrum(reference)?;
        members
            .iter()
            .map(|m| {
                let sm = plan.spectrum(m)?;
                Ok(plan.sbd_spectra(&sref, &sm, m).aligned)
            })
            .collect::<Result<_>>()?
    };

    let problem = RayleighProblem::from_aligned(&aligned)?;
    let eigenpair = problem.dominant_eigenpair(POWER_TOLERANCE, POWER_MAX_STEPS);
    let candidate = z_normalize(&eigenpair.vector.to_vec())?;

    let flip = if candidate.is_zero() {
        false
    } else if reference.is_zero() {
        let dot: T = candidate
            .iter()
            .zip(members[0].iter())
            .map(|(&a, &b)| a * b)
            .sum();
        dot < T::zero()
    } else {
        let sref = plan.spectrum(reference)?;
        let plus = plan.distance_spectra(&sref, &plan.spectrum(&candidate)?).0;
        let minus = plan
            .distance_spectra(&sref, &plan.spectrum(&candidate.negated())?)
            .0;
        minus < plus
    };
    let centroid = if flip { candidate.negated() } else { candidate };

    Ok(ShapeExtraction {
        centroid,
        problem,
        eigenpair,
        aligned,
    })
}

/// Weighted elementwise mean `sum_k w_k x_k / sum_k w_k`.
pub fn mean_prototype<T: Scalar>(
    members: &[&TimeSeries<T>],
    weights: &[T],
) -> Result<TimeSeries<T>> {
    if members.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: members.len(),
            found: weights.len(),
        });
    }
    let first = members.first().ok_or(Error::EmptyCluster)?;
    let p = first.len();
    if weights.iter().any(|w| *w < T::zero() || !w.is_finite()) {
        return Err(Error::InvalidParameter(
            "weights must be finite and nonnegative".into(),
        ));
    }
    let total: T = weights.iter().copied().sum();
    if total <= T::zero() {
        return Err(Error::DegenerateWeights);
    }
    let mut acc = vec![T::zero(); p];
    for (m, &w) in members.iter().zip(weights) {
        if m.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: m.len(),
            });
        }
        if w.is_zero() {
            continue;
        }
        for (a, &x) in acc.iter_mut().zip(m.iter()) {
            *a = *a + w * x;
        }
    }
    TimeSeries::new(acc.into_iter().map(|a| a / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ts(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weighted_mean_by_hand() {
        let a = ts(&[1.0, 0.0]);
        let b = ts(&[0.0, 1.0]);
        let m = mean_prototype(&[&a, &b], &[3.0, 1.0]).unwrap();
        assert_abs_diff_eq!(m[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(m[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn mean_of_opposites_is_zero() {
        let a = ts(&[1.0, -2.0, 0.5]);
        let m = mean_prototype(&[&a, &a.negated()], &[1.0, 1.0]).unwrap();
        assert!(m.is_zero());
        let single = mean_prototype(&[&a], &[1.0]).unwrap();
        assert_eq!(single, a);
    }

    #[test]
    fn mean_errors() {
        let a = ts(&[1.0, 2.0]);
        assert_eq!(
            mean_prototype(&[&a, &a], &[0.0, 0.0]),
            Err(Error::DegenerateWeights)
        );
        assert!(mean_prototype(&[&a], &[1.0, 2.0]).is_err());
        assert!(mean_prototype(&[&a], &[-1.0]).is_err());
        assert_eq!(mean_prototype::<f64>(&[], &[]), Err(Error::EmptyCluster));
    }

    #[test]
    fn empty_cluster_signalled() {
        let r = ts(&[1.0, -1.0, 0.0]);
        assert_eq!(shape_extract(&[], &r), Err(Error::EmptyCluster));
    }

    #[test]
    fn single_member_zero_reference() {
        let x = z_normalize(&[0.0, 1.0, 3.0, 2.0, -1.0, 0.5]).unwrap();
        let out = shape_extract(&[&x], &TimeSeries::zeros(6)).unwrap();
        for (a, b) in out.iter().zip(x.iter()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-8);
        }
    }

    #[test]
    fn identical_members_return_member() {
        let x = z_normalize(&[0.2, 1.0, -0.5, 2.0, -1.5, 0.1, 0.9]).unwrap();
        let out = shape_extract(&[&x, &x], &x).unwrap();
        for (a, b) in out.iter().zip(x.iter()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-8);
        }
    }

    #[test]
    fn q_centres_and_m_matches_definition() {
        let rows = vec![ts(&[1.0, 2.0, 0.0]), ts(&[0.5, -1.0, 3.0])];
        let prob = RayleighProblem::from_aligned(&rows).unwrap();
        let q = prob.q();
        let direct = q.t().dot(&prob.s()).dot(&q);
        let m = prob.m();
        for (a, b) in direct.iter().zip(m.iter()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn frobenius_distance_between_sets() {
        let a = PrototypeSet {
            centroids: vec![ts(&[1.0, 0.0]), ts(&[0.0, 0.0])],
            kind: PrototypeKind::Mean,
        };
        let b = PrototypeSet {
            centroids: vec![ts(&[0.0, 0.0]), ts(&[0.0, 1.0])],
            kind: PrototypeKind::Mean,
        };
        assert_abs_diff_eq!(a.frobenius_distance(&b), 2f64.sqrt(), epsilon = 1e-15);
    }
}
