use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Dataset, TimeSeries};

/// Dissimilarity used by the FCM/HCM loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Sbd,
    Euclidean,
}

/// How an SBD value enters the objective and membership update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SbdConvention {
    /// SBD stands in for the squared distance.
    #[default]
    Squared,
    /// SBD is a plain distance and gets squared.
    Unsquared,
}

/// Initial state of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Init<T> {
    /// `c` distinct series drawn uniformly without replacement become the
    /// first centroids.
    SamplePrototypes,
    /// Each series gets a uniform random label; crisp shape-based runs start
    /// from all-zero centroids.
    RandomAssignment,
    /// `c` distinct series chosen one at a time, each drawn with probability
    /// proportional to its dissimilarity to the nearest series already
    /// chosen (the first uniformly).
    SpreadPrototypes,
    /// Caller-supplied starting centroids.
    Given(Vec<TimeSeries<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig<T> {
    pub clusters: usize,
    /// Fuzzifier `m >= 1`; `m = 1` selects crisp semantics in [`super::fcm`].
    pub fuzzifier: T,
    pub max_iter: usize,
    pub epsilon: T,
    pub seed: u64,
    pub distance: DistanceKind,
    pub init: Init<T>,
    pub convention: SbdConvention,
}

impl<T: Scalar> ClusterConfig<T> {
    /// Defaults: `m = 2`, 100 iterations, `epsilon = 1e-6`, seed 0, SBD,
    /// sampled-prototype initialisation.
    pub fn new(clusters: usize) -> Self {
        Self {
            clusters,
            fuzzifier: T::lit(2.0),
            max_iter: 100,
            epsilon: T::lit(1e-6),
            seed: 0,
            distance: DistanceKind::Sbd,
            init: Init::SamplePrototypes,
            convention: SbdConvention::Squared,
        }
    }

    pub fn with_fuzzifier(mut self, m: T) -> Self {
        self.fuzzifier = m;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_distance(mut self, distance: DistanceKind) -> Self {
        self.distance = distance;
        self
    }

    pub fn with_init(mut self, init: Init<T>) -> Self {
        self.init = init;
        self
    }

    pub fn with_convention(mut self, convention: SbdConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Checks the settings against a dataset. `allow_c_eq_n` relaxes
    /// `c < n` to `c <= n` (k-Shape has no such restriction).
    pub(crate) fn validate(&self, data: &Dataset<T>, allow_c_eq_n: bool) -> Result<()> {
        let n = data.len();
        let c = self.clusters;
        if c < 2 {
            return Err(Error::Config(format!("need at least 2 clusters, got {c}")));
        }
        if c > n || (c == n && !allow_c_eq_n) {
            return Err(Error::Config(format!(
                "cluster count {c} must be below the number of series {n}"
            )));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !(self.fuzzifier >= T::one()) || !self.fuzzifier.is_finite() {
            return Err(Error::Config(format!(
                "fuzzifier must be at least 1, got {}",
                self.fuzzifier
            )));
        }
        if let Init::Given(protos) = &self.init {
            if protos.len() != c {
                return Err(Error::Config(format!(
                    "{} initial prototypes given for {c} clusters",
                    protos.len()
                )));
            }
            let p = data.series_len();
            if let Some(bad) = protos.iter().find(|v| v.len() != p) {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: bad.len(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn require_fuzzy(&self) -> Result<()> {
        if self.fuzzifier > T::one() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "fuzzy algorithms need m > 1, got {}",
                self.fuzzifier
            )))
        }
    }
}
