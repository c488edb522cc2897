//! Shape-based clustering of finite, equal-length time series.
//!
//! The crate provides the shape-based distance (SBD), shape-extracted
//! centroids, the crisp k-Shape algorithm, its fuzzy derivatives FCS+ and
//! FCS++, and a Euclidean FCM/HCM baseline, plus external validity indices
//! and the Wilcoxon and Friedman tests used to compare them.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! and `*F32` aliases below name the concrete types.
//!
//! ```
//! use cshape::{kshape, ClusterConfig, DatasetF64};
//!
//! let rows: Vec<Vec<f64>> = (0..12)
//!     .map(|k| (0..32).map(|t| ((t + k % 3) as f64 * if k < 6 { 0.4 } else { 1.3 }).sin()).collect())
//!     .collect();
//! let data = DatasetF64::from_raw("demo", &rows, None).unwrap();
//! let result = kshape(&data, &ClusterConfig::new(2).with_seed(1)).unwrap();
//! assert_eq!(result.crisp.len(), 12);
//! ```

pub mod cluster;
pub mod error;
pub mod partition;
pub mod prototype;
pub mod sbd;
pub mod scalar;
pub mod series;
pub mod significance;
pub mod validity;

pub use cluster::{
    fcm, fcs_plus, fcs_plus_plus, hcm, kshape, Algorithm, ClusterConfig, ClusterResult,
    DistanceKind, Init, SbdConvention,
};
pub use error::{Error, Result};
pub use partition::{
    fuzzy_memberships, harden, harden_matrix, nearest_prototype, CrispPartition, FuzzyPartition,
};
pub use prototype::{mean_prototype, shape_extract, PrototypeKind, PrototypeSet, RayleighProblem};
pub use sbd::{fft_cross_correlate, sbd, CrossCorrelation, SbdPlan, SbdResult};
pub use scalar::Scalar;
pub use series::{load_ucr, parse_ucr, z_normalize, Dataset, TimeSeries};
pub use significance::{friedman, wilcoxon_signed_rank, FriedmanOutcome, WilcoxonOutcome};
pub use validity::{
    adjusted_rand, contingency, nmi_max, pair_counts, rand_index, variation_of_information,
    ContingencyTable, CviReport, PairCounts,
};

pub type TimeSeriesF64 = TimeSeries<f64>;
pub type TimeSeriesF32 = TimeSeries<f32>;
pub type DatasetF64 = Dataset<f64>;
pub type DatasetF32 = Dataset<f32>;
pub type FuzzyPartitionF64 = FuzzyPartition<f64>;
pub type FuzzyPartitionF32 = FuzzyPartition<f32>;
pub type PrototypeSetF64 = PrototypeSet<f64>;
pub type PrototypeSetF32 = PrototypeSet<f32>;
pub type ClusterConfigF64 = ClusterConfig<f64>;
pub type ClusterConfigF32 = ClusterConfig<f32>;
pub type ClusterResultF64 = ClusterResult<f64>;
pub type ClusterResultF32 = ClusterResult<f32>;
pub type SbdResultF64 = SbdResult<f64>;
pub type SbdResultF32 = SbdResult<f32>;
