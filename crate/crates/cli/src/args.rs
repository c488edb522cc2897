use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cshape::Algorithm;

#[derive(Debug, Parser)]
#[command(name = "cshape", version, about = "Shape-based time-series clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster one dataset and write a run artifact.
    Cluster(ClusterArgs),
    /// Run every algorithm on every dataset in a directory, several times.
    Benchmark(BenchmarkArgs),
    /// Score a partition against ground-truth labels.
    Validate(ValidateArgs),
    /// Significance tests over a benchmark CSV.
    Stats(StatsArgs),
    /// Emit plot data (delimited text and SVG).
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    SamplePrototypes,
    RandomAssignment,
    SpreadPrototypes,
}

/// Settings shared by `cluster` and `benchmark`.
#[derive(Debug, Clone, Args)]
pub struct RunSettings {
    /// Fuzzifier for fcm, fcs+ and fcs++.
    #[arg(long = "m", default_value_t = 2.0)]
    pub fuzzifier: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Convergence tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = InitArg::SamplePrototypes)]
    pub init: InitArg,
    /// Treat SBD as an unsquared distance in memberships and objectives.
    #[arg(long)]
    pub sbd_unsquared: bool,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// UCR-format file: label first, then the series values.
    #[arg(long)]
    pub input: PathBuf,
    /// Second file appended to the first (e.g. the TEST split).
    #[arg(long)]
    pub merge: Option<PathBuf>,
    #[arg(long, value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    /// Defaults to the number of distinct labels in the input.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub settings: RunSettings,
    /// Artifact path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Directory searched recursively for UCR files.
    #[arg(long, env = "CSHAPE_DATA_DIR")]
    pub data_dir: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "kshape,fcs+,fcs++")]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Run r (from 1) uses seed + r for every algorithm.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cluster count per dataset = number of distinct labels (the default).
    #[arg(long, conflicts_with = "clusters")]
    pub clusters_from_labels: bool,
    /// Fixed cluster count for every dataset.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[command(flatten)]
    pub settings: RunSettings,
    /// Append per-algorithm grand averages.
    #[arg(long)]
    pub summary: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Write 0.00 for cpu_seconds so output is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Manifest of processed and skipped datasets; defaults to
    /// `<output>.manifest` when --output is given.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Index {
    Ri,
    Ari,
    Nmi,
    Vi,
}

impl Index {
    pub const ALL: [Index; 4] = [Index::Ri, Index::Ari, Index::Nmi, Index::Vi];

    pub fn name(self) -> &'static str {
        match self {
            Index::Ri => "ri",
            Index::Ari => "ari",
            Index::Nmi => "nmi",
            Index::Vi => "vi",
        }
    }

    /// Whether smaller values are better.
    pub fn min_optimal(self) -> bool {
        self == Index::Vi
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Ground truth: a label list or a run artifact.
    #[arg(long)]
    pub labels: PathBuf,
    /// Candidate: a run artifact or a label list.
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        value_enum,
        default_value = "ri,ari,nmi,vi"
    )]
    pub indices: Vec<Index>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Wilcoxon,
    Friedman,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// CSV written by `benchmark`.
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long, value_enum)]
    pub test: TestKind,
    #[arg(long, value_enum, default_value_t = Index::Ri)]
    pub metric: Index,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Restrict to these algorithms (in this order).
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algorithms: Vec<Algorithm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Scatter,
    Trace,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    /// Benchmark CSV (scatter).
    #[arg(long)]
    pub results: Option<PathBuf>,
    /// Run artifact (trace).
    #[arg(long)]
    pub artifact: Option<PathBuf>,
    /// Algorithm on the x axis (scatter).
    #[arg(long, value_parser = parse_algorithm)]
    pub x: Option<Algorithm>,
    /// Algorithm on the y axis (scatter).
    #[arg(long, value_parser = parse_algorithm)]
    pub y: Option<Algorithm>,
    #[arg(long, value_enum, default_value_t = Index::Ri)]
    pub metric: Index,
    /// Output prefix; writes `<prefix>.csv` and `<prefix>.svg`.
    #[arg(long)]
    pub output: PathBuf,
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse::<Algorithm>().map_err(|e| e.to_string())
}
