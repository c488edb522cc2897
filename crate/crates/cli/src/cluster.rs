use std::path::Path;

use cshape::{load_ucr, Algorithm, ClusterConfigF64, DatasetF64, Init, SbdConvention};

use crate::args::{ClusterArgs, InitArg, RunSettings};
use crate::artifact::{ConfigEcho, RunArtifact};
use crate::error::{write_file, CliError, CliResult};

pub fn init_name(init: InitArg) -> &'static str {
    match init {
        InitArg::SamplePrototypes => "sample-prototypes",
        InitArg::RandomAssignment => "random-assignment",
        InitArg::SpreadPrototypes => "spread-prototypes",
    }
}

/// Library configuration and its echo for `clusters` and `seed`.
pub fn build_config(
    algorithm: Algorithm,
    clusters: usize,
    seed: u64,
    s: &RunSettings,
) -> (ClusterConfigF64, ConfigEcho) {
    let init = match s.init {
        InitArg::SamplePrototypes => Init::SamplePrototypes,
        InitArg::RandomAssignment => Init::RandomAssignment,
        InitArg::SpreadPrototypes => Init::SpreadPrototypes,
    };
    let convention = if s.sbd_unsquared {
        SbdConvention::Unsquared
    } else {
        SbdConvention::Squared
    };
    let cfg = ClusterConfigF64::new(clusters)
        .with_fuzzifier(s.fuzzifier)
        .with_max_iter(s.max_iter)
        .with_epsilon(s.tol)
        .with_seed(seed)
        .with_init(init)
        .with_convention(convention);
    let echo = ConfigEcho {
        algorithm: algorithm.name().to_string(),
        clusters,
        fuzzifier: s.fuzzifier,
        max_iter: s.max_iter,
        tol: s.tol,
        seed,
        init: init_name(s.init).to_string(),
        sbd_convention: if s.sbd_unsquared {
            "unsquared"
        } else {
            "squared"
        }
        .to_string(),
    };
    (cfg, echo)
}

pub fn load(input: &Path, merge: Option<&Path>) -> CliResult<DatasetF64> {
    Ok(load_ucr(input, merge)?)
}

pub fn cluster_count(data: &DatasetF64, requested: Option<usize>) -> CliResult<usize> {
    requested.or_else(|| data.class_count()).ok_or_else(|| {
        CliError::Config("--clusters is required when the input has no labels".into())
    })
}

pub fn run(args: &ClusterArgs) -> CliResult<String> {
    let data = load(&args.input, args.merge.as_deref())?;
    let clusters = cluster_count(&data, args.clusters)?;
    let (cfg, echo) = build_config(args.algorithm, clusters, args.seed, &args.settings);
    let result = args.algorithm.run(&data, &cfg)?;
    let text = RunArtifact::from_result(data.name(), echo, &result).to_text();
    match &args.output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
