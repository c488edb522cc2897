//! Command-line front end for `cshape`: single runs, benchmark sweeps over
//! UCR-format archives, validity scoring, significance tests and plot data.
//!
//! Every command returns the text it would print, so the binary is a thin
//! wrapper and the commands can be driven directly from tests.

pub mod args;
pub mod artifact;
pub mod benchmark;
pub mod cluster;
pub mod data;
pub mod error;
pub mod plot;
pub mod stats;
pub mod validate;

pub use args::{Cli, Command};
pub use artifact::RunArtifact;
pub use benchmark::{BenchmarkRecord, CSV_HEADER};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Cluster(a) => cluster::run(a),
        Command::Benchmark(a) => benchmark::run(a),
        Command::Validate(a) => validate::run(a),
        Command::Stats(a) => stats::run(a),
        Command::Plot(a) => plot::run(a),
    }
}
