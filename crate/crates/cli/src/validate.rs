use std::collections::HashMap;
use std::fmt::Write as _;

use cshape::CviReport;

use crate::args::{Index, ValidateArgs};
use crate::data::read_labels;
use crate::error::{CliError, CliResult};

fn codes(labels: &[String]) -> Vec<usize> {
    let mut seen = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = seen.len();
            *seen.entry(l.as_str()).or_insert(next)
        })
        .collect()
}

pub fn run(args: &ValidateArgs) -> CliResult<String> {
    let truth = read_labels(&args.labels)?;
    let candidate = read_labels(&args.partition)?;
    if truth.len() != candidate.len() {
        return Err(CliError::Parse(format!(
            "{} ground-truth labels but {} partition labels",
            truth.len(),
            candidate.len()
        )));
    }
    if truth.len() < 2 {
        return Err(CliError::Parse("need at least 2 labelled objects".into()));
    }
    let report = CviReport::compare(&codes(&candidate), &codes(&truth))?;
    let mut out = String::new();
    for idx in &args.indices {
        let v = match idx {
            Index::Ri => report.ri,
            Index::Ari => report.ari,
            Index::Nmi => report.nmi,
            Index::Vi => report.vi,
        };
        let _ = writeln!(out, "{} {v:.6}", idx.name());
    }
    Ok(out)
}
