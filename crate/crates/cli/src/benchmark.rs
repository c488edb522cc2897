use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use cshape::{Algorithm, CviReport, DatasetF64};
use rayon::prelude::*;

use crate::args::{BenchmarkArgs, Index};
use crate::cluster::{build_config, load};
use crate::data::discover;
use crate::error::{write_file, CliError, CliResult};

pub const CSV_HEADER: &str = "dataset,algorithm,run,seed,ri,ari,nmi,vi,iterations,cpu_seconds";
pub const SUMMARY_MARKER: &str = "# grand averages";
pub const SUMMARY_HEADER: &str = "algorithm,ri,ari,nmi,vi";

/// One (dataset, algorithm, run) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub ri: f64,
    pub ari: f64,
    pub nmi: f64,
    pub vi: f64,
    pub iterations: usize,
    pub cpu_seconds: f64,
}

impl BenchmarkRecord {
    pub fn metric(&self, index: Index) -> f64 {
        match index {
            Index::Ri => self.ri,
            Index::Ari => self.ari,
            Index::Nmi => self.nmi,
            Index::Vi => self.vi,
        }
    }
}

/// Per-algorithm means of the four indices over all records, in order of
/// first appearance.
pub fn grand_averages(records: &[BenchmarkRecord]) -> Vec<(Algorithm, [f64; 4])> {
    let mut order = Vec::new();
    let mut sums: HashMap<Algorithm, ([f64; 4], usize)> = HashMap::new();
    for r in records {
        let entry = sums.entry(r.algorithm).or_insert_with(|| {
            order.push(r.algorithm);
            ([0.0; 4], 0)
        });
        for (acc, idx) in entry.0.iter_mut().zip(Index::ALL) {
            *acc += r.metric(idx);
        }
        entry.1 += 1;
    }
    order
        .into_iter()
        .map(|a| {
            let (s, n) = sums[&a];
            (a, s.map(|v| v / n as f64))
        })
        .collect()
}

pub fn write_csv(records: &[BenchmarkRecord], summary: bool) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for r in records {
        w.write_record([
            r.dataset.clone(),
            r.algorithm.name().to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.ri.to_string(),
            r.ari.to_string(),
            r.nmi.to_string(),
            r.vi.to_string(),
            r.iterations.to_string(),
            format!("{:.2}", r.cpu_seconds),
        ])
        .expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 fields");
    if summary {
        out.push('\n');
        out.push_str(SUMMARY_MARKER);
        out.push('\n');
        out.push_str(SUMMARY_HEADER);
        out.push('\n');
        for (alg, m) in grand_averages(records) {
            let _ = writeln!(out, "{},{},{},{},{}", alg.name(), m[0], m[1], m[2], m[3]);
        }
    }
    out
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: usize) -> CliResult<T> {
    let raw = rec.get(i).unwrap_or_default();
    raw.parse().map_err(|_| {
        CliError::Parse(format!(
            "results line {line}: bad {} value {raw:?}",
            CSV_HEADER.split(',').nth(i).unwrap_or("?")
        ))
    })
}

/// Reads the record section of a benchmark CSV, ignoring any summary.
pub fn parse_csv(text: &str) -> CliResult<Vec<BenchmarkRecord>> {
    let body: String = text
        .lines()
        .take_while(|l| !l.trim().is_empty())
        .flat_map(|l| [l, "\n"])
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("results header: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(CliError::Parse(format!(
            "results header does not match {CSV_HEADER:?}"
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Parse(format!("results line {line}: {e}")))?;
        let algorithm = rec
            .get(1)
            .unwrap_or_default()
            .parse::<Algorithm>()
            .map_err(|e| CliError::Parse(format!("results line {line}: {e}")))?;
        out.push(BenchmarkRecord {
            dataset: rec.get(0).unwrap_or_default().to_string(),
            algorithm,
            run: field(&rec, 2, line)?,
            seed: field(&rec, 3, line)?,
            ri: field(&rec, 4, line)?,
            ari: field(&rec, 5, line)?,
            nmi: field(&rec, 6, line)?,
            vi: field(&rec, 7, line)?,
            iterations: field(&rec, 8, line)?,
            cpu_seconds: field(&rec, 9, line)?,
        });
    }
    Ok(out)
}

struct Loaded {
    data: DatasetF64,
    clusters: usize,
}

fn describe(primary: &std::path::Path, merge: Option<&PathBuf>) -> String {
    match merge {
        Some(m) => format!("{}+{}", primary.display(), m.display()),
        None => primary.display().to_string(),
    }
}

pub fn run(args: &BenchmarkArgs) -> CliResult<String> {
    if args.algorithms.is_empty() {
        return Err(CliError::Config("no algorithms given".into()));
    }
    if args.runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    let sources = discover(&args.data_dir)?;
    let mut manifest = String::new();
    let mut loaded = Vec::new();
    for src in &sources {
        let origin = describe(&src.primary, src.merge.as_ref());
        let outcome = load(&src.primary, src.merge.as_deref()).and_then(|data| {
            let clusters = match args.clusters {
                Some(c) => c,
                None => data.class_count().unwrap_or(0),
            };
            if clusters < 2 || clusters >= data.len() {
                return Err(CliError::Config(format!(
                    "{clusters} clusters for {} series",
                    data.len()
                )));
            }
            Ok(Loaded { data, clusters })
        });
        match outcome {
            Ok(l) => {
                let _ = writeln!(
                    manifest,
                    "processed\t{}\t{origin}\tn={}\tp={}\tc={}",
                    src.name,
                    l.data.len(),
                    l.data.series_len(),
                    l.clusters
                );
                loaded.push((src.name.clone(), l));
            }
            Err(e) => {
                eprintln!("warning: skipping {origin}: {e}");
                let _ = writeln!(manifest, "skipped\t{}\t{origin}\t{e}", src.name);
            }
        }
    }

    let tasks: Vec<(usize, Algorithm, usize)> = (0..loaded.len())
        .flat_map(|d| {
            args.algorithms
                .iter()
                .flat_map(move |&a| (1..=args.runs).map(move |r| (d, a, r)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    let records = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(d, algorithm, run)| {
                let (name, l) = &loaded[d];
                let seed = args.seed.wrapping_add(run as u64);
                let (cfg, _) = build_config(algorithm, l.clusters, seed, &args.settings);
                let result = algorithm.run(&l.data, &cfg)?;
                let truth = l.data.labels().expect("UCR data has labels");
                let cvi = CviReport::compare(result.crisp.labels(), truth)?;
                Ok(BenchmarkRecord {
                    dataset: name.clone(),
                    algorithm,
                    run,
                    seed,
                    ri: cvi.ri,
                    ari: cvi.ari,
                    nmi: cvi.nmi,
                    vi: cvi.vi,
                    iterations: result.iterations,
                    cpu_seconds: if args.no_timing {
                        0.0
                    } else {
                        result.elapsed_seconds
                    },
                })
            })
            .collect::<CliResult<Vec<_>>>()
    })?;

    let csv = write_csv(&records, args.summary);
    let manifest_path = args.manifest.clone().or_else(|| {
        args.output
            .as_ref()
            .map(|o| PathBuf::from(format!("{}.manifest", o.display())))
    });
    if let Some(path) = manifest_path {
        write_file(&path, &manifest)?;
    }
    match &args.output {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}
