use std::collections::HashMap;
use std::fmt::Write as _;

use cshape::{friedman, wilcoxon_signed_rank, Algorithm};

use crate::args::{Index, StatsArgs, TestKind};
use crate::benchmark::{parse_csv, BenchmarkRecord};
use crate::error::{read_file, CliError, CliResult};

/// Per-dataset mean of `metric` for each algorithm, oriented so that larger
/// is better. Rows are datasets (first-appearance order) that have records
/// for every algorithm in `algorithms`.
pub struct ScoreTable {
    pub datasets: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    /// `scores[d][a]`
    pub scores: Vec<Vec<f64>>,
    pub dropped: Vec<String>,
}

pub fn dataset_means(
    records: &[BenchmarkRecord],
    metric: Index,
) -> (Vec<String>, HashMap<(String, Algorithm), f64>) {
    let mut order = Vec::new();
    let mut sums: HashMap<(String, Algorithm), (f64, usize)> = HashMap::new();
    for r in records {
        if !order.contains(&r.dataset) {
            order.push(r.dataset.clone());
        }
        let e = sums
            .entry((r.dataset.clone(), r.algorithm))
            .or_insert((0.0, 0));
        e.0 += r.metric(metric);
        e.1 += 1;
    }
    let means = sums
        .into_iter()
        .map(|(k, (s, n))| (k, s / n as f64))
        .collect();
    (order, means)
}

/// Algorithms in `requested` order, or in order of first appearance.
pub fn resolve_algorithms(
    records: &[BenchmarkRecord],
    requested: &[Algorithm],
) -> CliResult<Vec<Algorithm>> {
    let mut present = Vec::new();
    for r in records {
        if !present.contains(&r.algorithm) {
            present.push(r.algorithm);
        }
    }
    if requested.is_empty() {
        return Ok(present);
    }
    for a in requested {
        if !present.contains(a) {
            return Err(CliError::Config(format!("algorithm {a} not in results")));
        }
    }
    Ok(requested.to_vec())
}

pub fn score_table(
    records: &[BenchmarkRecord],
    algorithms: &[Algorithm],
    metric: Index,
) -> ScoreTable {
    let (order, means) = dataset_means(records, metric);
    let sign = if metric.min_optimal() { -1.0 } else { 1.0 };
    let mut table = ScoreTable {
        datasets: Vec::new(),
        algorithms: algorithms.to_vec(),
        scores: Vec::new(),
        dropped: Vec::new(),
    };
    for d in order {
        let row: Option<Vec<f64>> = algorithms
            .iter()
            .map(|a| means.get(&(d.clone(), *a)).map(|v| sign * v))
            .collect();
        match row {
            Some(r) => {
                table.datasets.push(d);
                table.scores.push(r);
            }
            None => table.dropped.push(d),
        }
    }
    table
}

pub fn fmt_p(p: f64) -> String {
    if p >= 1e-3 {
        format!("{p:.4}")
    } else {
        format!("{p:.3e}")
    }
}

fn fmt_rank_sum(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.1}")
    }
}

pub fn run(args: &StatsArgs) -> CliResult<String> {
    let records = parse_csv(&read_file(&args.results)?)?;
    let algorithms = resolve_algorithms(&records, &args.algorithms)?;
    if algorithms.len() < 2 {
        return Err(CliError::Config(format!(
            "need at least 2 algorithms, found {}",
            algorithms.len()
        )));
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Config("--alpha must lie in (0, 1)".into()));
    }
    let table = score_table(&records, &algorithms, args.metric);
    for d in &table.dropped {
        eprintln!("warning: {d} lacks results for some algorithm; left out");
    }
    let n = table.datasets.len();
    let mut out = String::new();
    match args.test {
        TestKind::Wilcoxon => {
            let _ = writeln!(
                out,
                "# wilcoxon signed-rank, metric={}, datasets={n}, alpha={}",
                args.metric.name(),
                args.alpha
            );
            out.push_str("Method,R+,R-,p-value\n");
            let mut significant = Vec::new();
            for i in 0..algorithms.len() {
                for j in i + 1..algorithms.len() {
                    let left: Vec<f64> = table.scores.iter().map(|r| r[i]).collect();
                    let right: Vec<f64> = table.scores.iter().map(|r| r[j]).collect();
                    // differences left - right: R+ collects datasets where the left method wins
                    let w = wilcoxon_signed_rank(&right, &left, args.alpha)?;
                    let name = format!("{} vs {}", algorithms[i], algorithms[j]);
                    let _ = writeln!(
                        out,
                        "{name},{},{},{}",
                        fmt_rank_sum(w.r_plus),
                        fmt_rank_sum(w.r_minus),
                        fmt_p(w.p_value)
                    );
                    if w.reject {
                        significant.push(name);
                    }
                }
            }
            let _ = writeln!(
                out,
                "# significant: {}",
                if significant.is_empty() {
                    "none".to_string()
                } else {
                    significant.join("; ")
                }
            );
        }
        TestKind::Friedman => {
            let f = friedman(&table.scores, args.alpha)?;
            let _ = writeln!(
                out,
                "# friedman, metric={}, datasets={n}, algorithms={}",
                args.metric.name(),
                f.k
            );
            out.push_str("Method,average rank\n");
            for (a, r) in algorithms.iter().zip(&f.avg_ranks) {
                let _ = writeln!(out, "{a},{r:.4}");
            }
            let _ = writeln!(
                out,
                "# statistic={:.6}, dof={}, p-value={}, reject={}",
                f.statistic,
                f.k - 1,
                fmt_p(f.p_value),
                if f.reject { "yes" } else { "no" }
            );
        }
    }
    Ok(out)
}
